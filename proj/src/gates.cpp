// Copyright 2026 The fockqnn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fockqnn/gates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

namespace fockqnn {

namespace {

constexpr Eigen::Index kMaxExpSide = 4096;

// Pade coefficients and 1-norm thresholds for degrees 3, 5, 7, 9, 13
// (Higham, "The scaling and squaring method for the matrix exponential revisited").
constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                          25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9 = {17643225600.0, 8821612800.0, 2075673600.0,
                                           302702400.0,   30270240.0,   2162160.0,
                                           110880.0,      3960.0,       90.0,
                                           1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

double one_norm(const ComplexMatrix &m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

// Low-degree approximant from even powers: U = A * sum b_{2k+1} A^{2k}, V = sum b_{2k} A^{2k}.
template <std::size_t N>
void pade_low(const ComplexMatrix &a, const std::array<double, N> &b, ComplexMatrix &u,
              ComplexMatrix &v) {
    const Eigen::Index side = a.rows();
    const ComplexMatrix a2 = a * a;
    ComplexMatrix power = ComplexMatrix::Identity(side, side);
    ComplexMatrix odd = ComplexMatrix::Zero(side, side);
    v = ComplexMatrix::Zero(side, side);
    for (std::size_t k = 0; 2 * k + 1 < N; ++k) {
        odd += b[2 * k + 1] * power;
        v += b[2 * k] * power;
        power = power * a2;
    }
    u = a * odd;
}

void pade13(const ComplexMatrix &a, ComplexMatrix &u, ComplexMatrix &v) {
    const auto &b = kPade13;
    const Eigen::Index side = a.rows();
    const ComplexMatrix ident = ComplexMatrix::Identity(side, side);
    const ComplexMatrix a2 = a * a;
    const ComplexMatrix a4 = a2 * a2;
    const ComplexMatrix a6 = a4 * a2;
    const ComplexMatrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
                                  b[5] * a4 + b[3] * a2 + b[1] * ident;
    u = a * u_inner;
    v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 +
        b[0] * ident;
}

// exp() of a generator that conserves some integer label: exponentiates each
// label block independently. labels[i] is the block of basis index i.
ComplexMatrix block_matrix_exp(const ComplexMatrix &gen, const std::vector<int> &labels) {
    const Eigen::Index side = gen.rows();
    ComplexMatrix out = ComplexMatrix::Zero(side, side);
    const int max_label = *std::max_element(labels.begin(), labels.end());
    std::vector<Eigen::Index> idx;
    for (int label = 0; label <= max_label; ++label) {
        idx.clear();
        for (Eigen::Index i = 0; i < side; ++i) {
            if (labels[static_cast<std::size_t>(i)] == label) {
                idx.push_back(i);
            }
        }
        if (idx.empty()) {
            continue;
        }
        const auto bs = static_cast<Eigen::Index>(idx.size());
        ComplexMatrix sub(bs, bs);
        for (Eigen::Index r = 0; r < bs; ++r) {
            for (Eigen::Index c = 0; c < bs; ++c) {
                sub(r, c) = gen(idx[r], idx[c]);
            }
        }
        const ComplexMatrix e = matrix_exp(sub);
        for (Eigen::Index r = 0; r < bs; ++r) {
            for (Eigen::Index c = 0; c < bs; ++c) {
                out(idx[r], idx[c]) = e(r, c);
            }
        }
    }
    return out;
}

void require_finite(double v, const char *name) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string(name) + " must be finite");
    }
}

void require_magnitude(Complex v, const char *name) {
    require_finite(v.real(), name);
    require_finite(v.imag(), name);
    if (std::abs(v) > kMaxGateMagnitude) {
        std::ostringstream msg;
        msg << "|" << name << "| = " << std::abs(v) << " exceeds the cap " << kMaxGateMagnitude;
        throw std::invalid_argument(msg.str());
    }
}

} // namespace

ComplexMatrix matrix_exp(const ComplexMatrix &m) {
    if (m.rows() != m.cols()) {
        throw DimensionError("matrix_exp needs a square matrix");
    }
    if (m.rows() > kMaxExpSide) {
        throw DimensionError("matrix_exp: side exceeds 4096");
    }
    if (!m.allFinite()) {
        throw std::domain_error("matrix_exp: non-finite entries");
    }
    const Eigen::Index side = m.rows();
    if (side == 0) {
        return m;
    }
    const double norm = one_norm(m);
    ComplexMatrix u;
    ComplexMatrix v;
    int squarings = 0;
    if (norm <= kTheta3) {
        pade_low(m, kPade3, u, v);
    } else if (norm <= kTheta5) {
        pade_low(m, kPade5, u, v);
    } else if (norm <= kTheta7) {
        pade_low(m, kPade7, u, v);
    } else if (norm <= kTheta9) {
        pade_low(m, kPade9, u, v);
    } else {
        squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
        const ComplexMatrix scaled = m / std::ldexp(1.0, squarings);
        pade13(scaled, u, v);
    }
    ComplexMatrix result = (v - u).partialPivLu().solve(v + u);
    for (int i = 0; i < squarings; ++i) {
        result = result * result;
    }
    return result;
}

FockOperator matrix_exp(const FockOperator &m) {
    return {matrix_exp(m.matrix()), m.arity(), m.cutoff()};
}

FockOperator rotation(double phi, CutoffDim n) {
    require_finite(phi, "phi");
    ComplexMatrix m = ComplexMatrix::Zero(n.value(), n.value());
    for (int k = 0; k < n.value(); ++k) {
        m(k, k) = std::polar(1.0, phi * k);
    }
    return {std::move(m), 1, n};
}

FockOperator squeezer(Complex z, CutoffDim n) {
    require_magnitude(z, "z");
    const ComplexMatrix a = annihilation_op(n).matrix();
    const ComplexMatrix a2 = a * a;
    const ComplexMatrix gen = 0.5 * (std::conj(z) * a2 - z * a2.adjoint());
    return {matrix_exp(gen), 1, n};
}

FockOperator displacement(Complex alpha, CutoffDim n) {
    require_magnitude(alpha, "alpha");
    const ComplexMatrix a = annihilation_op(n).matrix();
    const ComplexMatrix gen = alpha * a.adjoint() - std::conj(alpha) * a;
    return {matrix_exp(gen), 1, n};
}

FockOperator beamsplitter(double theta, double phi, CutoffDim n) {
    require_finite(theta, "theta");
    require_finite(phi, "phi");
    const FockOperator a = annihilation_op(n);
    const FockOperator id = FockOperator::identity(1, n);
    const ComplexMatrix a_first = kron_ops(a, id).matrix();
    const ComplexMatrix a_second = kron_ops(id, a).matrix();
    const ComplexMatrix hop = a_first.adjoint() * a_second;
    const ComplexMatrix gen = theta * (std::polar(1.0, phi) * hop - std::polar(1.0, -phi) * hop.adjoint());

    // The generator conserves total photon number, so exponentiate per sector.
    const int nv = n.value();
    std::vector<int> total(static_cast<std::size_t>(nv * nv));
    for (int j = 0; j < nv; ++j) {
        for (int k = 0; k < nv; ++k) {
            total[static_cast<std::size_t>(j * nv + k)] = j + k;
        }
    }
    return {block_matrix_exp(gen, total), 2, n};
}

FockOperator kerr(double kappa, CutoffDim n) {
    require_finite(kappa, "kappa");
    ComplexMatrix m = ComplexMatrix::Zero(n.value(), n.value());
    for (int k = 0; k < n.value(); ++k) {
        m(k, k) = std::polar(1.0, kappa * k * k);
    }
    return {std::move(m), 1, n};
}

void GateParams::validate() const {
    require_magnitude(z, "z");
    require_magnitude(alpha, "alpha");
    require_finite(phi, "phi");
    require_finite(theta, "theta");
    require_finite(phi_bs, "phi_bs");
    require_finite(kappa, "kappa");
}

void InterferometerParams::validate(int modes) const {
    if (modes < 1) {
        throw std::invalid_argument("interferometer needs at least one mode");
    }
    const auto pairs = static_cast<std::size_t>(modes - 1);
    if (bs_thetas.size() != pairs || bs_phis.size() != pairs ||
        rot_phis.size() != static_cast<std::size_t>(modes)) {
        throw DimensionError("interferometer on " + std::to_string(modes) + " modes needs " +
                             std::to_string(pairs) + " beamsplitter angle pairs and " +
                             std::to_string(modes) + " rotations");
    }
}

FockOperator interferometer(const InterferometerParams &p, int modes, CutoffDim n) {
    p.validate(modes);
    FockOperator total = FockOperator::identity(modes, n);
    for (int j = 0; j + 1 < modes; ++j) {
        FockOperator bs = beamsplitter(p.bs_thetas[static_cast<std::size_t>(j)],
                                       p.bs_phis[static_cast<std::size_t>(j)], n);
        if (j > 0) {
            bs = kron_ops(FockOperator::identity(j, n), bs);
        }
        if (j + 2 < modes) {
            bs = kron_ops(bs, FockOperator::identity(modes - j - 2, n));
        }
        total = bs * total;
    }
    for (int j = 0; j < modes; ++j) {
        total = embed_single_mode(rotation(p.rot_phis[static_cast<std::size_t>(j)], n), j, modes) *
                total;
    }
    return total;
}

double unitarity_error(const ComplexMatrix &u) {
    const Eigen::Index side = u.rows();
    return (u.adjoint() * u - ComplexMatrix::Identity(side, side)).cwiseAbs().maxCoeff();
}

double UnitarityReport::worst() const {
    double w = 0.0;
    for (const auto &f : families) {
        w = std::max(w, f.max_error);
    }
    return w;
}

std::string UnitarityReport::to_text() const {
    std::ostringstream out;
    out << "unitarity check: cutoff=" << cutoff << " trials=" << trials << " seed=" << seed
        << "\n";
    for (const auto &f : families) {
        out << "  " << std::left << std::setw(14) << f.family << " max|U^dag U - I| = "
            << std::scientific << std::setprecision(3) << f.max_error << "\n";
    }
    return out.str();
}

UnitarityReport gate_unitarity_report(CutoffDim n, int trials, std::uint64_t seed) {
    if (trials < 1) {
        throw std::invalid_argument("trials must be >= 1");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> kerr_strength(-std::numbers::pi, std::numbers::pi);

    UnitarityReport report;
    report.cutoff = n.value();
    report.trials = trials;
    report.seed = seed;
    report.families = {{"rotation", 0.0},
                       {"squeezer", 0.0},
                       {"displacement", 0.0},
                       {"beamsplitter", 0.0},
                       {"kerr", 0.0}};
    auto record = [&](std::size_t family, const FockOperator &u) {
        report.families[family].max_error =
            std::max(report.families[family].max_error, unitarity_error(u.matrix()));
    };
    for (int t = 0; t < trials; ++t) {
        GateParams p;
        p.phi = angle(rng);
        p.z = std::polar(unit(rng), angle(rng));
        p.alpha = std::polar(unit(rng), angle(rng));
        p.theta = angle(rng);
        p.phi_bs = angle(rng);
        p.kappa = kerr_strength(rng);
        record(0, rotation(p.phi, n));
        record(1, squeezer(p.z, n));
        record(2, displacement(p.alpha, n));
        record(3, beamsplitter(p.theta, p.phi_bs, n));
        record(4, kerr(p.kappa, n));
    }
    return report;
}

} // namespace fockqnn
