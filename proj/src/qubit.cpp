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

#include "fockqnn/qubit.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace fockqnn {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kReadout = 0;

void require_qubit(int q, int qubits) {
    if (q < 0 || q >= qubits) {
        throw std::out_of_range("qubit " + std::to_string(q) + " outside register of " +
                                std::to_string(qubits));
    }
}

std::size_t bit_of(int q, int qubits) { return std::size_t{1} << (qubits - 1 - q); }

Complex phase(double angle) { return std::polar(1.0, angle); }

// Density of the readout after the final H, given the pre-H density.
ReadoutResult finish_readout(const ComplexMatrix &rho_before_h) {
    const ComplexMatrix h = qubit_gate(QubitGate::H);
    ReadoutResult out;
    out.density = h * rho_before_h * h.adjoint();
    out.z_expectation = (out.density(0, 0) - out.density(1, 1)).real();
    return out;
}

template <class Array> Array to_array(const std::vector<double> &v, const char *what) {
    if (v.size() != kDataQubits) {
        throw std::invalid_argument(std::string(what) + " must have " +
                                    std::to_string(kDataQubits) + " entries, got " +
                                    std::to_string(v.size()));
    }
    Array a{};
    std::copy(v.begin(), v.end(), a.begin());
    return a;
}

} // namespace

QubitState::QubitState(ComplexVector amplitudes, int qubits)
    : amps_(std::move(amplitudes)), qubits_(qubits) {
    if (qubits < 1 || qubits > 26) {
        throw DimensionError("qubit count must be in 1..26");
    }
    if (amps_.size() != (Eigen::Index{1} << qubits)) {
        throw DimensionError("amplitude length does not match 2^qubits");
    }
    if (std::abs(amps_.norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("qubit state is not normalized");
    }
}

QubitState QubitState::zeros(int qubits) {
    ComplexVector v = ComplexVector::Zero(Eigen::Index{1} << qubits);
    v(0) = 1.0;
    return QubitState(std::move(v), qubits);
}

void QubitState::apply(const ComplexMatrix &gate, int q) {
    require_qubit(q, qubits_);
    if (gate.rows() != 2 || gate.cols() != 2) {
        throw DimensionError("single-qubit gate must be 2x2");
    }
    const std::size_t bit = bit_of(q, qubits_);
    const auto size = static_cast<std::size_t>(amps_.size());
    for (std::size_t i = 0; i < size; ++i) {
        if (i & bit) {
            continue;
        }
        const Complex a0 = amps_(i);
        const Complex a1 = amps_(i | bit);
        amps_(i) = gate(0, 0) * a0 + gate(0, 1) * a1;
        amps_(i | bit) = gate(1, 0) * a0 + gate(1, 1) * a1;
    }
}

void QubitState::apply(const ComplexMatrix &gate, int q0, int q1) {
    require_qubit(q0, qubits_);
    require_qubit(q1, qubits_);
    if (q0 == q1) {
        throw std::invalid_argument("two-qubit gate needs distinct qubits");
    }
    if (gate.rows() != 4 || gate.cols() != 4) {
        throw DimensionError("two-qubit gate must be 4x4");
    }
    const std::size_t b0 = bit_of(q0, qubits_);
    const std::size_t b1 = bit_of(q1, qubits_);
    const auto size = static_cast<std::size_t>(amps_.size());
    Eigen::Vector4cd local;
    for (std::size_t i = 0; i < size; ++i) {
        if (i & (b0 | b1)) {
            continue;
        }
        const std::array<std::size_t, 4> idx{i, i | b1, i | b0, i | b0 | b1};
        for (int r = 0; r < 4; ++r) {
            local(r) = amps_(idx[r]);
        }
        const Eigen::Vector4cd mixed = gate * local;
        for (int r = 0; r < 4; ++r) {
            amps_(idx[r]) = mixed(r);
        }
    }
}

ComplexMatrix QubitState::reduced_density(int q) const {
    require_qubit(q, qubits_);
    const std::size_t bit = bit_of(q, qubits_);
    ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
    const auto size = static_cast<std::size_t>(amps_.size());
    for (std::size_t i = 0; i < size; ++i) {
        if (i & bit) {
            continue;
        }
        const Complex a0 = amps_(i);
        const Complex a1 = amps_(i | bit);
        rho(0, 0) += std::norm(a0);
        rho(1, 1) += std::norm(a1);
        rho(0, 1) += a0 * std::conj(a1);
    }
    rho(1, 0) = std::conj(rho(0, 1));
    return rho;
}

ComplexMatrix qubit_gate(QubitGate gate, double param) {
    if (!std::isfinite(param)) {
        throw std::invalid_argument("gate parameter must be finite");
    }
    const Complex i{0.0, 1.0};
    switch (gate) {
    case QubitGate::H: {
        ComplexMatrix m(2, 2);
        m << 1.0, 1.0, 1.0, -1.0;
        return m / std::sqrt(2.0);
    }
    case QubitGate::X: {
        ComplexMatrix m(2, 2);
        m << 0.0, 1.0, 1.0, 0.0;
        return m;
    }
    case QubitGate::Z: {
        ComplexMatrix m(2, 2);
        m << 1.0, 0.0, 0.0, -1.0;
        return m;
    }
    case QubitGate::Ry: {
        const double c = std::cos(param / 2.0);
        const double s = std::sin(param / 2.0);
        ComplexMatrix m(2, 2);
        m << c, -s, s, c;
        return m;
    }
    case QubitGate::XXpow: {
        const Complex c = std::cos(kPi * param / 2.0);
        const Complex s = -i * std::sin(kPi * param / 2.0);
        ComplexMatrix m = ComplexMatrix::Zero(4, 4);
        for (int r = 0; r < 4; ++r) {
            m(r, r) = c;
            m(r, 3 - r) = s;
        }
        return m;
    }
    case QubitGate::ZZpow: {
        ComplexMatrix m = ComplexMatrix::Zero(4, 4);
        m(0, 0) = 1.0;
        m(1, 1) = phase(kPi * param);
        m(2, 2) = phase(kPi * param);
        m(3, 3) = 1.0;
        return m;
    }
    }
    throw std::invalid_argument("unknown qubit gate");
}

ComplexMatrix qubit_gate(std::string_view name, double param) {
    static const std::array<std::pair<std::string_view, QubitGate>, 6> table{{
        {"H", QubitGate::H},
        {"X", QubitGate::X},
        {"Z", QubitGate::Z},
        {"Ry", QubitGate::Ry},
        {"XXpow", QubitGate::XXpow},
        {"ZZpow", QubitGate::ZZpow},
    }};
    for (const auto &[key, gate] : table) {
        if (key == name) {
            return qubit_gate(gate, param);
        }
    }
    throw std::invalid_argument("unknown qubit gate '" + std::string(name) + "'");
}

ReadoutResult google_circuit(const PixelBits &bits, const QubitAngles &t, const QubitAngles &s) {
    // Readout after X then H.
    const ComplexMatrix h = qubit_gate(QubitGate::H);
    const Eigen::Vector2cd readout = h * qubit_gate(QubitGate::X) * Eigen::Vector2cd(1.0, 0.0);

    // The XX layer leaves the readout in its X eigenstate, so after it the
    // register is readout (x) phi_0 (x) ... (x) phi_15. Each ZZ is diagonal and
    // only splits phi_k into one branch per readout basis state; the readout
    // coherence is the product of the per-qubit branch overlaps.
    Complex overlap = 1.0;
    double weight0 = 1.0;
    double weight1 = 1.0;
    for (int k = 0; k < kDataQubits; ++k) {
        const Eigen::Vector2cd data = bits[k] ? Eigen::Vector2cd(0.0, 1.0) : Eigen::Vector2cd(1.0, 0.0);
        Eigen::Vector4cd pair;
        pair << readout(0) * data(0), readout(0) * data(1), readout(1) * data(0),
            readout(1) * data(1);
        pair = qubit_gate(QubitGate::XXpow, t[k]) * pair;

        const Eigen::Vector2cd phi = pair.head<2>() / readout(0);
        if ((pair.tail<2>() - readout(1) * phi).norm() > 1e-12) {
            throw std::logic_error("XX layer did not leave the readout separable");
        }

        const ComplexMatrix zz = qubit_gate(QubitGate::ZZpow, s[k]);
        Eigen::Vector4cd upper = Eigen::Vector4cd::Zero();
        Eigen::Vector4cd lower = Eigen::Vector4cd::Zero();
        upper.head<2>() = phi;
        lower.tail<2>() = phi;
        const Eigen::Vector2cd branch0 = (zz * upper).head<2>();
        const Eigen::Vector2cd branch1 = (zz * lower).tail<2>();
        overlap *= branch1.dot(branch0);
        weight0 *= branch0.squaredNorm();
        weight1 *= branch1.squaredNorm();
    }

    ComplexMatrix rho(2, 2);
    rho(0, 0) = std::norm(readout(0)) * weight0;
    rho(1, 1) = std::norm(readout(1)) * weight1;
    rho(0, 1) = readout(0) * std::conj(readout(1)) * overlap;
    rho(1, 0) = std::conj(rho(0, 1));
    return finish_readout(rho);
}

ReadoutResult google_circuit(const std::vector<bool> &bits, const std::vector<double> &t,
                             const std::vector<double> &s) {
    if (bits.size() != kDataQubits) {
        throw std::invalid_argument("pixel bits must have " + std::to_string(kDataQubits) +
                                    " entries, got " + std::to_string(bits.size()));
    }
    PixelBits b{};
    std::copy(bits.begin(), bits.end(), b.begin());
    return google_circuit(b, to_array<QubitAngles>(t, "t"), to_array<QubitAngles>(s, "s"));
}

ReadoutResult google_circuit_statevector(const PixelBits &bits, const QubitAngles &t,
                                         const QubitAngles &s) {
    QubitState state = QubitState::zeros(kDataQubits + 1);
    const ComplexMatrix x = qubit_gate(QubitGate::X);
    const ComplexMatrix h = qubit_gate(QubitGate::H);
    for (int k = 0; k < kDataQubits; ++k) {
        if (bits[k]) {
            state.apply(x, k + 1);
        }
    }
    state.apply(x, kReadout);
    state.apply(h, kReadout);
    for (int k = 0; k < kDataQubits; ++k) {
        state.apply(qubit_gate(QubitGate::XXpow, t[k]), kReadout, k + 1);
    }
    for (int k = 0; k < kDataQubits; ++k) {
        state.apply(qubit_gate(QubitGate::ZZpow, s[k]), kReadout, k + 1);
    }
    state.apply(h, kReadout);
    ReadoutResult out;
    out.density = state.reduced_density(kReadout);
    out.z_expectation = (out.density(0, 0) - out.density(1, 1)).real();
    return out;
}

ComplexVector closed_form_readout(const QubitAngles &s) {
    double total = 0.0;
    for (double v : s) {
        total += v;
    }
    const Complex w = phase(kPi * total);
    ComplexVector psi(2);
    psi << 1.0 - w, 1.0 + w;
    return psi / psi.norm();
}

double closed_form_z(const QubitAngles &s) {
    const ComplexVector psi = closed_form_readout(s);
    return std::norm(psi(0)) - std::norm(psi(1));
}

double state_fidelity(const ComplexMatrix &rho, const ComplexVector &psi) {
    return psi.dot(rho * psi).real();
}

double trace_distance(const ComplexMatrix &a, const ComplexMatrix &b) {
    const Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a - b);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

PixelBits binarize_resize(const std::vector<double> &image) {
    constexpr int kSide = 28;
    constexpr int kBlock = 7;
    if (image.size() != kSide * kSide) {
        throw std::invalid_argument("image must have 784 pixels");
    }
    PixelBits bits{};
    for (int br = 0; br < 4; ++br) {
        for (int bc = 0; bc < 4; ++bc) {
            double sum = 0.0;
            for (int r = 0; r < kBlock; ++r) {
                for (int c = 0; c < kBlock; ++c) {
                    sum += image[static_cast<std::size_t>((br * kBlock + r) * kSide + bc * kBlock + c)];
                }
            }
            bits[static_cast<std::size_t>(br * 4 + bc)] = sum / (255.0 * kBlock * kBlock) > 0.5;
        }
    }
    return bits;
}

std::array<double, 2> ry_head(double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {(c - s) * (c - s) / 2.0, (c + s) * (c + s) / 2.0};
}

PhaseShiftGradient phase_shift_grad(const std::function<double(double)> &statistic, double theta,
                                    double delta) {
    if (!(delta > 0.0)) {
        throw std::invalid_argument("delta must be positive");
    }
    PhaseShiftGradient g;
    g.difference = statistic(theta + delta) - statistic(theta - delta);
    g.scaled = g.difference / (2.0 * delta);
    return g;
}

PhaseShiftGradient phase_shift_grad(double theta, double delta) {
    return phase_shift_grad([](double th) { return ry_head(th)[1]; }, theta, delta);
}

namespace {

std::string google_report(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0);
    std::bernoulli_distribution coin(0.5);
    PixelBits bits{};
    QubitAngles t{};
    QubitAngles s{};
    for (int k = 0; k < kDataQubits; ++k) {
        bits[k] = coin(rng);
        t[k] = angle(rng);
        s[k] = angle(rng);
    }
    const ReadoutResult pair = google_circuit(bits, t, s);
    const ReadoutResult full = google_circuit_statevector(bits, t, s);
    const double purity = (pair.density * pair.density).trace().real();

    QubitAngles zero_s{};
    const ReadoutResult zero = google_circuit(bits, t, zero_s);

    std::ostringstream out;
    out << std::setprecision(12);
    out << "demo=google seed=" << seed << "\n";
    out << "bits=";
    for (bool b : bits) {
        out << (b ? '1' : '0');
    }
    out << "\n";
    out << "z_pairwise=" << pair.z_expectation << "\n";
    out << "z_statevector=" << full.z_expectation << "\n";
    out << "trace_distance_pairwise_vs_statevector=" << trace_distance(pair.density, full.density)
        << "\n";
    out << "readout_purity=" << purity << "\n";
    out << "z_closed_form=" << closed_form_z(s) << "\n";
    out << "fidelity_closed_form=" << state_fidelity(pair.density, closed_form_readout(s)) << "\n";
    out << "z_with_s_zero=" << zero.z_expectation << "\n";
    return out.str();
}

std::string qiskit_report(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    const double theta = angle(rng);
    const auto probs = ry_head(theta);
    const auto grad = phase_shift_grad(theta, 1e-4);
    const double analytic = std::cos(theta) / 2.0;

    std::ostringstream out;
    out << std::setprecision(12);
    out << "demo=qiskit seed=" << seed << "\n";
    out << "theta=" << theta << "\n";
    out << "p0=" << probs[0] << " p1=" << probs[1] << "\n";
    out << "grad_difference=" << grad.difference << "\n";
    out << "grad_scaled=" << grad.scaled << "\n";
    out << "grad_analytic=" << analytic << "\n";
    out << "grad_error=" << std::abs(grad.scaled - analytic) << "\n";
    return out.str();
}

} // namespace

std::string appendix_report(std::string_view demo, std::uint64_t seed) {
    if (demo == "google") {
        return google_report(seed);
    }
    if (demo == "qiskit") {
        return qiskit_report(seed);
    }
    throw std::invalid_argument("unknown demo '" + std::string(demo) + "'");
}

} // namespace fockqnn
