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

#include "fockqnn/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fockqnn {

namespace {

// Dense registers above this many amplitudes are refused outright.
constexpr std::size_t kMaxRegister = std::size_t{1} << 26;

std::size_t ipow(std::size_t base, int exp) {
    std::size_t out = 1;
    for (int i = 0; i < exp; ++i) {
        out *= base;
    }
    return out;
}

void require_same_cutoff(CutoffDim a, CutoffDim b, const char *what) {
    if (a != b) {
        throw DimensionError(std::string(what) + ": cutoff mismatch (" +
                             std::to_string(a.value()) + " vs " + std::to_string(b.value()) +
                             ")");
    }
}

void require_mode(int mode, int modes) {
    if (mode < 0 || mode >= modes) {
        throw std::out_of_range("mode " + std::to_string(mode) + " outside register of " +
                                std::to_string(modes) + " modes");
    }
}

} // namespace

CutoffDim::CutoffDim(int n) : n_(n) {
    if (n < 2) {
        throw std::invalid_argument("cutoff dimension must be >= 2, got " + std::to_string(n));
    }
}

std::size_t register_size(CutoffDim n, int modes) {
    if (modes < 1) {
        throw std::invalid_argument("register needs at least one mode");
    }
    std::size_t size = 1;
    const auto base = static_cast<std::size_t>(n.value());
    for (int i = 0; i < modes; ++i) {
        if (size > kMaxRegister / base) {
            throw std::length_error("register of " + std::to_string(modes) +
                                    " modes at cutoff " + std::to_string(n.value()) +
                                    " is too large");
        }
        size *= base;
    }
    return size;
}

MultiModeState::MultiModeState(ComplexVector amplitudes, int modes, CutoffDim cutoff)
    : amplitudes_(std::move(amplitudes)), modes_(modes), cutoff_(cutoff) {
    const std::size_t expected = register_size(cutoff, modes);
    if (static_cast<std::size_t>(amplitudes_.size()) != expected) {
        throw DimensionError("state length " + std::to_string(amplitudes_.size()) +
                             " != n^m = " + std::to_string(expected));
    }
}

MultiModeState MultiModeState::vacuum(int modes, CutoffDim cutoff) {
    ComplexVector amps = ComplexVector::Zero(static_cast<Eigen::Index>(register_size(cutoff, modes)));
    amps(0) = 1.0;
    return {std::move(amps), modes, cutoff};
}

MultiModeState MultiModeState::normalized() const {
    const double nrm = amplitudes_.norm();
    if (nrm == 0.0) {
        throw std::domain_error("cannot normalize the zero vector");
    }
    return {amplitudes_ / nrm, modes_, cutoff_};
}

FockOperator::FockOperator(ComplexMatrix matrix, int arity, CutoffDim cutoff)
    : matrix_(std::move(matrix)), arity_(arity), cutoff_(cutoff) {
    const std::size_t side = register_size(cutoff, arity);
    if (matrix_.rows() != matrix_.cols() || static_cast<std::size_t>(matrix_.rows()) != side) {
        throw DimensionError("operator of arity " + std::to_string(arity) + " must be " +
                             std::to_string(side) + "x" + std::to_string(side));
    }
}

FockOperator FockOperator::identity(int arity, CutoffDim cutoff) {
    const auto side = static_cast<Eigen::Index>(register_size(cutoff, arity));
    return {ComplexMatrix::Identity(side, side), arity, cutoff};
}

FockOperator FockOperator::adjoint() const { return {matrix_.adjoint(), arity_, cutoff_}; }

FockOperator operator*(const FockOperator &lhs, const FockOperator &rhs) {
    require_same_cutoff(lhs.cutoff_, rhs.cutoff_, "operator product");
    if (lhs.arity_ != rhs.arity_) {
        throw DimensionError("operator product: arity mismatch");
    }
    return {lhs.matrix_ * rhs.matrix_, lhs.arity_, lhs.cutoff_};
}

SingleModeDensity::SingleModeDensity(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 2) {
        throw DimensionError("density matrix must be square with side >= 2");
    }
    const double scale = std::max(1.0, matrix_.cwiseAbs().maxCoeff());
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw std::invalid_argument("density matrix is not Hermitian");
    }
}

MultiModeState fock_basis_state(int k, CutoffDim n) {
    if (k < 0 || k >= n.value()) {
        throw std::out_of_range("Fock level " + std::to_string(k) + " outside cutoff " +
                                std::to_string(n.value()));
    }
    ComplexVector amps = ComplexVector::Zero(n.value());
    amps(k) = 1.0;
    return {std::move(amps), 1, n};
}

FockOperator creation_op(CutoffDim n) {
    ComplexMatrix m = ComplexMatrix::Zero(n.value(), n.value());
    for (int k = 0; k + 1 < n.value(); ++k) {
        m(k + 1, k) = std::sqrt(static_cast<double>(k + 1));
    }
    return {std::move(m), 1, n};
}

FockOperator annihilation_op(CutoffDim n) {
    ComplexMatrix m = ComplexMatrix::Zero(n.value(), n.value());
    for (int k = 1; k < n.value(); ++k) {
        m(k - 1, k) = std::sqrt(static_cast<double>(k));
    }
    return {std::move(m), 1, n};
}

// Equal to creation_op(n) * annihilation_op(n) up to the rounding of sqrt(k)^2.
FockOperator number_op(CutoffDim n) {
    ComplexMatrix m = ComplexMatrix::Zero(n.value(), n.value());
    for (int k = 0; k < n.value(); ++k) {
        m(k, k) = static_cast<double>(k);
    }
    return {std::move(m), 1, n};
}

MultiModeState tensor_states(const MultiModeState &a, const MultiModeState &b) {
    require_same_cutoff(a.cutoff(), b.cutoff(), "tensor_states");
    const auto &x = a.amplitudes();
    const auto &y = b.amplitudes();
    ComplexVector out(x.size() * y.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        out.segment(i * y.size(), y.size()) = x(i) * y;
    }
    return {std::move(out), a.modes() + b.modes(), a.cutoff()};
}

FockOperator kron_ops(const FockOperator &a, const FockOperator &b) {
    require_same_cutoff(a.cutoff(), b.cutoff(), "kron_ops");
    const auto &x = a.matrix();
    const auto &y = b.matrix();
    ComplexMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
        }
    }
    return {std::move(out), a.arity() + b.arity(), a.cutoff()};
}

FockOperator embed_single_mode(const FockOperator &op, int mode, int modes) {
    if (op.arity() != 1) {
        throw DimensionError("embed_single_mode needs a one-mode operator");
    }
    require_mode(mode, modes);
    const CutoffDim n = op.cutoff();
    FockOperator out = mode == 0 ? op : FockOperator::identity(mode, n);
    if (mode > 0) {
        out = kron_ops(out, op);
    }
    if (mode + 1 < modes) {
        out = kron_ops(out, FockOperator::identity(modes - mode - 1, n));
    }
    return out;
}

MultiModeState apply(const FockOperator &op, const MultiModeState &state) {
    require_same_cutoff(op.cutoff(), state.cutoff(), "apply");
    if (op.side() != state.size()) {
        throw DimensionError("apply: operator side " + std::to_string(op.side()) +
                             " != state length " + std::to_string(state.size()));
    }
    return {op.matrix() * state.amplitudes(), state.modes(), state.cutoff()};
}

MultiModeState apply_single_mode(const FockOperator &op, const MultiModeState &state,
                                 int mode) {
    require_same_cutoff(op.cutoff(), state.cutoff(), "apply_single_mode");
    if (op.arity() != 1) {
        throw DimensionError("apply_single_mode needs a one-mode operator");
    }
    require_mode(mode, state.modes());
    ComplexVector amps = state.amplitudes();
    ComplexVector scratch;
    detail::apply_single_mode_inplace(op.matrix(), amps, state.cutoff().value(), state.modes(),
                                      mode, scratch);
    return {std::move(amps), state.modes(), state.cutoff()};
}

MultiModeState apply_two_mode(const FockOperator &op, const MultiModeState &state,
                              int first_mode) {
    require_same_cutoff(op.cutoff(), state.cutoff(), "apply_two_mode");
    if (op.arity() != 2) {
        throw DimensionError("apply_two_mode needs a two-mode operator");
    }
    require_mode(first_mode, state.modes());
    require_mode(first_mode + 1, state.modes());
    ComplexVector amps = state.amplitudes();
    ComplexVector scratch;
    detail::apply_two_mode_inplace(op.matrix(), amps, state.cutoff().value(), state.modes(),
                                   first_mode, scratch);
    return {std::move(amps), state.modes(), state.cutoff()};
}

Complex inner_product(const MultiModeState &a, const MultiModeState &b) {
    require_same_cutoff(a.cutoff(), b.cutoff(), "inner_product");
    if (a.modes() != b.modes()) {
        throw DimensionError("inner_product: mode count mismatch");
    }
    return a.amplitudes().dot(b.amplitudes());
}

SingleModeDensity partial_trace(const MultiModeState &state, int keep_mode) {
    require_mode(keep_mode, state.modes());
    const auto n = static_cast<std::size_t>(state.cutoff().value());
    const std::size_t inner = ipow(n, state.modes() - 1 - keep_mode);
    const std::size_t outer = ipow(n, keep_mode);
    const auto &psi = state.amplitudes();

    ComplexMatrix rho = ComplexMatrix::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(n));
    for (std::size_t o = 0; o < outer; ++o) {
        const std::size_t base = o * n * inner;
        for (std::size_t r = 0; r < inner; ++r) {
            for (std::size_t k = 0; k < n; ++k) {
                const Complex ak = psi(static_cast<Eigen::Index>(base + k * inner + r));
                if (ak == Complex{}) {
                    continue;
                }
                for (std::size_t l = 0; l < n; ++l) {
                    rho(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) +=
                        ak * std::conj(psi(static_cast<Eigen::Index>(base + l * inner + r)));
                }
            }
        }
    }
    // Symmetrize away rounding so the Hermitian check is exact.
    ComplexMatrix herm = 0.5 * (rho + rho.adjoint());
    return SingleModeDensity(std::move(herm));
}

namespace detail {

void apply_single_mode_inplace(const ComplexMatrix &op, ComplexVector &amps, int n, int modes,
                               int mode, ComplexVector &scratch) {
    const auto un = static_cast<std::size_t>(n);
    const std::size_t inner = ipow(un, modes - 1 - mode);
    const std::size_t outer = ipow(un, mode);
    scratch.resize(n);
    for (std::size_t o = 0; o < outer; ++o) {
        const std::size_t base = o * un * inner;
        for (std::size_t r = 0; r < inner; ++r) {
            for (std::size_t k = 0; k < un; ++k) {
                scratch(static_cast<Eigen::Index>(k)) =
                    amps(static_cast<Eigen::Index>(base + k * inner + r));
            }
            for (std::size_t k = 0; k < un; ++k) {
                Complex acc{};
                for (std::size_t l = 0; l < un; ++l) {
                    acc += op(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) *
                           scratch(static_cast<Eigen::Index>(l));
                }
                amps(static_cast<Eigen::Index>(base + k * inner + r)) = acc;
            }
        }
    }
}

void apply_two_mode_inplace(const ComplexMatrix &op, ComplexVector &amps, int n, int modes,
                            int first_mode, ComplexVector &scratch) {
    const auto un = static_cast<std::size_t>(n);
    const std::size_t block = un * un;
    const std::size_t inner = ipow(un, modes - 2 - first_mode);
    const std::size_t outer = ipow(un, first_mode);
    scratch.resize(static_cast<Eigen::Index>(block));
    for (std::size_t o = 0; o < outer; ++o) {
        const std::size_t base = o * block * inner;
        for (std::size_t r = 0; r < inner; ++r) {
            for (std::size_t k = 0; k < block; ++k) {
                scratch(static_cast<Eigen::Index>(k)) =
                    amps(static_cast<Eigen::Index>(base + k * inner + r));
            }
            for (std::size_t k = 0; k < block; ++k) {
                Complex acc{};
                for (std::size_t l = 0; l < block; ++l) {
                    acc += op(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) *
                           scratch(static_cast<Eigen::Index>(l));
                }
                amps(static_cast<Eigen::Index>(base + k * inner + r)) = acc;
            }
        }
    }
}

} // namespace detail

} // namespace fockqnn
