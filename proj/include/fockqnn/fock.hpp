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

/**
 * @file
 * Truncated Fock-space states and operators.
 *
 * A register of m qumodes at cutoff n is a dense vector of n^m amplitudes.
 * The flat index of |k_0 k_1 ... k_{m-1}> is sum_j k_j * n^(m-1-j), so mode 0
 * is the most significant digit and the leftmost tensor factor.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>

#include <Eigen/Dense>

namespace fockqnn {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Thrown when two operands disagree on cutoff, length or arity.
class DimensionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Number of retained Fock levels |0>..|n-1>. Always at least 2.
class CutoffDim {
  public:
    explicit CutoffDim(int n);

    [[nodiscard]] int value() const noexcept { return n_; }
    friend bool operator==(CutoffDim, CutoffDim) = default;

  private:
    int n_;
};

/// n^m, throwing if the register would not fit a dense vector.
std::size_t register_size(CutoffDim n, int modes);

class MultiModeState {
  public:
    MultiModeState(ComplexVector amplitudes, int modes, CutoffDim cutoff);

    /// |0...0> on `modes` qumodes.
    static MultiModeState vacuum(int modes, CutoffDim cutoff);

    [[nodiscard]] const ComplexVector &amplitudes() const noexcept { return amplitudes_; }
    [[nodiscard]] int modes() const noexcept { return modes_; }
    [[nodiscard]] CutoffDim cutoff() const noexcept { return cutoff_; }
    [[nodiscard]] std::size_t size() const noexcept {
        return static_cast<std::size_t>(amplitudes_.size());
    }
    [[nodiscard]] double norm() const { return amplitudes_.norm(); }

    /// Copy scaled to unit norm. Throws std::domain_error on the zero vector.
    [[nodiscard]] MultiModeState normalized() const;

  private:
    ComplexVector amplitudes_;
    int modes_;
    CutoffDim cutoff_;
};

/// Dense square matrix acting on `arity` consecutive modes.
class FockOperator {
  public:
    FockOperator(ComplexMatrix matrix, int arity, CutoffDim cutoff);

    static FockOperator identity(int arity, CutoffDim cutoff);

    [[nodiscard]] const ComplexMatrix &matrix() const noexcept { return matrix_; }
    [[nodiscard]] int arity() const noexcept { return arity_; }
    [[nodiscard]] CutoffDim cutoff() const noexcept { return cutoff_; }
    [[nodiscard]] std::size_t side() const noexcept {
        return static_cast<std::size_t>(matrix_.rows());
    }

    [[nodiscard]] FockOperator adjoint() const;
    friend FockOperator operator*(const FockOperator &lhs, const FockOperator &rhs);

  private:
    ComplexMatrix matrix_;
    int arity_;
    CutoffDim cutoff_;
};

/// Reduced density matrix of one qumode.
class SingleModeDensity {
  public:
    explicit SingleModeDensity(ComplexMatrix matrix);

    [[nodiscard]] const ComplexMatrix &matrix() const noexcept { return matrix_; }
    [[nodiscard]] Complex trace() const { return matrix_.trace(); }

  private:
    ComplexMatrix matrix_;
};

MultiModeState fock_basis_state(int k, CutoffDim n);

FockOperator creation_op(CutoffDim n);
FockOperator annihilation_op(CutoffDim n);
FockOperator number_op(CutoffDim n);

MultiModeState tensor_states(const MultiModeState &a, const MultiModeState &b);
FockOperator kron_ops(const FockOperator &a, const FockOperator &b);

/// I (x) ... (x) op (x) ... (x) I with `op` in tensor position `mode`.
FockOperator embed_single_mode(const FockOperator &op, int mode, int modes);

/// Full-register matrix-vector product. Never renormalizes.
MultiModeState apply(const FockOperator &op, const MultiModeState &state);

/// Applies a one-mode operator to `mode` without forming the n^m matrix.
MultiModeState apply_single_mode(const FockOperator &op, const MultiModeState &state, int mode);

/// Applies a two-mode operator to the adjacent pair (first_mode, first_mode + 1).
MultiModeState apply_two_mode(const FockOperator &op, const MultiModeState &state,
                              int first_mode);

/// <a|b>, conjugate-linear in `a`.
Complex inner_product(const MultiModeState &a, const MultiModeState &b);

SingleModeDensity partial_trace(const MultiModeState &state, int keep_mode);

namespace detail {

/// In-place kernels on raw amplitude vectors, shared with the circuit simulator.
void apply_single_mode_inplace(const ComplexMatrix &op, ComplexVector &amps, int n, int modes,
                               int mode, ComplexVector &scratch);
void apply_two_mode_inplace(const ComplexMatrix &op, ComplexVector &amps, int n, int modes,
                            int first_mode, ComplexVector &scratch);

} // namespace detail

} // namespace fockqnn
