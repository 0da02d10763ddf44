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
 * Small qubit statevector simulator for two binary-classifier circuits:
 * a 17-qubit XX/ZZ readout circuit and an Ry classification head.
 *
 * Qubit 0 is the most significant bit of the amplitude index.
 */

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "fockqnn/fock.hpp"

namespace fockqnn {

class QubitState {
  public:
    QubitState(ComplexVector amplitudes, int qubits);
    static QubitState zeros(int qubits);

    [[nodiscard]] const ComplexVector &amplitudes() const noexcept { return amps_; }
    [[nodiscard]] int qubits() const noexcept { return qubits_; }

    void apply(const ComplexMatrix &gate, int q);
    /// `gate` is 4x4 in the basis |q0 q1>, q0 the more significant bit.
    void apply(const ComplexMatrix &gate, int q0, int q1);

    /// 2x2 reduced density matrix of qubit q.
    [[nodiscard]] ComplexMatrix reduced_density(int q) const;

  private:
    ComplexVector amps_;
    int qubits_;
};

enum class QubitGate { H, X, Z, Ry, XXpow, ZZpow };

/// 2x2 or 4x4 unitary. `param` is theta for Ry, t for XXpow, s for ZZpow.
ComplexMatrix qubit_gate(QubitGate gate, double param = 0.0);
/// Name lookup ("H", "X", "Z", "Ry", "XXpow", "ZZpow"); throws std::invalid_argument.
ComplexMatrix qubit_gate(std::string_view name, double param = 0.0);

inline constexpr int kDataQubits = 16;

using PixelBits = std::array<bool, kDataQubits>;
using QubitAngles = std::array<double, kDataQubits>;

struct ReadoutResult {
    ComplexMatrix density; // 2x2, readout qubit
    double z_expectation = 0.0;
};

/// Readout qubit after X/H preparation, XX(t_k) on every (readout, k),
/// then ZZ(s_k) on every (readout, k), then H. Computed pair by pair.
ReadoutResult google_circuit(const PixelBits &bits, const QubitAngles &t, const QubitAngles &s);
ReadoutResult google_circuit(const std::vector<bool> &bits, const std::vector<double> &t,
                             const std::vector<double> &s);

/// Same circuit on the full 17-qubit register.
ReadoutResult google_circuit_statevector(const PixelBits &bits, const QubitAngles &t,
                                         const QubitAngles &s);

/// Normalized (1 - e^{i pi S}, 1 + e^{i pi S}) with S = sum(s).
ComplexVector closed_form_readout(const QubitAngles &s);
double closed_form_z(const QubitAngles &s);

/// <psi| rho |psi>.
double state_fidelity(const ComplexMatrix &rho, const ComplexVector &psi);
/// Half the sum of |eigenvalues| of (a - b), both Hermitian.
double trace_distance(const ComplexMatrix &a, const ComplexMatrix &b);

/// 28x28 image in [0, 255], row-major. Mean over 7x7 blocks of image/255, then > 0.5.
PixelBits binarize_resize(const std::vector<double> &image);

/// Outcome probabilities of Ry(theta) H |0>.
std::array<double, 2> ry_head(double theta);

struct PhaseShiftGradient {
    double difference = 0.0; // f(theta + delta) - f(theta - delta)
    double scaled = 0.0;     // difference / (2 delta)
};

PhaseShiftGradient phase_shift_grad(const std::function<double(double)> &statistic, double theta,
                                    double delta);
/// Uses p1 of ry_head as the statistic.
PhaseShiftGradient phase_shift_grad(double theta, double delta);

/// Human-readable verification report for the `appendix` subcommand.
/// `demo` is "google" or "qiskit"; throws std::invalid_argument otherwise.
std::string appendix_report(std::string_view demo, std::uint64_t seed);

} // namespace fockqnn
