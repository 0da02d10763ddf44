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
 * Gaussian and Kerr gates on the truncated Fock space.
 *
 * Gates with a ladder-operator generator are built as matrix exponentials of
 * the truncated generator. The generators are anti-Hermitian, so every gate
 * is exactly unitary on the truncated space up to rounding:
 *
 *   R(phi)        = exp(i phi n)
 *   S(z)          = exp((conj(z) a^2 - z a^dag^2) / 2)
 *   D(alpha)      = exp(alpha a^dag - conj(alpha) a)
 *   B(theta, phi) = exp(theta (e^{i phi} a^dag b - e^{-i phi} a b^dag))
 *   K(kappa)      = exp(i kappa n^2)
 *
 * In B, `a` acts on the first (left) mode of the pair and `b` on the second.
 */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fockqnn/fock.hpp"

namespace fockqnn {

/// Largest |z| or |alpha| accepted by squeezer() and displacement().
inline constexpr double kMaxGateMagnitude = 2.0;

/// Scaling-and-squaring Pade exponential.
ComplexMatrix matrix_exp(const ComplexMatrix &m);
FockOperator matrix_exp(const FockOperator &m);

FockOperator rotation(double phi, CutoffDim n);
FockOperator squeezer(Complex z, CutoffDim n);
FockOperator displacement(Complex alpha, CutoffDim n);
FockOperator beamsplitter(double theta, double phi, CutoffDim n);
FockOperator kerr(double kappa, CutoffDim n);

struct GateParams {
    Complex z{};
    double phi = 0.0;
    Complex alpha{};
    double theta = 0.0;
    double phi_bs = 0.0;
    double kappa = 0.0;

    /// Throws std::invalid_argument on non-finite fields or |z|, |alpha| above the cap.
    void validate() const;
};

struct InterferometerParams {
    std::vector<double> bs_thetas; // m - 1
    std::vector<double> bs_phis;   // m - 1
    std::vector<double> rot_phis;  // m

    void validate(int modes) const;
};

/// Beamsplitters on (0,1), (1,2), ..., (m-2,m-1) in that order, then one
/// rotation per mode. Returns the full n^m x n^m register operator.
FockOperator interferometer(const InterferometerParams &p, int modes, CutoffDim n);

/// max |(U^dag U - I)_ij|.
double unitarity_error(const ComplexMatrix &u);

struct GateFamilyResult {
    std::string family;
    double max_error = 0.0;
};

struct UnitarityReport {
    int cutoff = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    std::vector<GateFamilyResult> families;

    [[nodiscard]] double worst() const;
    [[nodiscard]] bool passes(double tol) const { return worst() <= tol; }
    [[nodiscard]] std::string to_text() const;
};

/// Draws `trials` random parameter sets (|z|, |alpha| <= 1, angles in [0, 2pi),
/// kappa in [-pi, pi)) and records the worst unitarity error per gate family.
UnitarityReport gate_unitarity_report(CutoffDim n, int trials, std::uint64_t seed);

} // namespace fockqnn
