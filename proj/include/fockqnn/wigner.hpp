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
 * Wigner quasiprobability of Fock states |k>.
 *
 * The numeric route integrates
 *   W_k(x, p) = 1/(2 pi hbar) * int e^{-i p y / hbar} psi_k(x + y/2) psi_k*(x - y/2) dy
 * by the trapezoidal rule; the closed form
 *   W_k(x, p) = (-1)^k / (pi hbar) * e^{-r2/hbar} * L_k(2 r2 / hbar),  r2 = x^2 + p^2
 * serves as its oracle.
 */

#pragma once

#include <iosfwd>
#include <vector>

namespace fockqnn {

/// Natural units. SI mode only needs this constant changed.
inline constexpr double kHbar = 1.0;

/// Highest Fock level accepted by the numeric route.
inline constexpr int kMaxWignerLevel = 20;

/// Normalized Hermite function (harmonic-oscillator eigenfunction) psi_k(x).
double hermite_function(int k, double x, double hbar = kHbar);

/// Laguerre polynomial L_k(t) by the three-term recurrence.
double laguerre(int k, double t);

double wigner_fock_numeric(int k, double x, double p, double hbar = kHbar);
double wigner_fock_closed(int k, double x, double p, double hbar = kHbar);

struct PhaseSpaceGrid {
    std::vector<double> xs;
    std::vector<double> ps;
    /// values[i * xs.size() + j] = W(xs[j], ps[i]); rows are momenta.
    std::vector<double> values;
    /// max |numeric - closed form| over the grid.
    double max_closed_form_deviation = 0.0;

    [[nodiscard]] double at(std::size_t p_index, std::size_t x_index) const {
        return values[p_index * xs.size() + x_index];
    }
};

/// Symmetric grid [-x_range, x_range]^2 with `points` (odd, >= 3) samples per axis.
PhaseSpaceGrid wigner_grid(int k, double x_range, int points);

/// CSV with header `x,p,w`; p is the outer loop, 9 significant digits.
void write_wigner_csv(const PhaseSpaceGrid &grid, std::ostream &out);

} // namespace fockqnn
