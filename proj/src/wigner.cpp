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

#include "fockqnn/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

namespace fockqnn {

namespace {

// Trapezoidal quadrature over y in [-12, 12] (scaled by sqrt(hbar)).
constexpr double kYRange = 12.0;
constexpr int kYPoints = 2049;

double y_step(double hbar) { return 2.0 * kYRange * std::sqrt(hbar) / (kYPoints - 1); }

void require_level(int k) {
    if (k < 0) {
        throw std::invalid_argument("Fock level must be >= 0");
    }
    if (k > kMaxWignerLevel) {
        throw std::invalid_argument("Fock level " + std::to_string(k) + " exceeds " +
                                    std::to_string(kMaxWignerLevel));
    }
}

// psi_0..psi_k at one point, filled into `out` (size k + 1).
void hermite_functions(int k, double x, double hbar, std::vector<double> &out) {
    const double xi = x / std::sqrt(hbar);
    out.assign(static_cast<std::size_t>(k) + 1, 0.0);
    out[0] = std::pow(std::numbers::pi * hbar, -0.25) * std::exp(-0.5 * xi * xi);
    if (k >= 1) {
        out[1] = std::sqrt(2.0) * xi * out[0];
    }
    for (int j = 1; j < k; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        out[uj + 1] = std::sqrt(2.0 / (j + 1)) * xi * out[uj] - std::sqrt(static_cast<double>(j) / (j + 1)) * out[uj - 1];
    }
}

// Integrand samples f(y) = psi_k(x + y/2) psi_k(x - y/2) on the quadrature grid.
// psi_k is real, so the complex conjugate is a no-op.
std::vector<double> integrand(int k, double x, double hbar, std::vector<double> &scratch) {
    std::vector<double> f(kYPoints);
    const double dy = y_step(hbar);
    for (int j = 0; j < kYPoints; ++j) {
        const double y = (j - kYPoints / 2) * dy;
        hermite_functions(k, x + 0.5 * y, hbar, scratch);
        const double plus = scratch.back();
        hermite_functions(k, x - 0.5 * y, hbar, scratch);
        f[static_cast<std::size_t>(j)] = plus * scratch.back();
    }
    return f;
}

double integrate(const std::vector<double> &f, double p, double hbar) {
    const double dy = y_step(hbar);
    double re = 0.0;
    for (int j = 0; j < kYPoints; ++j) {
        const double y = (j - kYPoints / 2) * dy;
        const double w = (j == 0 || j == kYPoints - 1) ? 0.5 : 1.0;
        re += w * f[static_cast<std::size_t>(j)] * std::cos(p * y / hbar);
    }
    // f is even in y on a symmetric grid, so the sine half of e^{-ipy} sums to zero.
    return re * dy / (2.0 * std::numbers::pi * hbar);
}

} // namespace

double hermite_function(int k, double x, double hbar) {
    if (k < 0) {
        throw std::invalid_argument("Fock level must be >= 0");
    }
    std::vector<double> out;
    hermite_functions(k, x, hbar, out);
    return out.back();
}

double laguerre(int k, double t) {
    if (k < 0) {
        throw std::invalid_argument("Laguerre degree must be >= 0");
    }
    double prev = 1.0;
    if (k == 0) {
        return prev;
    }
    double cur = 1.0 - t;
    for (int j = 1; j < k; ++j) {
        const double next = ((2 * j + 1 - t) * cur - j * prev) / (j + 1);
        prev = cur;
        cur = next;
    }
    return cur;
}

double wigner_fock_numeric(int k, double x, double p, double hbar) {
    require_level(k);
    std::vector<double> scratch;
    return integrate(integrand(k, x, hbar, scratch), p, hbar);
}

double wigner_fock_closed(int k, double x, double p, double hbar) {
    if (k < 0) {
        throw std::invalid_argument("Fock level must be >= 0");
    }
    const double r2 = (x * x + p * p) / hbar;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return sign / (std::numbers::pi * hbar) * std::exp(-r2) * laguerre(k, 2.0 * r2);
}

PhaseSpaceGrid wigner_grid(int k, double x_range, int points) {
    require_level(k);
    if (points < 3 || points % 2 == 0) {
        throw std::invalid_argument("grid needs an odd number of points >= 3, got " +
                                    std::to_string(points));
    }
    if (!(x_range > 0.0) || !std::isfinite(x_range)) {
        throw std::invalid_argument("grid range must be positive and finite");
    }
    PhaseSpaceGrid grid;
    const double step = 2.0 * x_range / (points - 1);
    const int half = points / 2;
    for (int i = 0; i < points; ++i) {
        // Built from the centre outward so the grid is exactly symmetric.
        grid.xs.push_back((i - half) * step);
    }
    grid.ps = grid.xs;
    const auto np = grid.xs.size();
    grid.values.assign(np * np, 0.0);

    std::vector<double> scratch;
    for (std::size_t ix = 0; ix < np; ++ix) {
        const auto f = integrand(k, grid.xs[ix], kHbar, scratch);
        for (std::size_t ip = 0; ip < np; ++ip) {
            const double w = integrate(f, grid.ps[ip], kHbar);
            grid.values[ip * np + ix] = w;
            grid.max_closed_form_deviation =
                std::max(grid.max_closed_form_deviation,
                         std::abs(w - wigner_fock_closed(k, grid.xs[ix], grid.ps[ip])));
        }
    }
    return grid;
}

void write_wigner_csv(const PhaseSpaceGrid &grid, std::ostream &out) {
    out << "x,p,w\n";
    char line[96];
    for (std::size_t ip = 0; ip < grid.ps.size(); ++ip) {
        for (std::size_t ix = 0; ix < grid.xs.size(); ++ix) {
            std::snprintf(line, sizeof line, "%.9g,%.9g,%.9g\n", grid.xs[ix], grid.ps[ip],
                          grid.at(ip, ix));
            out << line;
        }
    }
}

} // namespace fockqnn
