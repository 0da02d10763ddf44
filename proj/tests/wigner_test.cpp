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
#include <numbers>
#include <sstream>

#include "gtest/gtest.h"

using namespace fockqnn;

namespace {

constexpr double kInvPi = 1.0 / std::numbers::pi;

double grid_integral(const PhaseSpaceGrid &g) {
    const double dx = g.xs[1] - g.xs[0];
    double sum = 0.0;
    for (std::size_t i = 0; i < g.ps.size(); ++i) {
        for (std::size_t j = 0; j < g.xs.size(); ++j) {
            const double wi = (i == 0 || i + 1 == g.ps.size()) ? 0.5 : 1.0;
            const double wj = (j == 0 || j + 1 == g.xs.size()) ? 0.5 : 1.0;
            sum += wi * wj * g.at(i, j);
        }
    }
    return sum * dx * dx;
}

} // namespace

TEST(HermiteFunction, orthonormal_on_a_fine_grid) {
    const double dx = 0.01;
    for (int a = 0; a <= 5; ++a) {
        for (int b = 0; b <= 5; ++b) {
            double s = 0.0;
            for (double x = -12.0; x <= 12.0; x += dx) {
                s += hermite_function(a, x) * hermite_function(b, x) * dx;
            }
            EXPECT_NEAR(s, a == b ? 1.0 : 0.0, 1e-9) << a << "," << b;
        }
    }
}

TEST(Laguerre, low_degrees) {
    EXPECT_DOUBLE_EQ(laguerre(0, 3.0), 1.0);
    EXPECT_DOUBLE_EQ(laguerre(1, 3.0), -2.0);
    // L_2(t) = (t^2 - 4t + 2) / 2
    EXPECT_NEAR(laguerre(2, 1.5), (1.5 * 1.5 - 6.0 + 2.0) / 2.0, 1e-15);
}

TEST(WignerNumeric, origin_values) {
    EXPECT_NEAR(wigner_fock_numeric(0, 0.0, 0.0), kInvPi, 1e-6);
    EXPECT_NEAR(wigner_fock_numeric(1, 0.0, 0.0), -kInvPi, 1e-6);
    EXPECT_THROW(wigner_fock_numeric(21, 0.0, 0.0), std::invalid_argument);
    EXPECT_THROW(wigner_fock_numeric(-1, 0.0, 0.0), std::invalid_argument);
}

TEST(WignerNumeric, depends_only_on_radius) {
    for (int k = 0; k <= 4; ++k) {
        for (double r : {0.3, 1.1, 2.0}) {
            const double ref = wigner_fock_numeric(k, r, 0.0);
            for (double angle : {0.4, 1.3, 2.5, 4.0}) {
                EXPECT_NEAR(wigner_fock_numeric(k, r * std::cos(angle), r * std::sin(angle)), ref, 1e-8);
            }
        }
    }
}

TEST(WignerClosed, basic_values) {
    EXPECT_DOUBLE_EQ(wigner_fock_closed(0, 0.0, 0.0), kInvPi);
    EXPECT_NEAR(wigner_fock_closed(3, 30.0, 0.0), 0.0, 1e-300);
}

TEST(WignerClosed, integrates_to_one) {
    const int points = 201;
    const double step = 12.0 / (points - 1);
    for (int k = 0; k <= 5; ++k) {
        double sum = 0.0;
        for (int i = 0; i < points; ++i) {
            for (int j = 0; j < points; ++j) {
                const double wi = (i == 0 || i == points - 1) ? 0.5 : 1.0;
                const double wj = (j == 0 || j == points - 1) ? 0.5 : 1.0;
                sum += wi * wj * wigner_fock_closed(k, -6.0 + i * step, -6.0 + j * step);
            }
        }
        EXPECT_NEAR(sum * step * step, 1.0, 1e-4) << k;
    }
}

TEST(WignerGrid, numeric_matches_closed_form) {
    for (int k = 0; k <= 5; ++k) {
        const auto g = wigner_grid(k, 4.0, 21);
        EXPECT_LE(g.max_closed_form_deviation, 1e-6) << k;
        for (std::size_t i = 0; i < g.ps.size(); ++i) {
            for (std::size_t j = 0; j < g.xs.size(); ++j) {
                EXPECT_NEAR(g.at(i, j), wigner_fock_closed(k, g.xs[j], g.ps[i]), 1e-6);
            }
        }
    }
}

TEST(WignerGrid, sign_structure_and_parity) {
    const auto g0 = wigner_grid(0, 3.0, 31);
    EXPECT_GT(*std::min_element(g0.values.begin(), g0.values.end()), 0.0);
    const auto g1 = wigner_grid(1, 3.0, 31);
    EXPECT_LT(*std::min_element(g1.values.begin(), g1.values.end()), -0.3);
    const auto g3 = wigner_grid(3, 3.0, 31);
    const std::size_t n = g3.xs.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            EXPECT_NEAR(g3.at(i, j), g3.at(n - 1 - i, n - 1 - j), 1e-10);
        }
    }
}

TEST(WignerGrid, marginal_is_position_density) {
    for (int k : {0, 2, 5}) {
        const auto g = wigner_grid(k, 6.0, 121);
        const double dp = g.ps[1] - g.ps[0];
        for (std::size_t j = 20; j < g.xs.size(); j += 25) {
            double marginal = 0.0;
            for (std::size_t i = 0; i < g.ps.size(); ++i) {
                marginal += g.at(i, j) * dp;
            }
            const double psi = hermite_function(k, g.xs[j]);
            EXPECT_NEAR(marginal, psi * psi, 1e-4) << "k=" << k << " x=" << g.xs[j];
        }
    }
}

TEST(WignerGrid, normalized) {
    for (int k = 0; k <= 5; ++k) {
        const double total = grid_integral(wigner_grid(k, 6.0, 61));
        EXPECT_GE(total, 0.999) << k;
        EXPECT_LE(total, 1.001) << k;
    }
}

TEST(WignerGrid, rejects_bad_grids) {
    EXPECT_THROW(wigner_grid(0, 4.0, 100), std::invalid_argument);
    EXPECT_THROW(wigner_grid(0, 4.0, 1), std::invalid_argument);
    EXPECT_THROW(wigner_grid(0, -1.0, 11), std::invalid_argument);
    EXPECT_THROW(wigner_grid(25, 4.0, 11), std::invalid_argument);
}

TEST(WignerCsv, header_and_row_order) {
    const auto g = wigner_grid(1, 1.0, 3);
    std::ostringstream out;
    write_wigner_csv(g, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "x,p,w");
    std::getline(in, line);
    EXPECT_EQ(line.rfind("-1,-1,", 0), 0u);
    std::getline(in, line);
    EXPECT_EQ(line.rfind("0,-1,", 0), 0u);
    int rows = 2;
    while (std::getline(in, line)) {
        ++rows;
    }
    EXPECT_EQ(rows, 9);
}
