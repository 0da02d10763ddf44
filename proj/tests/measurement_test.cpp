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

#include "fockqnn/measurement.hpp"

#include <cmath>
#include <numeric>

#include "gtest/gtest.h"
#include "test_util.hpp"

using namespace fockqnn;
using fockqnn::testing::random_matrix;
using fockqnn::testing::random_state;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Observable random_observable(std::mt19937_64 &rng, int side) {
    ComplexMatrix h = random_matrix(rng, side);
    return Observable(0.5 * (h + h.adjoint()));
}

} // namespace

TEST(Observable, rejects_non_hermitian) {
    ComplexMatrix m(2, 2);
    m << 0, 1, 0, 0;
    EXPECT_THROW(Observable{m}, std::invalid_argument);
    EXPECT_THROW(pauli_x(CutoffDim(3)), std::invalid_argument);
}

TEST(Expectation, pauli_x_single_mode_formula) {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 10; ++trial) {
        auto psi = random_state(rng, 1, CutoffDim(2));
        const Complex p0 = psi.amplitudes()(0);
        const Complex p1 = psi.amplitudes()(1);
        const double formula = 2.0 * (p0.real() * p1.real() + p0.imag() * p1.imag());
        EXPECT_NEAR(expectation(psi, pauli_x(CutoffDim(2)), 0), formula, 1e-14);
    }
}

TEST(Expectation, basic_values) {
    const CutoffDim n(2);
    EXPECT_DOUBLE_EQ(expectation(fock_basis_state(0, n), pauli_z(n), 0), 1.0);
    MultiModeState bell((ComplexVector(4) << kInvSqrt2, 0, 0, kInvSqrt2).finished(), 2, n);
    EXPECT_NEAR(expectation(bell, pauli_x(n), 0), 0.0, 1e-15);
    EXPECT_THROW(expectation(bell, Observable(ComplexMatrix::Identity(3, 3)), 0), DimensionError);
}

TEST(Variance, basic_values) {
    const CutoffDim n(2);
    EXPECT_NEAR(variance(fock_basis_state(0, n), pauli_z(n), 0), 0.0, 1e-15);
    MultiModeState plus((ComplexVector(2) << kInvSqrt2, kInvSqrt2).finished(), 1, n);
    EXPECT_NEAR(variance(plus, pauli_z(n), 0), 1.0, 1e-15);
    EXPECT_NEAR(variance(fock_basis_state(0, n), pauli_x(n), 0), 1.0, 1e-15);
}

TEST(Probabilities, lengths_and_values) {
    std::mt19937_64 rng(3);
    EXPECT_EQ(probabilities(random_state(rng, 2, CutoffDim(4))).size(), 16u);
    MultiModeState plus((ComplexVector(2) << kInvSqrt2, kInvSqrt2).finished(), 1, CutoffDim(2));
    const auto p = probabilities(plus);
    EXPECT_NEAR(p[0], 0.5, 1e-15);
    EXPECT_NEAR(p[1], 0.5, 1e-15);
}

TEST(Probabilities, normalized_states_sum_to_one) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const CutoffDim n(2 + trial % 4);
        const auto p = probabilities(random_state(rng, 1 + trial % 4, n));
        EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-9);
        for (double v : p) {
            EXPECT_GE(v, -1e-12);
        }
    }
}

TEST(ExpectationAllModes, lengths_and_product_states) {
    const CutoffDim n(2);
    std::mt19937_64 rng(7);
    EXPECT_EQ(expectation_all_modes(random_state(rng, 8, n), pauli_x(n)).size(), 8u);

    auto s01 = tensor_states(fock_basis_state(0, n), fock_basis_state(1, n));
    const auto z = expectation_all_modes(s01, pauli_z(n));
    ASSERT_EQ(z.size(), 2u);
    EXPECT_DOUBLE_EQ(z[0], 1.0);
    EXPECT_DOUBLE_EQ(z[1], -1.0);
}

TEST(ExpectationAllModes, swapping_modes_permutes_output) {
    const CutoffDim n(3);
    std::mt19937_64 rng(9);
    auto psi = random_state(rng, 2, n);
    // Index permutation oracle: |j k> -> |k j>.
    ComplexVector swapped(9);
    for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) {
            swapped(k * 3 + j) = psi.amplitudes()(j * 3 + k);
        }
    }
    const Observable obs = random_observable(rng, 3);
    const auto a = expectation_all_modes(psi, obs);
    const auto b = expectation_all_modes(MultiModeState(swapped, 2, n), obs);
    EXPECT_NEAR(a[0], b[1], 1e-12);
    EXPECT_NEAR(a[1], b[0], 1e-12);
}

TEST(Expectation, real_and_within_spectrum) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const int nv = 2 + trial % 7;
        const CutoffDim n(nv);
        const int m = 1 + trial % 3;
        auto psi = random_state(rng, m, n);
        const Observable obs = random_observable(rng, nv);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(obs.matrix());
        for (int j = 0; j < m; ++j) {
            const ComplexMatrix rho = partial_trace(psi, j).matrix();
            const Complex full = (rho * obs.matrix()).trace();
            EXPECT_LE(std::abs(full.imag()), 1e-10);
            const double e = expectation(psi, obs, j);
            EXPECT_GE(e, eig.eigenvalues().minCoeff() - 1e-10);
            EXPECT_LE(e, eig.eigenvalues().maxCoeff() + 1e-10);
            EXPECT_GE(variance(psi, obs, j), -1e-10);
        }
    }
}

TEST(Variance, zero_on_eigenstates) {
    std::mt19937_64 rng(13);
    const CutoffDim n(4);
    const Observable obs = random_observable(rng, 4);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(obs.matrix());
    for (int k = 0; k < 4; ++k) {
        MultiModeState v(eig.eigenvectors().col(k), 1, n);
        EXPECT_NEAR(variance(v, obs, 0), 0.0, 1e-10);
    }
}

TEST(Expectation, product_state_matches_factor) {
    std::mt19937_64 rng(15);
    const CutoffDim n(3);
    for (int trial = 0; trial < 10; ++trial) {
        auto a = random_state(rng, 1, n);
        auto b = random_state(rng, 1, n);
        const Observable obs = random_observable(rng, 3);
        auto ab = tensor_states(a, b);
        EXPECT_NEAR(expectation(ab, obs, 0), expectation(a, obs, 0), 1e-12);
        EXPECT_NEAR(expectation(ab, obs, 1), expectation(b, obs, 0), 1e-12);
    }
}

TEST(Measure, dispatches_by_kind) {
    const CutoffDim n(2);
    auto s = tensor_states(fock_basis_state(0, n), fock_basis_state(1, n));
    EXPECT_EQ(measure(s, MeasurementKind::probability, pauli_z(n)).values.size(), 4u);
    EXPECT_EQ(measure(s, MeasurementKind::expectation, pauli_z(n)).values.size(), 2u);
    EXPECT_EQ(measure(s, MeasurementKind::variance, pauli_z(n)).values.size(), 2u);
}
