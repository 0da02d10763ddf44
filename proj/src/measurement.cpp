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

#include <algorithm>
#include <string>

namespace fockqnn {

namespace {

void require_side(const MultiModeState &state, const Observable &obs) {
    if (obs.side() != state.cutoff().value()) {
        throw DimensionError("observable side " + std::to_string(obs.side()) +
                             " != cutoff " + std::to_string(state.cutoff().value()));
    }
}

void require_two_level(CutoffDim n) {
    if (n.value() != 2) {
        throw std::invalid_argument("Pauli observables are only defined at cutoff 2");
    }
}

// trace(rho * A), imaginary part dropped.
double trace_product(const ComplexMatrix &rho, const ComplexMatrix &a) {
    return (rho.cwiseProduct(a.transpose())).sum().real();
}

} // namespace

Observable::Observable(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols()) {
        throw DimensionError("observable must be square");
    }
    const double scale = std::max(1.0, matrix_.cwiseAbs().maxCoeff());
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw std::invalid_argument("observable is not Hermitian");
    }
}

Observable pauli_x(CutoffDim n) {
    require_two_level(n);
    ComplexMatrix x(2, 2);
    x << 0.0, 1.0, 1.0, 0.0;
    return Observable(std::move(x));
}

Observable pauli_z(CutoffDim n) {
    require_two_level(n);
    ComplexMatrix z(2, 2);
    z << 1.0, 0.0, 0.0, -1.0;
    return Observable(std::move(z));
}

double expectation(const MultiModeState &state, const Observable &obs, int mode) {
    require_side(state, obs);
    const SingleModeDensity rho = partial_trace(state, mode);
    return trace_product(rho.matrix(), obs.matrix());
}

double variance(const MultiModeState &state, const Observable &obs, int mode) {
    require_side(state, obs);
    const SingleModeDensity rho = partial_trace(state, mode);
    const double mean = trace_product(rho.matrix(), obs.matrix());
    const ComplexMatrix sq = obs.matrix() * obs.matrix();
    return trace_product(rho.matrix(), sq) - mean * mean;
}

std::vector<double> probabilities(const MultiModeState &state) {
    const auto &amps = state.amplitudes();
    std::vector<double> out(static_cast<std::size_t>(amps.size()));
    for (Eigen::Index i = 0; i < amps.size(); ++i) {
        out[static_cast<std::size_t>(i)] = std::norm(amps(i));
    }
    return out;
}

std::vector<double> expectation_all_modes(const MultiModeState &state, const Observable &obs) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(state.modes()));
    for (int j = 0; j < state.modes(); ++j) {
        out.push_back(expectation(state, obs, j));
    }
    return out;
}

std::vector<double> variance_all_modes(const MultiModeState &state, const Observable &obs) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(state.modes()));
    for (int j = 0; j < state.modes(); ++j) {
        out.push_back(variance(state, obs, j));
    }
    return out;
}

MeasurementOutcome measure(const MultiModeState &state, MeasurementKind kind,
                           const Observable &obs) {
    switch (kind) {
    case MeasurementKind::expectation:
        return {kind, expectation_all_modes(state, obs)};
    case MeasurementKind::variance:
        return {kind, variance_all_modes(state, obs)};
    case MeasurementKind::probability:
        return {kind, probabilities(state)};
    }
    throw std::invalid_argument("unknown measurement kind");
}

} // namespace fockqnn
