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
 * Exact (shot-free) readout of a register: per-mode expectation values and
 * variances through the reduced density matrix, and the full probability
 * vector over the n^m basis states.
 */

#pragma once

#include <vector>

#include "fockqnn/fock.hpp"

namespace fockqnn {

/// Hermitian single-mode observable.
class Observable {
  public:
    explicit Observable(ComplexMatrix matrix);

    [[nodiscard]] const ComplexMatrix &matrix() const noexcept { return matrix_; }
    [[nodiscard]] int side() const noexcept { return static_cast<int>(matrix_.rows()); }

  private:
    ComplexMatrix matrix_;
};

/// Pauli observables only exist on a two-level truncation; n must be 2.
Observable pauli_x(CutoffDim n);
Observable pauli_z(CutoffDim n);

enum class MeasurementKind { expectation, variance, probability };

struct MeasurementOutcome {
    MeasurementKind kind;
    std::vector<double> values;
};

double expectation(const MultiModeState &state, const Observable &obs, int mode);
double variance(const MultiModeState &state, const Observable &obs, int mode);
std::vector<double> probabilities(const MultiModeState &state);
std::vector<double> expectation_all_modes(const MultiModeState &state, const Observable &obs);
std::vector<double> variance_all_modes(const MultiModeState &state, const Observable &obs);

/// `obs` is ignored for MeasurementKind::probability.
MeasurementOutcome measure(const MultiModeState &state, MeasurementKind kind,
                           const Observable &obs);

} // namespace fockqnn
