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
 * Flat gate-list form of the encoding circuit plus QNN layers, used by the
 * trainer. Every circuit parameter feeds exactly one gate, so a probe on one
 * parameter only rebuilds that gate and replays the gates after it.
 *
 * Circuit parameters are laid out as [encoding features (8m-2) | layer 0 | ...].
 */

#pragma once

#include <span>
#include <vector>

#include "fockqnn/fock.hpp"
#include "fockqnn/qnn.hpp"

namespace fockqnn {

enum class SlotGate { squeezer, beamsplitter, rotation, displacement, kerr };

struct GateSlot {
    SlotGate gate;
    int mode;      // first mode for beamsplitters
    int magnitude; // parameter index: r, theta, phi (rotation) or kappa
    int phase;     // parameter index of the phase, or -1 for a real gate
};

class Circuit {
  public:
    Circuit(int modes, CutoffDim n, int layers);

    [[nodiscard]] int modes() const noexcept { return modes_; }
    [[nodiscard]] int cutoff() const noexcept { return n_; }
    [[nodiscard]] int layers() const noexcept { return layers_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return dim_; }
    [[nodiscard]] const std::vector<GateSlot> &slots() const noexcept { return slots_; }
    [[nodiscard]] int param_count() const noexcept { return static_cast<int>(param_slot_.size()); }
    [[nodiscard]] int slot_of(int param) const { return param_slot_.at(static_cast<std::size_t>(param)); }
    /// Slot indices at which the encoding and each layer end (one past the last gate).
    [[nodiscard]] const std::vector<int> &boundaries() const noexcept { return boundaries_; }

    /// Gate matrix (n x n, or n^2 x n^2 for beamsplitters); `shift` is added to
    /// parameter `shifted` when it belongs to this slot.
    [[nodiscard]] ComplexMatrix gate(const GateSlot &slot, std::span<const double> params,
                                     int shifted = -1, double shift = 0.0) const;
    void apply(const GateSlot &slot, const ComplexMatrix &gate, ComplexVector &amps,
               ComplexVector &scratch) const;

    [[nodiscard]] ComplexVector vacuum() const;
    [[nodiscard]] ComplexVector run(std::span<const double> params) const;
    [[nodiscard]] std::vector<double> readout(MeasurementMode mode, const ComplexVector &amps) const;

  private:
    void add(SlotGate gate, int mode, int magnitude, int phase);
    void add_interferometer(int offset);

    int modes_;
    int n_;
    int layers_;
    std::size_t dim_;
    std::vector<GateSlot> slots_;
    std::vector<int> param_slot_;
    std::vector<int> boundaries_;
};

} // namespace fockqnn
