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

#include "fockqnn/circuit.hpp"

#include <cmath>

#include "fockqnn/gates.hpp"

namespace fockqnn {

Circuit::Circuit(int modes, CutoffDim n, int layers)
    : modes_(modes), n_(n.value()), layers_(layers), dim_(register_size(n, modes)) {
    const int m = modes;
    param_slot_.assign(static_cast<std::size_t>(encoding_param_count(m) +
                                                layers * layer_param_count(m)),
                       -1);

    for (int j = 0; j < m; ++j) {
        add(SlotGate::squeezer, j, j, m + j);
    }
    add_interferometer(2 * m);
    for (int j = 0; j < m; ++j) {
        add(SlotGate::displacement, j, 5 * m - 2 + j, 6 * m - 2 + j);
    }
    for (int j = 0; j < m; ++j) {
        add(SlotGate::kerr, j, 7 * m - 2 + j, -1);
    }
    boundaries_.push_back(static_cast<int>(slots_.size()));

    for (int l = 0; l < layers; ++l) {
        const int o = encoding_param_count(m) + l * layer_param_count(m);
        add_interferometer(o);
        for (int j = 0; j < m; ++j) {
            add(SlotGate::squeezer, j, o + 3 * m - 2 + j, -1);
        }
        add_interferometer(o + 4 * m - 2);
        for (int j = 0; j < m; ++j) {
            add(SlotGate::displacement, j, o + 7 * m - 4 + j, -1);
        }
        for (int j = 0; j < m; ++j) {
            add(SlotGate::kerr, j, o + 8 * m - 4 + j, -1);
        }
        boundaries_.push_back(static_cast<int>(slots_.size()));
    }
}

void Circuit::add(SlotGate gate, int mode, int magnitude, int phase) {
    const int index = static_cast<int>(slots_.size());
    slots_.push_back({gate, mode, magnitude, phase});
    param_slot_.at(static_cast<std::size_t>(magnitude)) = index;
    if (phase >= 0) {
        param_slot_.at(static_cast<std::size_t>(phase)) = index;
    }
}

void Circuit::add_interferometer(int offset) {
    const int m = modes_;
    for (int j = 0; j + 1 < m; ++j) {
        add(SlotGate::beamsplitter, j, offset + j, offset + m - 1 + j);
    }
    for (int j = 0; j < m; ++j) {
        add(SlotGate::rotation, j, offset + 2 * m - 2 + j, -1);
    }
}

ComplexMatrix Circuit::gate(const GateSlot &slot, std::span<const double> params, int shifted,
                            double shift) const {
    auto value = [&](int index) {
        if (index < 0) {
            return 0.0;
        }
        const double v = params[static_cast<std::size_t>(index)];
        return index == shifted ? v + shift : v;
    };
    const CutoffDim n(n_);
    const double mag = value(slot.magnitude);
    const double phase = value(slot.phase);
    switch (slot.gate) {
    case SlotGate::squeezer: {
        const double r = squash(mag);
        return squeezer({r * std::cos(phase), r * std::sin(phase)}, n).matrix();
    }
    case SlotGate::displacement: {
        const double r = squash(mag);
        return displacement({r * std::cos(phase), r * std::sin(phase)}, n).matrix();
    }
    case SlotGate::beamsplitter:
        return beamsplitter(mag, phase, n).matrix();
    case SlotGate::rotation:
        return rotation(mag, n).matrix();
    case SlotGate::kerr:
        return kerr(mag, n).matrix();
    }
    throw std::logic_error("unknown slot gate");
}

void Circuit::apply(const GateSlot &slot, const ComplexMatrix &gate, ComplexVector &amps,
                    ComplexVector &scratch) const {
    if (slot.gate == SlotGate::rotation || slot.gate == SlotGate::kerr) {
        // Diagonal gates: scale each amplitude by the phase of its photon count.
        const std::size_t inner = static_cast<std::size_t>(std::pow(n_, modes_ - 1 - slot.mode));
        const auto un = static_cast<std::size_t>(n_);
        for (std::size_t i = 0; i < dim_; ++i) {
            const auto k = static_cast<Eigen::Index>((i / inner) % un);
            amps(static_cast<Eigen::Index>(i)) *= gate(k, k);
        }
        return;
    }
    if (slot.gate == SlotGate::beamsplitter) {
        detail::apply_two_mode_inplace(gate, amps, n_, modes_, slot.mode, scratch);
    } else {
        detail::apply_single_mode_inplace(gate, amps, n_, modes_, slot.mode, scratch);
    }
}

ComplexVector Circuit::vacuum() const {
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim_));
    v(0) = 1.0;
    return v;
}

ComplexVector Circuit::run(std::span<const double> params) const {
    if (params.size() != param_slot_.size()) {
        throw DimensionError("circuit needs " + std::to_string(param_slot_.size()) +
                             " parameters, got " + std::to_string(params.size()));
    }
    ComplexVector amps = vacuum();
    ComplexVector scratch;
    for (const GateSlot &slot : slots_) {
        apply(slot, gate(slot, params), amps, scratch);
    }
    return amps;
}

std::vector<double> Circuit::readout(MeasurementMode mode, const ComplexVector &amps) const {
    if (mode == MeasurementMode::probability) {
        std::vector<double> out(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            out[i] = std::norm(amps(static_cast<Eigen::Index>(i)));
        }
        return out;
    }
    if (n_ != 2) {
        throw std::invalid_argument("expectation readout requires cutoff 2");
    }
    // <X_j> = 2 Re sum over pairs differing only in bit j.
    std::vector<double> out(static_cast<std::size_t>(modes_), 0.0);
    for (int j = 0; j < modes_; ++j) {
        const std::size_t bit = std::size_t{1} << (modes_ - 1 - j);
        double acc = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) {
            if (!(i & bit)) {
                acc += (std::conj(amps(static_cast<Eigen::Index>(i))) *
                        amps(static_cast<Eigen::Index>(i | bit)))
                           .real();
            }
        }
        out[static_cast<std::size_t>(j)] = 2.0 * acc;
    }
    return out;
}

} // namespace fockqnn
