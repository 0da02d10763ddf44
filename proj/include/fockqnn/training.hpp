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
 * Minibatch SGD for the hybrid classifier.
 *
 * Encoder gradients are backpropagated; circuit gradients (encoding features
 * and layer parameters) are central differences with step kCircuitFdDelta.
 * Samples are spread over worker threads and reduced in sample order, so the
 * result does not depend on the worker count.
 */

#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "fockqnn/circuit.hpp"
#include "fockqnn/dataio.hpp"
#include "fockqnn/qnn.hpp"

namespace fockqnn {

inline constexpr double kCircuitFdDelta = 1e-4;
/// Training aborts when any monitored state norm drops below this.
inline constexpr double kMinStateNorm = 0.5;

class DivergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct EpochMetrics {
    int epoch = 0;
    double loss = 0.0;
    double accuracy = 0.0;
    /// Range of state norms after the encoding and after every layer.
    double min_norm = 1.0;
    double max_norm = 1.0;
};

struct Evaluation {
    double loss = 0.0;
    double accuracy = 0.0;
    double min_norm = 1.0;
    double max_norm = 1.0;
    std::vector<int> predictions;
};

struct TrainingHistory {
    HybridModelConfig config;
    EpochMetrics initial; // before the first update
    std::vector<EpochMetrics> epochs;
    ModelParams final_params;
    double wall_time_seconds = 0.0;
};

using EpochCallback = std::function<void(const EpochMetrics &)>;

/// Runs fn(index, worker) for index in [0, count) on `workers` threads.
void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t, int)> &fn);

class Trainer {
  public:
    explicit Trainer(HybridModelConfig config);

    [[nodiscard]] const HybridModelConfig &config() const noexcept { return config_; }
    [[nodiscard]] const Circuit &circuit() const noexcept { return circuit_; }

    /// Mean loss and argmax accuracy over the whole dataset.
    [[nodiscard]] Evaluation evaluate(const ModelParams &params, const Dataset &data) const;

    /// Readout for one image through the cached circuit.
    [[nodiscard]] std::vector<double> forward(const ModelParams &params, const Image &image) const;

    /// Mean loss over `batch`; writes the mean gradient into `grad`
    /// (same shapes as `params`).
    double batch_gradient(const ModelParams &params, const Dataset &data,
                          std::span<const std::size_t> batch, ModelParams &grad) const;

    TrainingHistory train(const Dataset &data, ModelParams params,
                          const EpochCallback &on_epoch = {}) const;

  private:
    HybridModelConfig config_;
    Circuit circuit_;
};

/// Trainer(config).train(data, init_params(config), on_epoch).
TrainingHistory train(const HybridModelConfig &config, const Dataset &data,
                      const EpochCallback &on_epoch = {});

} // namespace fockqnn
