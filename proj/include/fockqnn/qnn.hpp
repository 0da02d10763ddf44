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
 * Hybrid classifier: a dense classical encoder produces the 8m-2 features of
 * a CV encoding circuit, followed by stacked CV QNN layers and an exact
 * readout.
 *
 * Encoding features, in order:
 *   squeeze r (m), squeeze phi (m), bs theta (m-1), bs phi (m-1), rot phi (m),
 *   disp r (m), disp phi (m), kerr kappa (m)
 * applied to the vacuum as K o D o U o S.
 *
 * Layer parameters, in order:
 *   U1 [bs theta (m-1), bs phi (m-1), rot (m)], S r (m),
 *   U2 [bs theta (m-1), bs phi (m-1), rot (m)], D r (m), K kappa (m)
 * applied as K o D o U2 o S o U1. Layer squeezers and displacements are real.
 *
 * Every squeeze and displacement magnitude passes through squash() first.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fockqnn/fock.hpp"
#include "fockqnn/gates.hpp"

namespace fockqnn {

double elu(double x);
double elu_derivative(double x);

enum class Activation { elu, identity };

struct ClassicalLayer {
    Eigen::MatrixXd weights; // out x in
    Eigen::VectorXd bias;    // out
    Activation activation = Activation::elu;

    /// Throws std::invalid_argument on shape mismatch or non-finite entries.
    void validate() const;
    [[nodiscard]] Eigen::VectorXd forward(const Eigen::VectorXd &x) const;
};

/// Throws DimensionError when consecutive shapes do not chain.
Eigen::VectorXd classical_forward(const std::vector<ClassicalLayer> &layers,
                                  const Eigen::VectorXd &x);

/// 8m - 2; throws std::invalid_argument for m < 2.
int encoding_param_count(int modes);
/// 9m - 4; throws std::invalid_argument for m < 2.
int layer_param_count(int modes);

inline constexpr double kMagnitudeBound = 1.5;

/// r -> 1.5 tanh(r).
double squash(double r);

struct EncodingParams {
    std::vector<double> squeeze_r;
    std::vector<double> squeeze_phi;
    InterferometerParams interferometer;
    std::vector<double> displacement_r;
    std::vector<double> displacement_phi;
    std::vector<double> kerr;

    static EncodingParams partition(std::span<const double> flat, int modes);
    [[nodiscard]] std::vector<double> flatten() const;
};

struct QnnLayerParams {
    InterferometerParams u1;
    std::vector<double> squeeze_r;
    InterferometerParams u2;
    std::vector<double> displacement_r;
    std::vector<double> kerr;

    static QnnLayerParams partition(std::span<const double> flat, int modes);
    [[nodiscard]] std::vector<double> flatten() const;
};

MultiModeState encode(std::span<const double> features, int modes, CutoffDim n);
MultiModeState qnn_layer(std::span<const double> params, const MultiModeState &state);

enum class MeasurementMode { probability, expectation_x };
enum class LossKind { categorical_crossentropy, mse };

inline constexpr int kDefaultHiddenWidth = 32;
inline constexpr int kDefaultBatchSize = 16;

struct HybridModelConfig {
    int modes = 2;
    int cutoff = 2;
    int layers = 1;
    /// Hidden widths followed by 8m - 2. Empty means {32, 8m - 2}.
    std::vector<int> encoder_widths;
    MeasurementMode measurement = MeasurementMode::probability;
    LossKind loss = LossKind::categorical_crossentropy;
    double lr = 0.05;
    int epochs = 10;
    std::uint64_t seed = 42;
    int samples = 200;
    int classes = 10;
    int batch_size = kDefaultBatchSize;
    int workers = 1;

    /// Throws std::invalid_argument.
    void validate() const;
    [[nodiscard]] std::vector<int> widths() const;
    /// n^m for probability readout, m for expectation readout.
    [[nodiscard]] int output_size() const;
};

struct ModelParams {
    std::vector<ClassicalLayer> encoder;
    std::vector<std::vector<double>> layers; // each 9m - 4

    [[nodiscard]] std::size_t count() const;
    /// Encoder weights (column-major), encoder bias, per layer, then layer parameters.
    [[nodiscard]] std::vector<double> flatten() const;
    /// Overwrites every entry from `flat`, which must have count() entries.
    void assign(std::span<const double> flat);
};

/// Classical weights U[-0.05, 0.05], biases 0; layer angles U[0, 2pi);
/// squeeze, displacement and Kerr magnitudes N(0, 0.1).
ModelParams init_params(const HybridModelConfig &config);

/// Reference forward pass through the public gate API.
std::vector<double> model_forward(const HybridModelConfig &config, const ModelParams &params,
                                  const std::vector<double> &image);

/// One-hot of length out_size; label must be in 0..9 and below out_size.
std::vector<double> pad_onehot(int label, int out_size);

inline constexpr double kXentEpsilon = 1e-12;

double loss_xent(const std::vector<double> &pred, const std::vector<double> &target);
double loss_mse(const std::vector<double> &pred, const std::vector<double> &target);
double loss_value(LossKind kind, const std::vector<double> &pred,
                  const std::vector<double> &target);

/// Index of the largest entry; ties resolve to the lowest index.
int predict(const std::vector<double> &output);

using ScalarFunction = std::function<double(std::span<const double>)>;

/// Central differences. Throws std::domain_error on a non-finite evaluation.
std::vector<double> finite_diff_grad(const ScalarFunction &f, std::span<const double> params,
                                     double delta);

std::vector<double> sgd_step(std::span<const double> params, std::span<const double> grads,
                             double lr);

} // namespace fockqnn
