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

#include "fockqnn/qnn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "fockqnn/dataio.hpp"
#include "fockqnn/measurement.hpp"

namespace fockqnn {

namespace {

void require_modes(int modes) {
    if (modes < 2) {
        throw std::invalid_argument("at least 2 qumodes are required, got " + std::to_string(modes));
    }
}

void require_length(std::size_t got, int expected, const char *what) {
    if (got != static_cast<std::size_t>(expected)) {
        throw DimensionError(std::string(what) + " needs " + std::to_string(expected) +
                             " parameters, got " + std::to_string(got));
    }
}

// Reads consecutive blocks out of a flat span.
class Cursor {
  public:
    explicit Cursor(std::span<const double> flat) : flat_(flat) {}
    std::vector<double> take(int count) {
        std::vector<double> out(flat_.begin() + static_cast<std::ptrdiff_t>(pos_),
                                flat_.begin() + static_cast<std::ptrdiff_t>(pos_ + count));
        pos_ += static_cast<std::size_t>(count);
        return out;
    }
    InterferometerParams take_interferometer(int modes) {
        InterferometerParams p;
        p.bs_thetas = take(modes - 1);
        p.bs_phis = take(modes - 1);
        p.rot_phis = take(modes);
        return p;
    }

  private:
    std::span<const double> flat_;
    std::size_t pos_ = 0;
};

void append(std::vector<double> &out, const std::vector<double> &v) {
    out.insert(out.end(), v.begin(), v.end());
}

void append(std::vector<double> &out, const InterferometerParams &p) {
    append(out, p.bs_thetas);
    append(out, p.bs_phis);
    append(out, p.rot_phis);
}

// r e^{i phi} without std::polar, which requires r >= 0.
Complex complex_from(double r, double phi) { return {r * std::cos(phi), r * std::sin(phi)}; }

} // namespace

double elu(double x) { return x >= 0.0 ? x : std::expm1(x); }

double elu_derivative(double x) { return x >= 0.0 ? 1.0 : std::exp(x); }

void ClassicalLayer::validate() const {
    if (weights.rows() != bias.size()) {
        throw DimensionError("classical layer: weights have " + std::to_string(weights.rows()) +
                             " rows, bias has " + std::to_string(bias.size()) + " entries");
    }
    if (!weights.allFinite() || !bias.allFinite()) {
        throw std::invalid_argument("classical layer has non-finite entries");
    }
}

Eigen::VectorXd ClassicalLayer::forward(const Eigen::VectorXd &x) const {
    if (x.size() != weights.cols()) {
        throw DimensionError("classical layer expects " + std::to_string(weights.cols()) +
                             " inputs, got " + std::to_string(x.size()));
    }
    Eigen::VectorXd a = weights * x + bias;
    if (activation == Activation::elu) {
        a = a.unaryExpr([](double v) { return elu(v); });
    }
    return a;
}

Eigen::VectorXd classical_forward(const std::vector<ClassicalLayer> &layers,
                                  const Eigen::VectorXd &x) {
    Eigen::VectorXd h = x;
    for (const ClassicalLayer &layer : layers) {
        h = layer.forward(h);
    }
    return h;
}

int encoding_param_count(int modes) {
    require_modes(modes);
    return 8 * modes - 2;
}

int layer_param_count(int modes) {
    require_modes(modes);
    return 9 * modes - 4;
}

double squash(double r) { return kMagnitudeBound * std::tanh(r); }

EncodingParams EncodingParams::partition(std::span<const double> flat, int modes) {
    require_length(flat.size(), encoding_param_count(modes), "encoding");
    Cursor c(flat);
    EncodingParams p;
    p.squeeze_r = c.take(modes);
    p.squeeze_phi = c.take(modes);
    p.interferometer = c.take_interferometer(modes);
    p.displacement_r = c.take(modes);
    p.displacement_phi = c.take(modes);
    p.kerr = c.take(modes);
    return p;
}

std::vector<double> EncodingParams::flatten() const {
    std::vector<double> out;
    append(out, squeeze_r);
    append(out, squeeze_phi);
    append(out, interferometer);
    append(out, displacement_r);
    append(out, displacement_phi);
    append(out, kerr);
    return out;
}

QnnLayerParams QnnLayerParams::partition(std::span<const double> flat, int modes) {
    require_length(flat.size(), layer_param_count(modes), "QNN layer");
    Cursor c(flat);
    QnnLayerParams p;
    p.u1 = c.take_interferometer(modes);
    p.squeeze_r = c.take(modes);
    p.u2 = c.take_interferometer(modes);
    p.displacement_r = c.take(modes);
    p.kerr = c.take(modes);
    return p;
}

std::vector<double> QnnLayerParams::flatten() const {
    std::vector<double> out;
    append(out, u1);
    append(out, squeeze_r);
    append(out, u2);
    append(out, displacement_r);
    append(out, kerr);
    return out;
}

MultiModeState encode(std::span<const double> features, int modes, CutoffDim n) {
    const EncodingParams p = EncodingParams::partition(features, modes);
    MultiModeState state = MultiModeState::vacuum(modes, n);
    for (int j = 0; j < modes; ++j) {
        state = apply_single_mode(
            squeezer(complex_from(squash(p.squeeze_r[j]), p.squeeze_phi[j]), n), state, j);
    }
    state = apply(interferometer(p.interferometer, modes, n), state);
    for (int j = 0; j < modes; ++j) {
        state = apply_single_mode(
            displacement(complex_from(squash(p.displacement_r[j]), p.displacement_phi[j]), n),
            state, j);
    }
    for (int j = 0; j < modes; ++j) {
        state = apply_single_mode(kerr(p.kerr[j], n), state, j);
    }
    return state;
}

MultiModeState qnn_layer(std::span<const double> params, const MultiModeState &state) {
    const int modes = state.modes();
    const CutoffDim n = state.cutoff();
    const QnnLayerParams p = QnnLayerParams::partition(params, modes);
    MultiModeState out = apply(interferometer(p.u1, modes, n), state);
    for (int j = 0; j < modes; ++j) {
        out = apply_single_mode(squeezer(Complex(squash(p.squeeze_r[j]), 0.0), n), out, j);
    }
    out = apply(interferometer(p.u2, modes, n), out);
    for (int j = 0; j < modes; ++j) {
        out = apply_single_mode(displacement(Complex(squash(p.displacement_r[j]), 0.0), n), out, j);
    }
    for (int j = 0; j < modes; ++j) {
        out = apply_single_mode(kerr(p.kerr[j], n), out, j);
    }
    return out;
}

void HybridModelConfig::validate() const {
    auto fail = [](const std::string &msg) { throw std::invalid_argument(msg); };
    if (modes < 2) {
        fail("qumodes must be >= 2");
    }
    if (cutoff < 2) {
        fail("cutoff must be >= 2");
    }
    if (std::pow(static_cast<double>(cutoff), modes) > 65536.0) {
        fail("cutoff^qumodes must not exceed 65536");
    }
    if (layers < 0) {
        fail("layers must be >= 0");
    }
    const std::vector<int> w = widths();
    for (int v : w) {
        if (v < 1) {
            fail("encoder widths must be positive");
        }
    }
    if (w.back() != encoding_param_count(modes)) {
        fail("last encoder width must be 8m-2 = " + std::to_string(encoding_param_count(modes)));
    }
    if (measurement == MeasurementMode::expectation_x && cutoff != 2) {
        fail("expectation readout requires cutoff 2");
    }
    if (classes < 1 || classes > kDigitClasses) {
        fail("classes must be in 1..10");
    }
    if (output_size() < classes) {
        fail("readout size " + std::to_string(output_size()) + " is smaller than classes " +
             std::to_string(classes));
    }
    if (!std::isfinite(lr) || lr < 0.0) {
        fail("lr must be finite and non-negative");
    }
    if (epochs < 0) {
        fail("epochs must be >= 0");
    }
    if (samples < 1) {
        fail("samples must be >= 1");
    }
    if (batch_size < 1) {
        fail("batch size must be >= 1");
    }
    if (workers < 1) {
        fail("workers must be >= 1");
    }
}

std::vector<int> HybridModelConfig::widths() const {
    if (!encoder_widths.empty()) {
        return encoder_widths;
    }
    return {kDefaultHiddenWidth, 8 * modes - 2};
}

int HybridModelConfig::output_size() const {
    if (measurement == MeasurementMode::expectation_x) {
        return modes;
    }
    return static_cast<int>(std::lround(std::pow(static_cast<double>(cutoff), modes)));
}

std::size_t ModelParams::count() const {
    std::size_t total = 0;
    for (const ClassicalLayer &l : encoder) {
        total += static_cast<std::size_t>(l.weights.size() + l.bias.size());
    }
    for (const auto &l : layers) {
        total += l.size();
    }
    return total;
}

std::vector<double> ModelParams::flatten() const {
    std::vector<double> out;
    out.reserve(count());
    for (const ClassicalLayer &l : encoder) {
        out.insert(out.end(), l.weights.data(), l.weights.data() + l.weights.size());
        out.insert(out.end(), l.bias.data(), l.bias.data() + l.bias.size());
    }
    for (const auto &l : layers) {
        append(out, l);
    }
    return out;
}

void ModelParams::assign(std::span<const double> flat) {
    if (flat.size() != count()) {
        throw DimensionError("parameter vector has " + std::to_string(flat.size()) +
                             " entries, model has " + std::to_string(count()));
    }
    std::size_t pos = 0;
    auto fill = [&](double *dst, Eigen::Index n) {
        std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(pos), n, dst);
        pos += static_cast<std::size_t>(n);
    };
    for (ClassicalLayer &l : encoder) {
        fill(l.weights.data(), l.weights.size());
        fill(l.bias.data(), l.bias.size());
    }
    for (auto &l : layers) {
        fill(l.data(), static_cast<Eigen::Index>(l.size()));
    }
}

ModelParams init_params(const HybridModelConfig &config) {
    config.validate();
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> weight(-0.05, 0.05);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::normal_distribution<double> magnitude(0.0, 0.1);

    ModelParams p;
    const std::vector<int> widths = config.widths();
    int in = kImagePixels;
    for (std::size_t i = 0; i < widths.size(); ++i) {
        ClassicalLayer layer;
        layer.weights.resize(widths[i], in);
        for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
            for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
                layer.weights(r, c) = weight(rng);
            }
        }
        layer.bias = Eigen::VectorXd::Zero(widths[i]);
        layer.activation = i + 1 == widths.size() ? Activation::identity : Activation::elu;
        p.encoder.push_back(std::move(layer));
        in = widths[i];
    }

    const int m = config.modes;
    for (int l = 0; l < config.layers; ++l) {
        QnnLayerParams q;
        auto draw = [&](auto &dist, int count) {
            std::vector<double> v(static_cast<std::size_t>(count));
            for (double &x : v) {
                x = dist(rng);
            }
            return v;
        };
        auto draw_interferometer = [&] {
            InterferometerParams ip;
            ip.bs_thetas = draw(angle, m - 1);
            ip.bs_phis = draw(angle, m - 1);
            ip.rot_phis = draw(angle, m);
            return ip;
        };
        q.u1 = draw_interferometer();
        q.squeeze_r = draw(magnitude, m);
        q.u2 = draw_interferometer();
        q.displacement_r = draw(magnitude, m);
        q.kerr = draw(magnitude, m);
        p.layers.push_back(q.flatten());
    }
    return p;
}

std::vector<double> model_forward(const HybridModelConfig &config, const ModelParams &params,
                                  const std::vector<double> &image) {
    const CutoffDim n(config.cutoff);
    const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(
        image.data(), static_cast<Eigen::Index>(image.size()));
    const Eigen::VectorXd features = classical_forward(params.encoder, x);
    MultiModeState state = encode(std::span<const double>(features.data(), features.size()),
                                  config.modes, n);
    for (const auto &layer : params.layers) {
        state = qnn_layer(layer, state);
    }
    if (config.measurement == MeasurementMode::expectation_x) {
        return expectation_all_modes(state, pauli_x(n));
    }
    return probabilities(state);
}

std::vector<double> pad_onehot(int label, int out_size) {
    if (label < 0 || label >= kDigitClasses) {
        throw std::invalid_argument("label must be in 0..9, got " + std::to_string(label));
    }
    if (out_size <= label) {
        throw std::invalid_argument("output size " + std::to_string(out_size) +
                                    " cannot hold label " + std::to_string(label));
    }
    std::vector<double> v(static_cast<std::size_t>(out_size), 0.0);
    v[static_cast<std::size_t>(label)] = 1.0;
    return v;
}

double loss_xent(const std::vector<double> &pred, const std::vector<double> &target) {
    require_length(pred.size(), static_cast<int>(target.size()), "cross-entropy");
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (target[i] != 0.0) {
            sum -= target[i] * std::log(pred[i] + kXentEpsilon);
        }
    }
    return sum;
}

double loss_mse(const std::vector<double> &pred, const std::vector<double> &target) {
    require_length(pred.size(), static_cast<int>(target.size()), "mse");
    if (pred.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - target[i];
        sum += d * d;
    }
    return sum / static_cast<double>(pred.size());
}

double loss_value(LossKind kind, const std::vector<double> &pred,
                  const std::vector<double> &target) {
    return kind == LossKind::mse ? loss_mse(pred, target) : loss_xent(pred, target);
}

int predict(const std::vector<double> &output) {
    if (output.empty()) {
        throw std::invalid_argument("cannot predict from an empty output");
    }
    return static_cast<int>(std::max_element(output.begin(), output.end()) - output.begin());
}

std::vector<double> finite_diff_grad(const ScalarFunction &f, std::span<const double> params,
                                     double delta) {
    if (!(delta > 0.0)) {
        throw std::invalid_argument("delta must be positive");
    }
    std::vector<double> p(params.begin(), params.end());
    std::vector<double> g(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double saved = p[i];
        p[i] = saved + delta;
        const double up = f(p);
        p[i] = saved - delta;
        const double down = f(p);
        p[i] = saved;
        if (!std::isfinite(up) || !std::isfinite(down)) {
            throw std::domain_error("non-finite function value at coordinate " + std::to_string(i));
        }
        g[i] = (up - down) / (2.0 * delta);
    }
    return g;
}

std::vector<double> sgd_step(std::span<const double> params, std::span<const double> grads,
                             double lr) {
    if (params.size() != grads.size()) {
        throw DimensionError("sgd_step: " + std::to_string(params.size()) + " parameters, " +
                             std::to_string(grads.size()) + " gradients");
    }
    std::vector<double> out(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        out[i] = params[i] - lr * grads[i];
    }
    return out;
}

} // namespace fockqnn
