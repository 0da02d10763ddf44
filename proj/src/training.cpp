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

#include "fockqnn/training.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <string>
#include <thread>

namespace fockqnn {

namespace {

struct NormRange {
    double min = 1.0;
    double max = 1.0;

    void add(double v) {
        min = std::min(min, v);
        max = std::max(max, v);
    }
    void merge(const NormRange &o) {
        add(o.min);
        add(o.max);
    }
};

// Layer gates depend only on the shared layer parameters, so one set serves
// a whole batch. Indexed by slot (base) and by layer parameter (shifted).
struct LayerGateCache {
    std::vector<ComplexMatrix> base;
    std::vector<std::array<ComplexMatrix, 2>> shifted;
};

std::vector<double> layer_vector(const ModelParams &params) {
    std::vector<double> out;
    for (const auto &l : params.layers) {
        out.insert(out.end(), l.begin(), l.end());
    }
    return out;
}

std::vector<double> circuit_params(const Eigen::VectorXd &features,
                                   const std::vector<double> &layers) {
    std::vector<double> p(features.data(), features.data() + features.size());
    p.insert(p.end(), layers.begin(), layers.end());
    return p;
}

ModelParams zeros_like(const ModelParams &p) {
    ModelParams z = p;
    for (ClassicalLayer &l : z.encoder) {
        l.weights.setZero();
        l.bias.setZero();
    }
    for (auto &l : z.layers) {
        std::fill(l.begin(), l.end(), 0.0);
    }
    return z;
}

Eigen::VectorXd as_vector(const Image &image) {
    return Eigen::Map<const Eigen::VectorXd>(image.data(), static_cast<Eigen::Index>(image.size()));
}

Eigen::VectorXd encoder_output(const ModelParams &params, const Image &image) {
    const Eigen::VectorXd features = classical_forward(params.encoder, as_vector(image));
    if (!features.allFinite()) {
        throw DivergenceError("encoder output is not finite");
    }
    return features;
}

bool all_finite(const std::vector<double> &v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

} // namespace

void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t, int)> &fn) {
    const auto threads = static_cast<std::size_t>(std::max(1, workers));
    if (threads == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i, 0);
        }
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    const std::size_t used = std::min(threads, count);
    pool.reserve(used);
    for (std::size_t w = 0; w < used; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += used) {
                    fn(i, static_cast<int>(w));
                }
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

Trainer::Trainer(HybridModelConfig config)
    : config_((config.validate(), std::move(config))),
      circuit_(config_.modes, CutoffDim(config_.cutoff), config_.layers) {}

std::vector<double> Trainer::forward(const ModelParams &params, const Image &image) const {
    const auto p = circuit_params(encoder_output(params, image), layer_vector(params));
    return circuit_.readout(config_.measurement, circuit_.run(p));
}

Evaluation Trainer::evaluate(const ModelParams &params, const Dataset &data) const {
    const std::vector<double> layers = layer_vector(params);
    const int out_size = config_.output_size();
    std::vector<double> losses(data.size());
    std::vector<int> preds(data.size());
    std::vector<NormRange> norms(data.size());

    parallel_for(data.size(), config_.workers, [&](std::size_t i, int) {
        const auto p = circuit_params(encoder_output(params, data.images[i]), layers);
        ComplexVector amps = circuit_.vacuum();
        ComplexVector scratch;
        const auto &slots = circuit_.slots();
        std::size_t b = 0;
        for (std::size_t s = 0; s < slots.size(); ++s) {
            circuit_.apply(slots[s], circuit_.gate(slots[s], p), amps, scratch);
            while (b < circuit_.boundaries().size() &&
                   static_cast<std::size_t>(circuit_.boundaries()[b]) == s + 1) {
                norms[i].add(amps.norm());
                ++b;
            }
        }
        const auto out = circuit_.readout(config_.measurement, amps);
        losses[i] = loss_value(config_.loss, out, pad_onehot(data.labels[i], out_size));
        preds[i] = predict(out);
    });

    Evaluation ev;
    std::size_t correct = 0;
    double total = 0.0;
    NormRange range;
    for (std::size_t i = 0; i < data.size(); ++i) {
        total += losses[i];
        correct += preds[i] == data.labels[i] ? 1 : 0;
        range.merge(norms[i]);
    }
    ev.loss = data.size() ? total / static_cast<double>(data.size()) : 0.0;
    ev.accuracy = data.size() ? static_cast<double>(correct) / static_cast<double>(data.size()) : 0.0;
    ev.min_norm = range.min;
    ev.max_norm = range.max;
    ev.predictions = std::move(preds);
    return ev;
}

double Trainer::batch_gradient(const ModelParams &params, const Dataset &data,
                               std::span<const std::size_t> batch, ModelParams &grad) const {
    const Circuit &c = circuit_;
    const auto &slots = c.slots();
    const int enc = encoding_param_count(config_.modes);
    const int out_size = config_.output_size();
    const std::vector<double> layers = layer_vector(params);

    LayerGateCache cache;
    cache.base.resize(slots.size());
    cache.shifted.resize(layers.size());
    {
        // Feature entries are never read for layer slots.
        std::vector<double> p(static_cast<std::size_t>(enc), 0.0);
        p.insert(p.end(), layers.begin(), layers.end());
        for (std::size_t s = static_cast<std::size_t>(c.boundaries()[0]); s < slots.size(); ++s) {
            cache.base[s] = c.gate(slots[s], p);
        }
        for (std::size_t k = 0; k < layers.size(); ++k) {
            const int idx = enc + static_cast<int>(k);
            const GateSlot &slot = slots[static_cast<std::size_t>(c.slot_of(idx))];
            cache.shifted[k][0] = c.gate(slot, p, idx, kCircuitFdDelta);
            cache.shifted[k][1] = c.gate(slot, p, idx, -kCircuitFdDelta);
        }
    }

    std::vector<ModelParams> grads(batch.size());
    std::vector<double> losses(batch.size());

    parallel_for(batch.size(), config_.workers, [&](std::size_t bi, int) {
        const std::size_t sample = batch[bi];
        const Image &image = data.images[sample];
        const auto target = pad_onehot(data.labels[sample], out_size);
        auto loss_of = [&](const ComplexVector &amps) {
            return loss_value(config_.loss, c.readout(config_.measurement, amps), target);
        };

        // Encoder forward, keeping what backprop needs.
        const std::size_t depth = params.encoder.size();
        std::vector<Eigen::VectorXd> inputs(depth);
        std::vector<Eigen::VectorXd> pre(depth);
        Eigen::VectorXd h = as_vector(image);
        for (std::size_t l = 0; l < depth; ++l) {
            const ClassicalLayer &layer = params.encoder[l];
            inputs[l] = h;
            pre[l] = layer.weights * h + layer.bias;
            h = layer.activation == Activation::elu
                    ? Eigen::VectorXd(pre[l].unaryExpr([](double v) { return elu(v); }))
                    : pre[l];
        }
        if (!h.allFinite()) {
            throw DivergenceError("encoder output is not finite");
        }
        const std::vector<double> p = circuit_params(h, layers);

        std::vector<ComplexMatrix> enc_gates(static_cast<std::size_t>(c.boundaries()[0]));
        std::vector<const ComplexMatrix *> gates(slots.size());
        for (std::size_t s = 0; s < slots.size(); ++s) {
            if (s < enc_gates.size()) {
                enc_gates[s] = c.gate(slots[s], p);
                gates[s] = &enc_gates[s];
            } else {
                gates[s] = &cache.base[s];
            }
        }

        ComplexVector scratch;
        std::vector<ComplexVector> prefix(slots.size() + 1);
        prefix[0] = c.vacuum();
        for (std::size_t s = 0; s < slots.size(); ++s) {
            prefix[s + 1] = prefix[s];
            c.apply(slots[s], *gates[s], prefix[s + 1], scratch);
        }
        for (int b : c.boundaries()) {
            if (prefix[static_cast<std::size_t>(b)].norm() < kMinStateNorm) {
                throw DivergenceError("state norm fell below " + std::to_string(kMinStateNorm));
            }
        }
        losses[bi] = loss_of(prefix.back());

        std::vector<double> dq(p.size());
        ComplexVector probe;
        ComplexMatrix shifted_gate;
        for (std::size_t k = 0; k < p.size(); ++k) {
            const auto s = static_cast<std::size_t>(c.slot_of(static_cast<int>(k)));
            std::array<double, 2> l{};
            for (int side = 0; side < 2; ++side) {
                const ComplexMatrix *g = nullptr;
                if (static_cast<int>(k) < enc) {
                    shifted_gate = c.gate(slots[s], p, static_cast<int>(k),
                                          side == 0 ? kCircuitFdDelta : -kCircuitFdDelta);
                    g = &shifted_gate;
                } else {
                    g = &cache.shifted[k - static_cast<std::size_t>(enc)][static_cast<std::size_t>(side)];
                }
                probe = prefix[s];
                c.apply(slots[s], *g, probe, scratch);
                for (std::size_t t = s + 1; t < slots.size(); ++t) {
                    c.apply(slots[t], *gates[t], probe, scratch);
                }
                l[static_cast<std::size_t>(side)] = loss_of(probe);
            }
            dq[k] = (l[0] - l[1]) / (2.0 * kCircuitFdDelta);
        }

        ModelParams g = zeros_like(params);
        Eigen::VectorXd delta = Eigen::Map<const Eigen::VectorXd>(dq.data(), enc);
        for (std::size_t l = depth; l-- > 0;) {
            const ClassicalLayer &layer = params.encoder[l];
            if (layer.activation == Activation::elu) {
                delta = delta.cwiseProduct(pre[l].unaryExpr([](double v) { return elu_derivative(v); }));
            }
            g.encoder[l].weights.noalias() = delta * inputs[l].transpose();
            g.encoder[l].bias = delta;
            if (l > 0) {
                delta = layer.weights.transpose() * delta;
            }
        }
        const auto per_layer = static_cast<std::size_t>(layer_param_count(config_.modes));
        for (std::size_t l = 0; l < g.layers.size(); ++l) {
            std::copy_n(dq.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(enc) + l * per_layer),
                        per_layer, g.layers[l].begin());
        }
        grads[bi] = std::move(g);
    });

    grad = zeros_like(params);
    double total = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        total += losses[i];
        for (std::size_t l = 0; l < grad.encoder.size(); ++l) {
            grad.encoder[l].weights += grads[i].encoder[l].weights;
            grad.encoder[l].bias += grads[i].encoder[l].bias;
        }
        for (std::size_t l = 0; l < grad.layers.size(); ++l) {
            for (std::size_t k = 0; k < grad.layers[l].size(); ++k) {
                grad.layers[l][k] += grads[i].layers[l][k];
            }
        }
    }
    const double scale = batch.empty() ? 0.0 : 1.0 / static_cast<double>(batch.size());
    for (auto &l : grad.encoder) {
        l.weights *= scale;
        l.bias *= scale;
    }
    for (auto &l : grad.layers) {
        for (double &v : l) {
            v *= scale;
        }
    }
    return total * scale;
}

TrainingHistory Trainer::train(const Dataset &data, ModelParams params,
                               const EpochCallback &on_epoch) const {
    if (data.size() == 0) {
        throw std::invalid_argument("training set is empty");
    }
    const auto start = std::chrono::steady_clock::now();
    auto metrics = [&](int epoch, const Evaluation &ev) {
        if (!std::isfinite(ev.loss)) {
            throw DivergenceError("epoch " + std::to_string(epoch) + ": loss is not finite");
        }
        if (ev.min_norm < kMinStateNorm) {
            throw DivergenceError("epoch " + std::to_string(epoch) + ": state norm " +
                                  std::to_string(ev.min_norm) + " below " +
                                  std::to_string(kMinStateNorm));
        }
        return EpochMetrics{epoch, ev.loss, ev.accuracy, ev.min_norm, ev.max_norm};
    };

    TrainingHistory history;
    history.config = config_;
    history.initial = metrics(0, evaluate(params, data));

    std::mt19937_64 rng(config_.seed ^ 0x9E3779B97F4A7C15ULL);
    std::vector<std::size_t> order(data.size());
    ModelParams grad;
    const auto batch = static_cast<std::size_t>(config_.batch_size);
    for (int epoch = 1; epoch <= config_.epochs; ++epoch) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[static_cast<std::size_t>(rng() % i)]);
        }
        for (std::size_t start_idx = 0; start_idx < order.size(); start_idx += batch) {
            const std::size_t len = std::min(batch, order.size() - start_idx);
            const double loss = batch_gradient(
                params, data, std::span<const std::size_t>(order).subspan(start_idx, len), grad);
            if (!std::isfinite(loss)) {
                throw DivergenceError("epoch " + std::to_string(epoch) + ": batch loss is not finite");
            }
            const std::vector<double> next = sgd_step(params.flatten(), grad.flatten(), config_.lr);
            if (!all_finite(next)) {
                throw DivergenceError("epoch " + std::to_string(epoch) + ": parameters are not finite");
            }
            params.assign(next);
        }
        history.epochs.push_back(metrics(epoch, evaluate(params, data)));
        if (on_epoch) {
            on_epoch(history.epochs.back());
        }
    }
    history.final_params = std::move(params);
    history.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return history;
}

TrainingHistory train(const HybridModelConfig &config, const Dataset &data,
                      const EpochCallback &on_epoch) {
    const Trainer trainer(config);
    return trainer.train(data, init_params(config), on_epoch);
}

} // namespace fockqnn
