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

#include "fockqnn/artifact.hpp"

#include <fstream>
#include <sstream>

namespace fockqnn {

using nlohmann::json;

namespace {

std::string to_string(Activation a) { return a == Activation::elu ? "elu" : "identity"; }

Activation parse_activation(const std::string &name) {
    if (name == "elu") {
        return Activation::elu;
    }
    if (name == "identity") {
        return Activation::identity;
    }
    throw ArtifactError("unknown activation '" + name + "'");
}

json metrics_to_json(const EpochMetrics &m) {
    return {{"epoch", m.epoch},       {"loss", m.loss},         {"accuracy", m.accuracy},
            {"min_norm", m.min_norm}, {"max_norm", m.max_norm}};
}

EpochMetrics metrics_from_json(const json &j) {
    EpochMetrics m;
    m.epoch = j.at("epoch").get<int>();
    m.loss = j.at("loss").get<double>();
    m.accuracy = j.at("accuracy").get<double>();
    m.min_norm = j.value("min_norm", 1.0);
    m.max_norm = j.value("max_norm", 1.0);
    if (!(m.accuracy >= 0.0 && m.accuracy <= 1.0)) {
        throw ArtifactError("accuracy outside [0, 1] at epoch " + std::to_string(m.epoch));
    }
    return m;
}

} // namespace

std::string to_string(MeasurementMode mode) {
    return mode == MeasurementMode::expectation_x ? "expectation" : "probability";
}

std::string to_string(LossKind loss) { return loss == LossKind::mse ? "mse" : "xent"; }

MeasurementMode parse_measurement(const std::string &name) {
    if (name == "probability") {
        return MeasurementMode::probability;
    }
    if (name == "expectation" || name == "expectation_x") {
        return MeasurementMode::expectation_x;
    }
    throw std::invalid_argument("unknown measurement '" + name + "'");
}

LossKind parse_loss(const std::string &name) {
    if (name == "xent" || name == "categorical_crossentropy") {
        return LossKind::categorical_crossentropy;
    }
    if (name == "mse") {
        return LossKind::mse;
    }
    throw std::invalid_argument("unknown loss '" + name + "'");
}

json config_to_json(const HybridModelConfig &c) {
    return {{"qumodes", c.modes},
            {"cutoff", c.cutoff},
            {"layers", c.layers},
            {"encoder_widths", c.widths()},
            {"measurement", to_string(c.measurement)},
            {"loss", to_string(c.loss)},
            {"lr", c.lr},
            {"epochs", c.epochs},
            {"seed", c.seed},
            {"samples", c.samples},
            {"classes", c.classes},
            {"batch_size", c.batch_size},
            {"workers", c.workers},
            {"selection", "balanced"}};
}

HybridModelConfig config_from_json(const json &j) {
    HybridModelConfig c;
    c.modes = j.at("qumodes").get<int>();
    c.cutoff = j.at("cutoff").get<int>();
    c.layers = j.at("layers").get<int>();
    c.encoder_widths = j.at("encoder_widths").get<std::vector<int>>();
    c.measurement = parse_measurement(j.at("measurement").get<std::string>());
    c.loss = parse_loss(j.at("loss").get<std::string>());
    c.lr = j.at("lr").get<double>();
    c.epochs = j.at("epochs").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.samples = j.at("samples").get<int>();
    c.classes = j.at("classes").get<int>();
    c.batch_size = j.value("batch_size", kDefaultBatchSize);
    c.workers = j.value("workers", 1);
    c.validate();
    return c;
}

json params_to_json(const ModelParams &p) {
    json encoder = json::array();
    for (const ClassicalLayer &l : p.encoder) {
        json rows = json::array();
        for (Eigen::Index r = 0; r < l.weights.rows(); ++r) {
            std::vector<double> row(static_cast<std::size_t>(l.weights.cols()));
            for (Eigen::Index c = 0; c < l.weights.cols(); ++c) {
                row[static_cast<std::size_t>(c)] = l.weights(r, c);
            }
            rows.push_back(std::move(row));
        }
        encoder.push_back({{"activation", to_string(l.activation)},
                           {"weights", std::move(rows)},
                           {"bias", std::vector<double>(l.bias.data(), l.bias.data() + l.bias.size())}});
    }
    return {{"encoder", std::move(encoder)}, {"layers", p.layers}};
}

ModelParams params_from_json(const json &j, const HybridModelConfig &config) {
    ModelParams p;
    const std::vector<int> widths = config.widths();
    const json &encoder = j.at("encoder");
    if (encoder.size() != widths.size()) {
        throw ArtifactError("encoder depth does not match config");
    }
    int in = kImagePixels;
    for (std::size_t i = 0; i < widths.size(); ++i) {
        const json &lj = encoder.at(i);
        ClassicalLayer l;
        l.activation = parse_activation(lj.at("activation").get<std::string>());
        const auto rows = lj.at("weights").get<std::vector<std::vector<double>>>();
        const auto bias = lj.at("bias").get<std::vector<double>>();
        if (rows.size() != static_cast<std::size_t>(widths[i]) ||
            bias.size() != static_cast<std::size_t>(widths[i])) {
            throw ArtifactError("encoder layer " + std::to_string(i) + " has the wrong width");
        }
        l.weights.resize(widths[i], in);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != static_cast<std::size_t>(in)) {
                throw ArtifactError("encoder layer " + std::to_string(i) + " has the wrong fan-in");
            }
            for (std::size_t c = 0; c < rows[r].size(); ++c) {
                l.weights(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
            }
        }
        l.bias = Eigen::Map<const Eigen::VectorXd>(bias.data(), static_cast<Eigen::Index>(bias.size()));
        l.validate();
        p.encoder.push_back(std::move(l));
        in = widths[i];
    }
    p.layers = j.at("layers").get<std::vector<std::vector<double>>>();
    if (p.layers.size() != static_cast<std::size_t>(config.layers)) {
        throw ArtifactError("layer count does not match config");
    }
    for (const auto &l : p.layers) {
        if (l.size() != static_cast<std::size_t>(layer_param_count(config.modes))) {
            throw ArtifactError("QNN layer has the wrong parameter count");
        }
    }
    return p;
}

json artifact_to_json(const RunArtifact &a) {
    json epochs = json::array();
    for (const EpochMetrics &m : a.history.epochs) {
        epochs.push_back(metrics_to_json(m));
    }
    return {{"config", config_to_json(a.history.config)},
            {"data", {{"mnist_dir", a.mnist_dir}}},
            {"initial", metrics_to_json(a.history.initial)},
            {"epochs", std::move(epochs)},
            {"final_params", params_to_json(a.history.final_params)},
            {"wall_time_seconds", a.history.wall_time_seconds},
            {"tool_version", a.tool_version},
            {"invocation", a.invocation}};
}

RunArtifact artifact_from_json(const json &j) {
    try {
        RunArtifact a;
        a.history.config = config_from_json(j.at("config"));
        a.mnist_dir = j.at("data").at("mnist_dir").get<std::string>();
        a.history.initial = metrics_from_json(j.at("initial"));
        for (const json &e : j.at("epochs")) {
            a.history.epochs.push_back(metrics_from_json(e));
        }
        a.history.final_params = params_from_json(j.at("final_params"), a.history.config);
        a.history.wall_time_seconds = j.at("wall_time_seconds").get<double>();
        a.tool_version = j.at("tool_version").get<std::string>();
        a.invocation = j.at("invocation").get<std::vector<std::string>>();
        return a;
    } catch (const ArtifactError &) {
        throw;
    } catch (const std::exception &e) {
        throw ArtifactError(std::string("invalid run artifact: ") + e.what());
    }
}

void write_artifact(const RunArtifact &artifact, const std::string &path) {
    std::ofstream out(path);
    if (!out) {
        throw ArtifactError("cannot write " + path);
    }
    out << artifact_to_json(artifact).dump(2) << "\n";
    if (!out) {
        throw ArtifactError("failed writing " + path);
    }
}

RunArtifact read_artifact(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ArtifactError("cannot open " + path);
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception &e) {
        throw ArtifactError("corrupt JSON in " + path + ": " + e.what());
    }
    return artifact_from_json(j);
}

} // namespace fockqnn
