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
 * JSON run artifact: training history, configuration echo and final
 * parameters. Doubles are written in shortest round-trip form, so a reloaded
 * artifact reproduces the trained model bit for bit.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fockqnn/training.hpp"

namespace fockqnn {

inline constexpr const char *kToolVersion = "0.1.0";

class ArtifactError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct RunArtifact {
    TrainingHistory history;
    std::string mnist_dir;
    std::string tool_version = kToolVersion;
    std::vector<std::string> invocation;
};

std::string to_string(MeasurementMode mode);
std::string to_string(LossKind loss);
/// Accepts "probability" / "expectation" and "xent" / "categorical_crossentropy" / "mse".
MeasurementMode parse_measurement(const std::string &name);
LossKind parse_loss(const std::string &name);

nlohmann::json config_to_json(const HybridModelConfig &config);
HybridModelConfig config_from_json(const nlohmann::json &j);

nlohmann::json params_to_json(const ModelParams &params);
/// Checks every shape against `config`.
ModelParams params_from_json(const nlohmann::json &j, const HybridModelConfig &config);

nlohmann::json artifact_to_json(const RunArtifact &artifact);
/// Throws ArtifactError on any schema violation.
RunArtifact artifact_from_json(const nlohmann::json &j);

void write_artifact(const RunArtifact &artifact, const std::string &path);
RunArtifact read_artifact(const std::string &path);

} // namespace fockqnn
