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

// Command-line entry point.
//
// Exit codes: 0 success, 1 a verification check failed, 2 bad flags,
// 3 data or artifact error, 4 training diverged.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "fockqnn/artifact.hpp"
#include "fockqnn/dataio.hpp"
#include "fockqnn/gates.hpp"
#include "fockqnn/qubit.hpp"
#include "fockqnn/training.hpp"
#include "fockqnn/wigner.hpp"

namespace {

using namespace fockqnn;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitDiverged = 4;

struct TrainFlags {
    HybridModelConfig config;
    std::string loss = "xent";
    std::string measurement = "probability";
    std::vector<int> hidden{kDefaultHiddenWidth};
    std::string mnist_dir;
    std::string out = "run.json";
};

struct EvalFlags {
    std::string artifact;
    std::string mnist_dir;
    std::string slice = "heldout";
    int samples = 0;
    int workers = 0;
};

struct WignerFlags {
    int fock = 0;
    double range = 4.0;
    int points = 101;
    std::string out;
};

struct GatesFlags {
    std::string check = "unitarity";
    int cutoff = 16;
    int trials = 50;
    std::uint64_t seed = 42;
};

struct AppendixFlags {
    std::string demo;
    std::uint64_t seed = 0;
};

int default_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

int usage_error(const std::string &msg) {
    std::cerr << "error: " << msg << "\n";
    return kExitUsage;
}

int data_error(const std::string &msg) {
    std::cerr << "error: " << msg << "\n";
    return kExitData;
}

int run_train(TrainFlags &f, const std::vector<std::string> &invocation) {
    HybridModelConfig &cfg = f.config;
    try {
        cfg.loss = parse_loss(f.loss);
        cfg.measurement = parse_measurement(f.measurement);
        cfg.encoder_widths = f.hidden;
        cfg.encoder_widths.push_back(encoding_param_count(cfg.modes));
        cfg.validate();
    } catch (const std::invalid_argument &e) {
        return usage_error(e.what());
    }

    Dataset train_set;
    try {
        train_set = take_balanced(load_mnist(f.mnist_dir), cfg.samples, cfg.classes, cfg.seed);
    } catch (const DataError &e) {
        return data_error(e.what());
    }

    RunArtifact artifact;
    artifact.mnist_dir = f.mnist_dir;
    artifact.invocation = invocation;
    try {
        const Trainer trainer(cfg);
        artifact.history = trainer.train(train_set, init_params(cfg), [](const EpochMetrics &m) {
            std::printf("epoch=%d loss=%.9g acc=%.6f\n", m.epoch, m.loss, m.accuracy);
            std::fflush(stdout);
        });
    } catch (const DivergenceError &e) {
        std::cerr << "error: training diverged: " << e.what() << "\n";
        return kExitDiverged;
    }

    try {
        write_artifact(artifact, f.out);
    } catch (const ArtifactError &e) {
        return data_error(e.what());
    }
    std::printf("wrote %s\n", f.out.c_str());
    return kExitOk;
}

int run_eval(const EvalFlags &f) {
    RunArtifact artifact;
    try {
        artifact = read_artifact(f.artifact);
    } catch (const std::exception &e) {
        return data_error(e.what());
    }
    HybridModelConfig cfg = artifact.history.config;
    if (f.workers > 0) {
        cfg.workers = f.workers;
    }
    const std::string dir = f.mnist_dir.empty() ? artifact.mnist_dir : f.mnist_dir;

    Dataset slice;
    try {
        const Dataset all = load_mnist(dir);
        const auto train_idx = select_balanced(all.labels, cfg.samples, cfg.classes, cfg.seed);
        if (f.slice == "train") {
            slice = subset(all, train_idx);
        } else {
            const int n = f.samples > 0 ? f.samples : cfg.samples;
            slice = subset(all, select_balanced(all.labels, n, cfg.classes, cfg.seed, train_idx));
        }
    } catch (const DataError &e) {
        return data_error(e.what());
    }

    const Evaluation ev = Trainer(cfg).evaluate(artifact.history.final_params, slice);
    std::printf("acc=%.17g loss=%.17g samples=%zu slice=%s\n", ev.accuracy, ev.loss, slice.size(),
                f.slice.c_str());
    return kExitOk;
}

int run_wigner(const WignerFlags &f) {
    PhaseSpaceGrid grid;
    try {
        grid = wigner_grid(f.fock, f.range, f.points);
    } catch (const std::invalid_argument &e) {
        return usage_error(e.what());
    }
    std::ofstream out(f.out);
    if (!out) {
        return data_error("cannot write " + f.out);
    }
    write_wigner_csv(grid, out);
    if (!out) {
        return data_error("failed writing " + f.out);
    }
    std::printf("rows=%zu max_deviation=%.3e\n", grid.values.size(), grid.max_closed_form_deviation);
    return kExitOk;
}

int run_gates(const GatesFlags &f) {
    UnitarityReport report;
    try {
        report = gate_unitarity_report(CutoffDim(f.cutoff), f.trials, f.seed);
    } catch (const std::invalid_argument &e) {
        return usage_error(e.what());
    }
    std::cout << report.to_text();
    return report.passes(1e-9) ? kExitOk : kExitCheckFailed;
}

int run_appendix(const AppendixFlags &f) {
    std::cout << appendix_report(f.demo, f.seed);
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Fock-space CV quantum neural network simulator"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    TrainFlags tf;
    tf.config.workers = default_workers();
    auto *train = app.add_subcommand("train", "Train the hybrid classifier on MNIST");
    train->add_option("--qumodes", tf.config.modes, "Number of qumodes m")->capture_default_str();
    train->add_option("--cutoff", tf.config.cutoff, "Fock cutoff n")->capture_default_str();
    train->add_option("--layers", tf.config.layers, "QNN layers")->capture_default_str();
    train->add_option("--samples", tf.config.samples, "Training samples")->capture_default_str();
    train->add_option("--classes", tf.config.classes, "Digit classes 0..classes-1")->capture_default_str();
    train->add_option("--lr", tf.config.lr, "SGD learning rate")->capture_default_str();
    train->add_option("--epochs", tf.config.epochs, "Epochs")->capture_default_str();
    train->add_option("--batch-size", tf.config.batch_size, "Minibatch size")->capture_default_str();
    train->add_option("--loss", tf.loss, "xent or mse")
        ->check(CLI::IsMember({"xent", "mse"}))
        ->capture_default_str();
    train->add_option("--measurement", tf.measurement, "probability or expectation")
        ->check(CLI::IsMember({"probability", "expectation"}))
        ->capture_default_str();
    train->add_option("--hidden", tf.hidden, "Hidden encoder widths")->capture_default_str();
    train->add_option("--seed", tf.config.seed, "Seed")->capture_default_str();
    train->add_option("--workers", tf.config.workers, "Worker threads")->capture_default_str();
    train->add_option("--mnist-dir", tf.mnist_dir, "Directory with MNIST IDX files")->required();
    train->add_option("--out", tf.out, "Run artifact path")->capture_default_str();

    EvalFlags ef;
    auto *eval = app.add_subcommand("eval", "Evaluate a run artifact");
    eval->add_option("artifact", ef.artifact, "Run artifact JSON")->required();
    eval->add_option("--mnist-dir", ef.mnist_dir, "Override the recorded MNIST directory");
    eval->add_option("--slice", ef.slice, "train or heldout")
        ->check(CLI::IsMember({"train", "heldout"}))
        ->capture_default_str();
    eval->add_option("--samples", ef.samples, "Held-out slice size (default: training size)");
    eval->add_option("--workers", ef.workers, "Worker threads (default: recorded)");

    WignerFlags wf;
    auto *wigner = app.add_subcommand("wigner", "Write a Fock-state Wigner grid as CSV");
    wigner->add_option("--fock", wf.fock, "Fock level k")->required();
    wigner->add_option("--range", wf.range, "Half-width of the square grid")->capture_default_str();
    wigner->add_option("--points", wf.points, "Samples per axis (odd)")->capture_default_str();
    wigner->add_option("--out", wf.out, "CSV path")->required();

    GatesFlags gf;
    auto *gates = app.add_subcommand("gates", "Gate sanity checks");
    gates->add_option("--check", gf.check, "Check to run")
        ->check(CLI::IsMember({"unitarity"}))
        ->capture_default_str();
    gates->add_option("--cutoff", gf.cutoff, "Fock cutoff")->capture_default_str();
    gates->add_option("--trials", gf.trials, "Random draws per gate family")->capture_default_str();
    gates->add_option("--seed", gf.seed, "Seed")->capture_default_str();

    AppendixFlags af;
    auto *appendix = app.add_subcommand("appendix", "Qubit classifier verification report");
    appendix->add_option("--demo", af.demo, "google or qiskit")
        ->check(CLI::IsMember({"google", "qiskit"}))
        ->required();
    appendix->add_option("--seed", af.seed, "Seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    std::vector<std::string> invocation(argv + 1, argv + argc);
    try {
        if (*train) {
            return run_train(tf, invocation);
        }
        if (*eval) {
            return run_eval(ef);
        }
        if (*wigner) {
            return run_wigner(wf);
        }
        if (*gates) {
            return run_gates(gf);
        }
        if (*appendix) {
            return run_appendix(af);
        }
    } catch (const std::invalid_argument &e) {
        return usage_error(e.what());
    } catch (const DataError &e) {
        return data_error(e.what());
    }
    return kExitUsage;
}
