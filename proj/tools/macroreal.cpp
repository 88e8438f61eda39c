// Copyright 2026 The macroreal Authors
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

// macroreal <experiment> --config file.json [--threads N] [--output file.csv]
// macroreal verify --config file.json [--threads N]

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "macroreal/app/experiments.hpp"

using namespace macroreal;
using namespace macroreal::app;

namespace {

struct Options {
    std::string config;
    std::string output;
    int threads = 1;
};

int write_table(const Table &table, const std::optional<std::string> &path) {
    if (!path) {
        table.write(std::cout);
        return kExitOk;
    }
    std::ofstream out(*path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write " << *path << "\n";
        return kExitInvalidConfig;
    }
    table.write(out);
    return kExitOk;
}

int run(const std::string &experiment, const Options &opt) {
    const RunConfig cfg = load_config(opt.config, experiment);
    const RunResult result = run_experiment(cfg, opt.threads);
    const auto path = opt.output.empty() ? cfg.output : std::optional<std::string>(opt.output);
    if (int rc = write_table(result.table, path); rc != kExitOk) return rc;
    (path ? std::cout : std::cerr) << result.summary << "\n";
    return kExitOk;
}

int verify(const Options &opt) {
    const RunConfig cfg = load_config(opt.config);
    const VerifyResult v = verify_experiment(cfg, opt.threads);
    std::printf("verify %s: cutoffs and grids doubled, tolerance %g\n", cfg.experiment.c_str(), cfg.verify_tolerance);
    std::printf("%-16s %-14s %s\n", "column", "max_drift", "gated");
    for (const auto &d : v.drift) {
        std::printf("%-16s %-14.6g %s%s\n", d.column.c_str(), d.max_drift, d.gated ? "yes" : "no",
                    d.text_changed ? " (text changed)" : "");
    }
    std::printf("verify: %s\n", v.passed ? "converged" : "DRIFT EXCEEDS TOLERANCE");
    return v.passed ? kExitOk : kExitNonConvergence;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Cat-state signature calculator"};
    app.require_subcommand(1);
    Options opt;

    auto add = [&](const std::string &name, const std::string &help) {
        CLI::App *sub = app.add_subcommand(name, help);
        sub->add_option("--config", opt.config, "JSON run configuration")->required();
        sub->add_option("--threads", opt.threads, "worker threads")->check(CLI::Range(1, 256));
        return sub;
    };
    std::vector<std::pair<std::string, CLI::App *>> runs;
    for (const auto &[name, help] : std::vector<std::pair<std::string, std::string>>{
             {"typeone", "variance-product inequality for number superpositions"},
             {"noon", "NOON coherence moment"},
             {"svetlichny", "GHZ Svetlichny value against the hybrid bound"},
             {"mlr-chsh", "CHSH value of the pair coherent state, ideal and amplified"},
             {"mlr-sweep", "three-region CHSH over alpha and delta"}}) {
        CLI::App *sub = add(name, help);
        sub->add_option("--output", opt.output, "CSV path (overrides the config)");
        runs.emplace_back(name, sub);
    }
    CLI::App *verify_cmd = add("verify", "rerun with doubled cutoffs and report drift");

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify_cmd->parsed()) return verify(opt);
        for (const auto &[name, sub] : runs)
            if (sub->parsed()) return run(name, opt);
    } catch (const ConfigError &e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const macroreal::InvalidArgument &e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const macroreal::NonConvergence &e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return kExitNonConvergence;
    } catch (const NonFiniteValue &e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return kExitNonConvergence;
    }
    return kExitInvalidConfig;
}
