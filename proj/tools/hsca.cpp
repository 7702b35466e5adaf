/*
 * SPDX-FileCopyrightText: <text>Copyright 2026 The hsca authors</text>
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 * This file is part of hsca, a horizontal side-channel analysis toolkit.
 */

// hsca: synthesize traces, run horizontal attacks, sweep hamming weights.
//
// Exit codes: 0 success, 1 usage or domain error, 2 I/O or format error.

#include "hsca/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace hsca;
using namespace hsca::cli;

struct Globals {
    Seed seed = 0;
    std::string out;
    std::string format = "csv";

    fs::path out_dir() const { return out.empty() ? default_out_dir() : fs::path(out); }
};

void add_geometry(CLI::App *cmd, Geometry &g) {
    cmd->add_option("--slots", g.slots, "main-loop bits l")->capture_default_str();
    cmd->add_option("--cycles", g.cycles, "clock cycles per slot m")->capture_default_str();
    cmd->add_option("--samples", g.samples, "samples per clock cycle S")->capture_default_str();
}

void add_model(CLI::App *cmd, ModelSource &src, std::string &model_path) {
    cmd->add_option("--profile", src.profile, "default model profile: strong, moderate, weak")
        ->capture_default_str()
        ->check(CLI::IsMember({"strong", "moderate", "weak"}));
    cmd->add_option("--model-seed", src.model_seed, "seed of the default model")
        ->capture_default_str();
    cmd->add_option("--model", model_path, "leakage model JSON (overrides --profile)");
}

void add_eval(CLI::App *cmd, EvalOptions &e) {
    cmd->add_flag("--allow-complement", e.allow_complement,
                  "also score the complemented candidates");
    cmd->add_option("--tracked", e.tracked, "candidate indices reported individually")
        ->delimiter(',')
        ->capture_default_str();
}

int run(int argc, char **argv) {
    CLI::App app{"Horizontal side-channel analysis of scalar multiplication traces"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "master seed")->capture_default_str();
    app.add_option("--out", g.out,
                   std::string("output directory (default $") + out_dir_env + " or .)");
    app.add_option("--format", g.format, "plot data format")
        ->capture_default_str()
        ->check(CLI::IsMember({"csv", "svg-data"}));

    // synth
    SynthConfig synth;
    std::string synth_model;
    auto *synth_cmd = app.add_subcommand("synth", "generate a key and its synthetic trace");
    synth_cmd->add_option("--hw", synth.hw, "hamming weight of the key")->required();
    synth_cmd->add_flag("--raw", synth.raw, "also write the raw HSCA sample trace");
    synth_cmd->add_option("--jitter", synth.jitter_sigma, "per-sample jitter std for --raw")
        ->capture_default_str();
    add_geometry(synth_cmd, synth.geometry);
    add_model(synth_cmd, synth.model_source, synth_model);

    // attack
    AttackConfig attack;
    std::string attack_key;
    std::vector<std::string> attack_methods{"both"};
    auto *attack_cmd = app.add_subcommand("attack", "recover key candidates from a trace");
    attack_cmd->add_option("--trace", attack.trace, "HSCA binary or compressed CSV")
        ->required();
    attack_cmd->add_option("--key", attack_key, "true key, enables correctness reports");
    attack_cmd->add_option("--methods", attack_methods, "mean, kmeans or both")
        ->delimiter(',')
        ->capture_default_str();
    add_eval(attack_cmd, attack.eval);

    // sweep
    SweepCommandConfig sweep_cfg;
    std::string weights = "table1";
    std::string sweep_model;
    std::vector<std::string> sweep_methods{"both"};
    auto *sweep_cmd = app.add_subcommand("sweep", "attack one synthetic trace per weight");
    sweep_cmd->add_option("--weights", weights, "'table1' or comma separated weights")
        ->capture_default_str();
    sweep_cmd->add_option("--methods", sweep_methods, "mean, kmeans or both")
        ->delimiter(',')
        ->capture_default_str();
    add_geometry(sweep_cmd, sweep_cfg.geometry);
    add_model(sweep_cmd, sweep_cfg.model_source, sweep_model);
    add_eval(sweep_cmd, sweep_cfg.eval);

    // report
    ReportConfig report;
    auto *report_cmd = app.add_subcommand("report", "regenerate plot data from a sweep CSV");
    report_cmd->add_option("--sweep", report.sweep_csv, "sweep CSV")->required();

    // replay
    std::string manifest;
    auto *replay_cmd = app.add_subcommand("replay", "re-run the command recorded in a manifest");
    replay_cmd->add_option("manifest", manifest, "<command>_manifest.json")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return exit_usage;
    }

    const auto out = g.out_dir();
    const auto format = parse_plot_format(g.format);
    if (*synth_cmd) {
        synth.seed = g.seed;
        synth.out = out;
        if (!synth_model.empty())
            synth.model_source.path = synth_model;
        auto r = run_synth(synth);
        std::cout << "wrote key (hamming weight " << r.key.hamming_weight() << ") and trace to "
                  << out.string() << '\n';
    } else if (*attack_cmd) {
        attack.seed = g.seed;
        attack.out = out;
        attack.methods = methods_from_names(attack_methods);
        if (!attack_key.empty())
            attack.key = attack_key;
        auto r = run_attack_command(attack);
        for (const auto &rep : r.reports)
            std::cout << to_string(rep.method) << ": best candidate " << rep.best_index
                      << " correctness " << io::format_number(rep.best_value) << '\n';
        std::cout << "wrote " << r.outputs.size() << " files to " << out.string() << '\n';
    } else if (*sweep_cmd) {
        sweep_cfg.seed = g.seed;
        sweep_cfg.out = out;
        sweep_cfg.format = format;
        sweep_cfg.weights = parse_weights(weights);
        sweep_cfg.methods = methods_from_names(sweep_methods);
        if (!sweep_model.empty())
            sweep_cfg.model_source.path = sweep_model;
        auto r = run_sweep_command(sweep_cfg);
        std::cout << "swept " << r.report.rows.size() << " weights into "
                  << (out / "sweep.csv").string() << '\n';
    } else if (*report_cmd) {
        report.out = out;
        report.format = format;
        auto files = run_report(report);
        std::cout << "wrote " << files.size() << " plot series to " << out.string() << '\n';
    } else if (*replay_cmd) {
        std::optional<fs::path> replay_out;
        if (!g.out.empty())
            replay_out = g.out;
        std::cout << "replayed " << replay(manifest, replay_out) << '\n';
    }
    return exit_ok;
}

} // namespace

int main(int argc, char **argv) {
    try {
        return run(argc, argv);
    } catch (const hsca::FormatError &e) {
        std::cerr << "hsca: " << e.what() << '\n';
        return hsca::cli::exit_io;
    } catch (const std::filesystem::filesystem_error &e) {
        std::cerr << "hsca: " << e.what() << '\n';
        return hsca::cli::exit_io;
    } catch (const std::invalid_argument &e) {
        // DomainError and DimensionError
        std::cerr << "hsca: " << e.what() << '\n';
        return hsca::cli::exit_usage;
    } catch (const std::exception &e) {
        std::cerr << "hsca: " << e.what() << '\n';
        return hsca::cli::exit_io;
    }
}
