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

// Command implementations behind the `hsca` tool. Each command takes a fully
// resolved config, writes its outputs atomically into the output directory
// and records a `<command>_manifest.json` from which the run can be replayed.

#pragma once

#include "hsca/attacks.hpp"
#include "hsca/eval.hpp"
#include "hsca/synth.hpp"
#include "hsca/synth_io.hpp"
#include "hsca/trace_io.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hsca::cli {

namespace fs = std::filesystem;
using nlohmann::json;

inline constexpr int manifest_schema_version = 1;
inline constexpr const char *out_dir_env = "HSCA_OUT_DIR";

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_io = 2 };

/// Output directory when --out is not given: $HSCA_OUT_DIR, else ".".
inline fs::path default_out_dir() {
    if (const char *env = std::getenv(out_dir_env); env && *env)
        return env;
    return ".";
}

struct Geometry {
    std::size_t slots = 230;
    std::size_t cycles = 54;
    std::size_t samples = 300;

    DesignParams params() const { return DesignParams::with_shape(slots, cycles, samples); }
};

inline void to_json(json &j, const Geometry &g) {
    j = json{{"slots", g.slots}, {"cycles", g.cycles}, {"samples", g.samples}};
}
inline void from_json(const json &j, Geometry &g) {
    j.at("slots").get_to(g.slots);
    j.at("cycles").get_to(g.cycles);
    j.at("samples").get_to(g.samples);
}

/// Where the leakage model comes from. Resolution always yields a concrete
/// model, which the manifest stores in full.
struct ModelSource {
    std::string profile = "moderate";
    Seed model_seed = 1;
    std::optional<fs::path> path;

    LeakageModel resolve(const DesignParams &p) const {
        if (path) {
            auto m = read_model_file(*path);
            m.validate(p.cycles_per_slot);
            return m;
        }
        return default_model(p, parse_profile(profile), model_seed);
    }

    std::string descriptor() const {
        if (path)
            return "file:" + path->filename().string();
        return "profile:" + profile + ",model_seed:" + std::to_string(model_seed);
    }
};

inline std::vector<std::string> method_names(const std::vector<Method> &ms) {
    std::vector<std::string> out;
    for (auto m : ms)
        out.emplace_back(to_string(m));
    return out;
}

inline std::vector<Method> methods_from_names(const std::vector<std::string> &names) {
    std::vector<Method> out;
    for (const auto &n : names) {
        if (n == "both" || n == "all") {
            out.push_back(Method::mean_comparison);
            out.push_back(Method::kmeans);
        } else {
            out.push_back(parse_method(n));
        }
    }
    std::vector<Method> unique;
    for (auto m : out)
        if (std::find(unique.begin(), unique.end(), m) == unique.end())
            unique.push_back(m);
    if (unique.empty())
        throw DomainError("no attack method selected");
    return unique;
}

/// "table1" or a comma separated list of weights.
inline std::vector<std::size_t> parse_weights(const std::string &text) {
    if (text == "table1")
        return table1_weights();
    std::vector<std::size_t> out;
    for (const auto &f : io::split_csv_line(text)) {
        if (f.empty() || f.find_first_not_of("0123456789") != std::string::npos)
            throw DomainError("bad weight '" + f + "'");
        out.push_back(std::stoull(f));
    }
    return out;
}

inline void write_manifest(const fs::path &out_dir, const std::string &command,
                           const json &config, const std::vector<std::string> &outputs) {
    json j{{"schema_version", manifest_schema_version},
           {"tool", "hsca"},
           {"command", command},
           {"config", config},
           {"outputs", outputs}};
    io::write_file_atomic(out_dir / (command + "_manifest.json"), j.dump(2) + '\n');
}

// --- synth ------------------------------------------------------------------

struct SynthConfig {
    std::size_t hw = 115;
    Seed seed = 0;
    Geometry geometry;
    ModelSource model_source;
    std::optional<LeakageModel> model; ///< set on replay; overrides model_source
    std::optional<std::string> model_descriptor; ///< set on replay
    bool raw = false;
    double jitter_sigma = RawOptions{}.jitter_sigma;
    fs::path out = ".";
};

struct SynthResult {
    ScalarKey key;
    CompressedTrace trace;
    std::vector<std::string> outputs;
};

/// Writes key.txt, trace.csv (and trace.hsca with raw), model.json and the
/// manifest.
inline SynthResult run_synth(const SynthConfig &cfg) {
    const auto params = cfg.geometry.params();
    const auto model = cfg.model ? *cfg.model : cfg.model_source.resolve(params);
    model.validate(params.cycles_per_slot);
    auto key = experiment_key(cfg.hw, params.main_loop_bits, cfg.seed);
    const auto trace_seed = experiment_trace_seed(cfg.seed);
    auto trace = gen_compressed_trace(key, model, trace_seed, params);

    std::vector<std::string> outputs{"key.txt", "trace.csv", "model.json"};
    write_key_file(cfg.out / "key.txt", key);
    write_compressed_csv(cfg.out / "trace.csv", trace);
    write_model_file(cfg.out / "model.json", model);
    if (cfg.raw) {
        write_raw_trace(cfg.out / "trace.hsca",
                        gen_raw_trace(key, model, trace_seed, params, {cfg.jitter_sigma}));
        outputs.push_back("trace.hsca");
    }
    json config{{"hw", cfg.hw},
                {"seed", cfg.seed},
                {"geometry", cfg.geometry},
                {"model_descriptor", cfg.model_descriptor.value_or(cfg.model_source.descriptor())},
                {"model", model_to_json(model)},
                {"raw", cfg.raw},
                {"jitter_sigma", cfg.jitter_sigma}};
    write_manifest(cfg.out, "synth", config, outputs);
    return {std::move(key), std::move(trace), std::move(outputs)};
}

// --- attack -----------------------------------------------------------------

struct AttackConfig {
    fs::path trace;
    std::optional<fs::path> key;
    std::vector<Method> methods{Method::mean_comparison, Method::kmeans};
    Seed seed = 0;
    EvalOptions eval;
    fs::path out = ".";
};

struct AttackResult {
    std::vector<CandidateSet> sets;
    std::vector<AttackReport> reports; ///< empty without a key
    std::vector<std::string> outputs;
};

/// Writes candidates_<method>.csv per method and, with a key,
/// report_<method>.csv.
inline AttackResult run_attack_command(const AttackConfig &cfg) {
    const auto trace = load_trace(cfg.trace);
    std::optional<ScalarKey> key;
    if (cfg.key)
        key = read_key_file(*cfg.key, trace.slots());
    AttackResult result;
    for (auto method : cfg.methods) {
        auto set = run_attack(method, trace, experiment_attack_seed(cfg.seed));
        const std::string name(to_string(method));
        write_candidates_csv(cfg.out / ("candidates_" + name + ".csv"), set);
        result.outputs.push_back("candidates_" + name + ".csv");
        if (key) {
            auto rep = evaluate_candidates(set, *key, cfg.eval);
            io::write_file_atomic(cfg.out / ("report_" + name + ".csv"),
                                  encode_attack_report_csv(rep));
            result.outputs.push_back("report_" + name + ".csv");
            result.reports.push_back(std::move(rep));
        }
        result.sets.push_back(std::move(set));
    }
    json config{{"trace", cfg.trace.string()},
                {"key", cfg.key ? json(cfg.key->string()) : json(nullptr)},
                {"methods", method_names(cfg.methods)},
                {"seed", cfg.seed},
                {"allow_complement", cfg.eval.allow_complement},
                {"tracked", cfg.eval.tracked}};
    write_manifest(cfg.out, "attack", config, result.outputs);
    return result;
}

// --- sweep ------------------------------------------------------------------

struct SweepCommandConfig {
    std::vector<std::size_t> weights = table1_weights();
    Seed seed = 0;
    Geometry geometry;
    ModelSource model_source;
    std::optional<LeakageModel> model; ///< set on replay; overrides model_source
    std::optional<std::string> model_descriptor; ///< set on replay
    std::vector<Method> methods{Method::mean_comparison, Method::kmeans};
    EvalOptions eval;
    PlotFormat format = PlotFormat::csv;
    fs::path out = ".";
};

inline SweepConfig resolve_sweep(const SweepCommandConfig &cfg) {
    SweepConfig sc;
    sc.weights = cfg.weights;
    sc.params = cfg.geometry.params();
    sc.model = cfg.model ? *cfg.model : cfg.model_source.resolve(sc.params);
    sc.model_descriptor = cfg.model_descriptor.value_or(cfg.model_source.descriptor());
    sc.methods = cfg.methods;
    sc.master_seed = cfg.seed;
    sc.eval = cfg.eval;
    return sc;
}

struct SweepResult {
    SweepReport report;
    std::vector<std::string> outputs;
};

/// Writes sweep.csv, the plot series and the manifest.
inline SweepResult run_sweep_command(const SweepCommandConfig &cfg) {
    const auto sc = resolve_sweep(cfg);
    auto report = sweep(sc);
    io::write_file_atomic(cfg.out / "sweep.csv", encode_sweep_csv(report));
    std::vector<std::string> outputs{"sweep.csv"};
    for (const auto &p : write_plot_data(cfg.out, report, cfg.format))
        outputs.push_back(p.filename().string());
    json config{{"weights", cfg.weights},
                {"seed", cfg.seed},
                {"geometry", cfg.geometry},
                {"model_descriptor", sc.model_descriptor},
                {"model", model_to_json(sc.model)},
                {"methods", method_names(cfg.methods)},
                {"allow_complement", cfg.eval.allow_complement},
                {"tracked", cfg.eval.tracked},
                {"format", cfg.format == PlotFormat::csv ? "csv" : "svg-data"}};
    write_manifest(cfg.out, "sweep", config, outputs);
    return {std::move(report), std::move(outputs)};
}

// --- report -----------------------------------------------------------------

struct ReportConfig {
    fs::path sweep_csv;
    PlotFormat format = PlotFormat::csv;
    fs::path out = ".";
};

/// Regenerates plot series from an existing sweep CSV.
inline std::vector<std::string> run_report(const ReportConfig &cfg) {
    const auto report = decode_sweep_csv(io::read_file(cfg.sweep_csv));
    std::vector<std::string> outputs;
    for (const auto &p : write_plot_data(cfg.out, report, cfg.format))
        outputs.push_back(p.filename().string());
    json config{{"sweep_csv", cfg.sweep_csv.string()},
                {"format", cfg.format == PlotFormat::csv ? "csv" : "svg-data"}};
    write_manifest(cfg.out, "report", config, outputs);
    return outputs;
}

// --- replay -----------------------------------------------------------------

/// Re-runs the command recorded in a manifest. Outputs go to `out` when
/// given, else next to the manifest.
inline std::string replay(const fs::path &manifest_path, std::optional<fs::path> out = {}) {
    json j;
    try {
        j = json::parse(io::read_file(manifest_path));
    } catch (const json::parse_error &e) {
        throw FormatError(manifest_path.string() + ": " + e.what());
    }
    const fs::path dir = out ? *out : manifest_path.parent_path();
    try {
        if (j.at("schema_version").get<int>() != manifest_schema_version)
            throw FormatError("unsupported manifest schema version");
        const auto command = j.at("command").get<std::string>();
        const auto &c = j.at("config");
        auto eval_options = [&] {
            EvalOptions e;
            e.allow_complement = c.at("allow_complement").get<bool>();
            e.tracked = c.at("tracked").get<std::vector<std::size_t>>();
            return e;
        };
        if (command == "synth") {
            SynthConfig cfg;
            cfg.hw = c.at("hw").get<std::size_t>();
            cfg.seed = c.at("seed").get<Seed>();
            cfg.geometry = c.at("geometry").get<Geometry>();
            cfg.model = model_from_json(c.at("model"));
            cfg.model_descriptor = c.at("model_descriptor").get<std::string>();
            cfg.raw = c.at("raw").get<bool>();
            cfg.jitter_sigma = c.at("jitter_sigma").get<double>();
            cfg.out = dir;
            run_synth(cfg);
        } else if (command == "attack") {
            AttackConfig cfg;
            cfg.trace = c.at("trace").get<std::string>();
            if (!c.at("key").is_null())
                cfg.key = c.at("key").get<std::string>();
            cfg.methods = methods_from_names(c.at("methods").get<std::vector<std::string>>());
            cfg.seed = c.at("seed").get<Seed>();
            cfg.eval = eval_options();
            cfg.out = dir;
            run_attack_command(cfg);
        } else if (command == "sweep") {
            SweepCommandConfig cfg;
            cfg.weights = c.at("weights").get<std::vector<std::size_t>>();
            cfg.seed = c.at("seed").get<Seed>();
            cfg.geometry = c.at("geometry").get<Geometry>();
            cfg.model = model_from_json(c.at("model"));
            cfg.methods = methods_from_names(c.at("methods").get<std::vector<std::string>>());
            cfg.eval = eval_options();
            cfg.format = parse_plot_format(c.at("format").get<std::string>());
            cfg.out = dir;
            cfg.model_descriptor = c.at("model_descriptor").get<std::string>();
            run_sweep_command(cfg);
        } else if (command == "report") {
            ReportConfig cfg;
            cfg.sweep_csv = c.at("sweep_csv").get<std::string>();
            cfg.format = parse_plot_format(c.at("format").get<std::string>());
            cfg.out = dir;
            run_report(cfg);
        } else {
            throw FormatError("manifest names unknown command '" + command + "'");
        }
        return command;
    } catch (const json::exception &e) {
        throw FormatError(std::string("malformed manifest: ") + e.what());
    }
}

} // namespace hsca::cli
