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

// Scoring key candidates against the true key and sweeping attacks over
// hamming weights.
//
// A candidate's correctness is the best match fraction over three alignments
// of the key: unshifted, shifted one bit left and one bit right. Shifted
// alignments only compare the l-1 overlapping positions but still divide by
// l, so they top out at (l-1)/l.

#pragma once

#include "hsca/attacks.hpp"
#include "hsca/io.hpp"
#include "hsca/rng.hpp"
#include "hsca/synth.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hsca {

enum class Alignment { none, left, right };

inline std::string_view to_string(Alignment a) {
    switch (a) {
    case Alignment::left:
        return "left";
    case Alignment::right:
        return "right";
    case Alignment::none:
        break;
    }
    return "none";
}

struct CorrectnessScore {
    std::size_t candidate_index = 0;
    double value = 0.0;
    std::size_t matches = 0;
    Alignment best_alignment = Alignment::none;
    bool complement_used = false;
};

/// Matching positions between `candidate` and `key` under `align`. `left`
/// compares candidate[j] with key[j+1], `right` compares candidate[j] with
/// key[j-1].
inline std::size_t count_matches(const Bits &candidate, const Bits &key, Alignment align) {
    const std::size_t l = key.size();
    std::size_t n = 0;
    switch (align) {
    case Alignment::none:
        for (std::size_t j = 0; j < l; ++j)
            n += candidate[j] == key[j];
        break;
    case Alignment::left:
        for (std::size_t j = 0; j + 1 < l; ++j)
            n += candidate[j] == key[j + 1];
        break;
    case Alignment::right:
        for (std::size_t j = 1; j < l; ++j)
            n += candidate[j] == key[j - 1];
        break;
    }
    return n;
}

/// Best score over the three alignments (and the complemented candidate when
/// allowed). Ties prefer no shift over left over right, and the candidate as
/// given over its complement.
inline CorrectnessScore correctness(const Bits &candidate, const ScalarKey &key,
                                    bool allow_complement = false) {
    if (candidate.size() != key.size())
        throw DomainError("candidate has " + std::to_string(candidate.size()) +
                          " bits, key has " + std::to_string(key.size()));
    if (key.size() == 0)
        throw DomainError("cannot score an empty key");
    CorrectnessScore best;
    bool first = true;
    auto consider = [&](const Bits &bits, bool complemented) {
        for (auto a : {Alignment::none, Alignment::left, Alignment::right}) {
            const auto n = count_matches(bits, key.bits(), a);
            if (first || n > best.matches) {
                best.matches = n;
                best.best_alignment = a;
                best.complement_used = complemented;
                first = false;
            }
        }
    };
    consider(candidate, false);
    if (allow_complement)
        consider(complement(candidate), true);
    best.value = static_cast<double>(best.matches) / static_cast<double>(key.size());
    return best;
}

inline std::vector<std::size_t> default_tracked_candidates() { return {22, 41, 49}; }

struct EvalOptions {
    bool allow_complement = false;
    std::vector<std::size_t> tracked = default_tracked_candidates();
};

struct AttackReport {
    Method method = Method::mean_comparison;
    std::vector<CorrectnessScore> scores; ///< one per candidate, cycle order
    std::size_t best_index = 0;           ///< 1-based, smallest on ties
    double best_value = 0.0;
    /// (cycle index, score); score is empty when the index exceeds m.
    std::vector<std::pair<std::size_t, std::optional<CorrectnessScore>>> tracked;
};

inline AttackReport evaluate_candidates(const CandidateSet &set, const ScalarKey &key,
                                        const EvalOptions &opts = {}) {
    if (set.candidates.empty())
        throw DomainError("candidate set is empty");
    AttackReport report;
    report.method = set.method;
    report.scores.reserve(set.size());
    for (const auto &c : set.candidates) {
        auto s = correctness(c.bits, key, opts.allow_complement);
        s.candidate_index = c.cycle_index;
        if (report.scores.empty() || s.value > report.best_value) {
            report.best_value = s.value;
            report.best_index = s.candidate_index;
        }
        report.scores.push_back(s);
    }
    for (auto idx : opts.tracked) {
        std::optional<CorrectnessScore> s;
        if (idx >= 1 && idx <= report.scores.size())
            s = report.scores[idx - 1];
        report.tracked.emplace_back(idx, s);
    }
    return report;
}

inline std::string encode_attack_report_csv(const AttackReport &report) {
    std::string out = "cycle_index,correctness,alignment,complement_used\n";
    for (const auto &s : report.scores) {
        out += std::to_string(s.candidate_index) + ',' + io::format_number(s.value) + ',';
        out += to_string(s.best_alignment);
        out += s.complement_used ? ",1\n" : ",0\n";
    }
    return out;
}

// --- hamming-weight sweep ---------------------------------------------------

struct MethodResult {
    Method method = Method::mean_comparison;
    double best_correctness = 0.0;
    std::size_t best_index = 0;
    std::vector<std::optional<double>> tracked; ///< parallel to SweepReport::tracked
};

struct SweepRow {
    std::size_t weight = 0;
    double weight_pct = 0.0; ///< 100 * d / l
    Seed seed = 0;           ///< row seed, derived from (master seed, weight)
    std::vector<MethodResult> results;
};

struct SweepReport {
    std::vector<SweepRow> rows; ///< ascending weight
    std::vector<std::size_t> tracked;
    std::string model_descriptor;
    Seed master_seed = 0;
};

struct SweepConfig {
    std::vector<std::size_t> weights = table1_weights();
    DesignParams params;
    LeakageModel model;
    std::string model_descriptor;
    std::vector<Method> methods{Method::mean_comparison, Method::kmeans};
    Seed master_seed = 0;
    EvalOptions eval;
};

/// Seed for the sweep row of weight `d`; independent of the other weights.
inline Seed row_seed(Seed master, std::size_t d) {
    return derive_seed(derive_seed(master, stream::weight), d);
}

/// Streams of one synthetic experiment. `synth --seed s` and `attack --seed s`
/// use the same derivation, so a sweep row can be replayed from its seed.
inline ScalarKey experiment_key(std::size_t d, std::size_t l, Seed s) {
    return gen_key(d, l, derive_seed(s, stream::key));
}
inline Seed experiment_trace_seed(Seed s) { return derive_seed(s, stream::trace); }
inline Seed experiment_attack_seed(Seed s) { return derive_seed(s, stream::attack); }

inline SweepRow sweep_row(const SweepConfig &cfg, std::size_t d) {
    const std::size_t l = cfg.params.main_loop_bits;
    SweepRow row;
    row.weight = d;
    row.weight_pct = 100.0 * static_cast<double>(d) / static_cast<double>(l);
    row.seed = row_seed(cfg.master_seed, d);
    const auto key = experiment_key(d, l, row.seed);
    const auto trace =
        gen_compressed_trace(key, cfg.model, experiment_trace_seed(row.seed), cfg.params);
    for (auto method : cfg.methods) {
        auto set = run_attack(method, trace, experiment_attack_seed(row.seed));
        auto rep = evaluate_candidates(set, key, cfg.eval);
        MethodResult r{method, rep.best_value, rep.best_index, {}};
        for (auto &[idx, s] : rep.tracked)
            r.tracked.push_back(s ? std::optional<double>(s->value) : std::nullopt);
        row.results.push_back(std::move(r));
    }
    return row;
}

/// One key and one trace per weight, every requested attack on each trace.
inline SweepReport sweep(const SweepConfig &cfg) {
    cfg.params.validate();
    cfg.model.validate(cfg.params.cycles_per_slot);
    if (cfg.methods.empty())
        throw DomainError("sweep needs at least one method");
    for (auto d : cfg.weights)
        if (d > cfg.params.main_loop_bits)
            throw DomainError("weight " + std::to_string(d) + " exceeds key length " +
                              std::to_string(cfg.params.main_loop_bits));
    auto weights = cfg.weights;
    std::stable_sort(weights.begin(), weights.end());

    SweepReport report;
    report.tracked = cfg.eval.tracked;
    report.model_descriptor = cfg.model_descriptor;
    report.master_seed = cfg.master_seed;
    for (auto d : weights)
        report.rows.push_back(sweep_row(cfg, d));
    return report;
}

inline std::string sweep_csv_header(const std::vector<std::size_t> &tracked) {
    std::string h = "d,d_pct,method,best_correctness,best_index";
    for (auto idx : tracked)
        h += ",corr_c" + std::to_string(idx);
    return h + ",seed";
}

/// One line per (weight, method).
inline std::string encode_sweep_csv(const SweepReport &report) {
    std::string out = sweep_csv_header(report.tracked) + '\n';
    for (const auto &row : report.rows)
        for (const auto &r : row.results) {
            out += std::to_string(row.weight) + ',' + io::format_number(row.weight_pct) + ',';
            out += to_string(r.method);
            out += ',' + io::format_number(r.best_correctness) + ',' +
                   std::to_string(r.best_index);
            for (const auto &t : r.tracked)
                out += ',' + (t ? io::format_number(*t) : std::string());
            out += ',' + std::to_string(row.seed) + '\n';
        }
    return out;
}

/// Parses a sweep CSV back into a report. Rows with the same weight are
/// merged; model descriptor and master seed are not part of the CSV.
inline SweepReport decode_sweep_csv(const std::string &text) {
    auto lines = io::split_lines(text);
    if (lines.empty())
        throw FormatError("empty sweep CSV");
    auto header = io::split_csv_line(lines.front());
    if (header.size() < 6 || header[0] != "d" || header[1] != "d_pct" || header[2] != "method" ||
        header[3] != "best_correctness" || header[4] != "best_index" || header.back() != "seed")
        throw FormatError("sweep CSV has an unexpected header");
    SweepReport report;
    for (std::size_t c = 5; c + 1 < header.size(); ++c) {
        if (header[c].rfind("corr_c", 0) != 0)
            throw FormatError("unexpected sweep CSV column " + header[c]);
        report.tracked.push_back(io::parse_count(header[c].substr(6), "tracked column"));
    }
    for (std::size_t k = 1; k < lines.size(); ++k) {
        auto f = io::split_csv_line(lines[k]);
        if (f.size() != header.size())
            throw FormatError("sweep CSV line " + std::to_string(k + 1) + " has " +
                              std::to_string(f.size()) + " fields");
        const auto d = io::parse_count(f[0], "d");
        if (report.rows.empty() || report.rows.back().weight != d) {
            SweepRow row;
            row.weight = d;
            row.weight_pct = io::parse_double(f[1], "d_pct");
            row.seed = io::parse_count(f.back(), "seed");
            report.rows.push_back(row);
        }
        MethodResult r;
        try {
            r.method = parse_method(f[2]);
        } catch (const DomainError &e) {
            throw FormatError(e.what());
        }
        r.best_correctness = io::parse_double(f[3], "best_correctness");
        r.best_index = io::parse_count(f[4], "best_index");
        for (std::size_t c = 5; c + 1 < f.size(); ++c)
            r.tracked.push_back(f[c].empty() ? std::nullopt
                                             : std::optional<double>(
                                                   io::parse_double(f[c], "tracked")));
        report.rows.back().results.push_back(std::move(r));
    }
    return report;
}

// --- plot data --------------------------------------------------------------

enum class PlotFormat { csv, svg_data };

inline PlotFormat parse_plot_format(std::string_view s) {
    if (s == "csv")
        return PlotFormat::csv;
    if (s == "svg-data")
        return PlotFormat::svg_data;
    throw DomainError("unknown format '" + std::string(s) + "'");
}

struct PlotSeries {
    std::string name; ///< e.g. "kmeans_best", "mean_comparison_c41"
    std::vector<std::pair<double, double>> points; ///< (d_pct, correctness)
};

/// Per method: the best-of-m line and one line per tracked candidate.
inline std::vector<PlotSeries> plot_series(const SweepReport &report) {
    std::vector<PlotSeries> series;
    auto find = [&](const std::string &name) -> PlotSeries & {
        for (auto &s : series)
            if (s.name == name)
                return s;
        series.push_back(PlotSeries{name, {}});
        return series.back();
    };
    for (const auto &row : report.rows)
        for (const auto &r : row.results) {
            const std::string m(to_string(r.method));
            find(m + "_best").points.emplace_back(row.weight_pct, r.best_correctness);
            for (std::size_t t = 0; t < r.tracked.size() && t < report.tracked.size(); ++t) {
                auto &s = find(m + "_c" + std::to_string(report.tracked[t]));
                if (r.tracked[t])
                    s.points.emplace_back(row.weight_pct, *r.tracked[t]);
            }
        }
    return series;
}

/// Two columns, x = d_pct and y = correctness, at CSV precision.
inline std::string encode_plot_series(const PlotSeries &s, PlotFormat fmt) {
    std::string out = fmt == PlotFormat::csv ? "x,y\n" : "# " + s.name + ": d_pct correctness\n";
    const char sep = fmt == PlotFormat::csv ? ',' : ' ';
    for (auto [x, y] : s.points)
        out += io::format_number(x) + sep + io::format_number(y) + '\n';
    return out;
}

inline std::string plot_file_name(const PlotSeries &s, PlotFormat fmt) {
    return "plot_" + s.name + (fmt == PlotFormat::csv ? ".csv" : ".dat");
}

/// Writes every plot series into `dir`; returns the paths written.
inline std::vector<std::filesystem::path> write_plot_data(const std::filesystem::path &dir,
                                                          const SweepReport &report,
                                                          PlotFormat fmt) {
    std::vector<std::filesystem::path> written;
    for (const auto &s : plot_series(report)) {
        auto path = dir / plot_file_name(s, fmt);
        io::write_file_atomic(path, encode_plot_series(s, fmt));
        written.push_back(path);
    }
    return written;
}

} // namespace hsca
