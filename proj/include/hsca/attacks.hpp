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

// The two horizontal attacks. Both turn one compressed trace into m key
// candidates, one per clock-cycle index.

#pragma once

#include "hsca/io.hpp"
#include "hsca/kmeans.hpp"
#include "hsca/synth.hpp"
#include "hsca/trace.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hsca {

enum class Method { mean_comparison, kmeans };

inline std::string_view to_string(Method m) {
    return m == Method::kmeans ? "kmeans" : "mean_comparison";
}

inline Method parse_method(std::string_view s) {
    if (s == "kmeans")
        return Method::kmeans;
    if (s == "mean_comparison" || s == "mean")
        return Method::mean_comparison;
    throw DomainError("unknown method '" + std::string(s) + "'");
}

/// Clustering details kept with a k-means candidate.
struct ClusterInfo {
    double centroid_lo = 0.0;
    double centroid_hi = 0.0;
    double inertia = 0.0;
    std::size_t restarts = 0;
    std::size_t iterations = 0;
};

struct KeyCandidate {
    std::size_t cycle_index = 1; ///< 1..m
    Bits bits;                   ///< one guess per slot
    Method method = Method::mean_comparison;
    std::optional<ClusterInfo> cluster;
};

struct CandidateSet {
    Method method = Method::mean_comparison;
    std::vector<KeyCandidate> candidates; ///< ordered by cycle_index

    /// Candidate for a 1-based cycle index.
    const KeyCandidate &at(std::size_t cycle_index) const {
        if (cycle_index == 0 || cycle_index > candidates.size())
            throw DomainError("no candidate for cycle " + std::to_string(cycle_index));
        return candidates[cycle_index - 1];
    }
    std::size_t size() const noexcept { return candidates.size(); }
};

/// Average over all slots of each cycle's value. Deviations are summed
/// relative to slot 0 so that a constant column has exactly its value as mean.
inline std::vector<double> mean_profile(const CompressedTrace &ct) {
    std::vector<double> dev(ct.cycles(), 0.0);
    for (std::size_t j = 1; j < ct.slots(); ++j)
        for (std::size_t i = 0; i < ct.cycles(); ++i)
            dev[i] += ct(j, i) - ct(0, i);
    std::vector<double> mean(ct.cycles());
    for (std::size_t i = 0; i < ct.cycles(); ++i)
        mean[i] = ct(0, i) + dev[i] / static_cast<double>(ct.slots());
    return mean;
}

/// Bit j of candidate i is 1 iff x[j][i] >= mean of cycle i.
inline CandidateSet comparison_to_mean(const CompressedTrace &ct) {
    const auto mean = mean_profile(ct);
    CandidateSet set{Method::mean_comparison, {}};
    set.candidates.reserve(ct.cycles());
    for (std::size_t i = 0; i < ct.cycles(); ++i) {
        KeyCandidate c{i + 1, Bits(ct.slots()), Method::mean_comparison, std::nullopt};
        for (std::size_t j = 0; j < ct.slots(); ++j)
            c.bits[j] = ct(j, i) >= mean[i];
        set.candidates.push_back(std::move(c));
    }
    return set;
}

/// Seed used for the clustering of one cycle.
inline Seed cycle_seed(Seed seed, std::size_t cycle_index) {
    return derive_seed(seed, cycle_index);
}

/// Bits from a 2-clustering: the cluster with the larger centroid is 1. With
/// equal centroids cluster 0 is the 1-cluster.
inline Bits bits_from_clustering(const Clustering1D &cl) {
    const std::uint32_t one = cl.centroids[1] > cl.centroids[0] ? 1 : 0;
    Bits bits(cl.labels.size());
    for (std::size_t j = 0; j < bits.size(); ++j)
        bits[j] = cl.labels[j] == one;
    return bits;
}

/// Clusters every cycle vector into two groups (10 restarts, up to 300
/// iterations) and reads the high-power group as key bits 1.
inline CandidateSet kmeans_attack(const CompressedTrace &ct, Seed seed,
                                  const KMeansOptions &opts = {}) {
    if (opts.k != 2)
        throw DomainError("the k-means attack separates exactly two clusters");
    CandidateSet set{Method::kmeans, {}};
    set.candidates.reserve(ct.cycles());
    for (auto &cv : cycle_vectors(ct)) {
        auto cl = kmeans_1d(cv.points, cycle_seed(seed, cv.cycle_index), opts);
        ClusterInfo info{std::min(cl.centroids[0], cl.centroids[1]),
                         std::max(cl.centroids[0], cl.centroids[1]), cl.inertia,
                         cl.restarts_used, cl.iterations_used};
        set.candidates.push_back(
            KeyCandidate{cv.cycle_index, bits_from_clustering(cl), Method::kmeans, info});
    }
    return set;
}

inline CandidateSet run_attack(Method method, const CompressedTrace &ct, Seed seed) {
    return method == Method::kmeans ? kmeans_attack(ct, seed) : comparison_to_mean(ct);
}

// Candidate set CSV:
//   cycle_index,method,bits,centroid_lo,centroid_hi,inertia
// The last three columns are empty for mean_comparison candidates.

inline std::string encode_candidates_csv(const CandidateSet &set) {
    std::string out = "cycle_index,method,bits,centroid_lo,centroid_hi,inertia\n";
    for (const auto &c : set.candidates) {
        out += std::to_string(c.cycle_index);
        out += ',';
        out += to_string(c.method);
        out += ',';
        out += bits_to_string(c.bits);
        if (c.cluster) {
            out += ',' + io::format_number(c.cluster->centroid_lo);
            out += ',' + io::format_number(c.cluster->centroid_hi);
            out += ',' + io::format_number(c.cluster->inertia);
        } else {
            out += ",,,";
        }
        out += '\n';
    }
    return out;
}

inline CandidateSet decode_candidates_csv(const std::string &text) {
    auto lines = io::split_lines(text);
    if (lines.empty() || lines.front() != "cycle_index,method,bits,centroid_lo,centroid_hi,inertia")
        throw FormatError("candidate CSV has an unexpected header");
    CandidateSet set;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        auto f = io::split_csv_line(lines[k]);
        if (f.size() != 6)
            throw FormatError("candidate CSV line " + std::to_string(k + 1) +
                              " does not have 6 fields");
        KeyCandidate c;
        c.cycle_index = io::parse_count(f[0], "cycle_index");
        try {
            c.method = parse_method(f[1]);
            c.bits = bits_from_string(f[2]);
        } catch (const DomainError &e) {
            throw FormatError(e.what());
        }
        if (!f[3].empty() || !f[4].empty() || !f[5].empty())
            c.cluster = ClusterInfo{io::parse_double(f[3], "centroid_lo"),
                                    io::parse_double(f[4], "centroid_hi"),
                                    io::parse_double(f[5], "inertia"), 0, 0};
        if (c.cycle_index != k)
            throw FormatError("candidate CSV rows must be ordered by cycle index from 1");
        if (k > 1 && (c.method != set.method || c.bits.size() != set.candidates[0].bits.size()))
            throw FormatError("candidate CSV mixes methods or bit lengths");
        set.method = c.method;
        set.candidates.push_back(std::move(c));
    }
    return set;
}

inline void write_candidates_csv(const std::filesystem::path &path, const CandidateSet &set) {
    io::write_file_atomic(path, encode_candidates_csv(set));
}

} // namespace hsca
