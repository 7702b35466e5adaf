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

// Lloyd's algorithm on scalar data with random restarts.

#pragma once

#include "hsca/error.hpp"
#include "hsca/rng.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <vector>

namespace hsca {

struct KMeansOptions {
    std::size_t k = 2;
    std::size_t restarts = 10;
    std::size_t max_iterations = 300;
    /// Converged once no centroid moves by this much or more.
    double tolerance = 1e-12;
};

struct Clustering1D {
    std::vector<std::uint32_t> labels; ///< cluster id per point
    std::vector<double> centroids;     ///< one per cluster
    double inertia = 0.0;              ///< sum of squared distances to own centroid
    std::size_t iterations_used = 0;   ///< of the selected run
    std::size_t restarts_used = 0;
    std::size_t best_restart = 0; ///< 0-based index of the selected run
};

/// Called after every assign+update step with the inertia of the new state.
using KMeansHook =
    std::function<void(std::size_t restart, std::size_t iteration, double inertia)>;

/// Sum of squared distances from each point to the centroid of its label.
inline double clustering_inertia(std::span<const double> points,
                                 std::span<const std::uint32_t> labels,
                                 std::span<const double> centroids) {
    double total = 0.0;
    for (std::size_t p = 0; p < points.size(); ++p) {
        const double d = points[p] - centroids[labels[p]];
        total += d * d;
    }
    return total;
}

namespace detail {

/// Nearest centroid, ties to the lower cluster id.
inline std::uint32_t nearest(double x, std::span<const double> centroids) {
    std::uint32_t best = 0;
    double best_d = std::abs(x - centroids[0]);
    for (std::uint32_t c = 1; c < centroids.size(); ++c) {
        const double d = std::abs(x - centroids[c]);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

/// k centroids taken from the data: points are visited in a random order and
/// the first k distinct values are used. With fewer distinct values the
/// remainder duplicates the first pick.
inline std::vector<double> init_centroids(std::span<const double> points, std::size_t k,
                                          Rng &rng) {
    std::vector<std::size_t> order(points.size());
    for (std::size_t p = 0; p < order.size(); ++p)
        order[p] = p;
    std::vector<double> centroids;
    centroids.reserve(k);
    for (std::size_t n = 0; n < order.size() && centroids.size() < k; ++n) {
        std::uniform_int_distribution<std::size_t> pick(n, order.size() - 1);
        std::swap(order[n], order[pick(rng)]);
        const double v = points[order[n]];
        bool fresh = true;
        for (double c : centroids)
            fresh = fresh && c != v;
        if (fresh)
            centroids.push_back(v);
    }
    while (centroids.size() < k)
        centroids.push_back(centroids.front());
    return centroids;
}

inline Clustering1D lloyd_run(std::span<const double> points, const KMeansOptions &opts,
                              Rng &rng, std::size_t restart, const KMeansHook &hook) {
    const std::size_t n = points.size(), k = opts.k;
    Clustering1D run;
    run.centroids = init_centroids(points, k, rng);
    run.labels.assign(n, 0);

    // Cluster means are accumulated as deviations from the cluster's first
    // point, which keeps the mean of identical values exact.
    std::vector<double> ref(k), dev(k);
    std::vector<std::size_t> counts(k);
    for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
        std::fill(dev.begin(), dev.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t p = 0; p < n; ++p) {
            const auto c = nearest(points[p], run.centroids);
            run.labels[p] = c;
            if (counts[c]++ == 0)
                ref[c] = points[p];
            else
                dev[c] += points[p] - ref[c];
        }
        std::vector<double> next(k);
        for (std::size_t c = 0; c < k; ++c)
            next[c] = counts[c] ? ref[c] + dev[c] / static_cast<double>(counts[c])
                                : run.centroids[c];
        // An empty cluster restarts at the point farthest from its centroid.
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c])
                continue;
            std::size_t far = 0;
            double far_d = -1.0;
            for (std::size_t p = 0; p < n; ++p) {
                const double d = std::abs(points[p] - next[run.labels[p]]);
                if (d > far_d) {
                    far_d = d;
                    far = p;
                }
            }
            next[c] = points[far];
        }
        double moved = 0.0;
        for (std::size_t c = 0; c < k; ++c)
            moved = std::max(moved, std::abs(next[c] - run.centroids[c]));
        run.centroids = std::move(next);
        run.iterations_used = it;
        if (hook)
            hook(restart, it, clustering_inertia(points, run.labels, run.centroids));
        if (moved < opts.tolerance)
            break;
    }
    run.inertia = clustering_inertia(points, run.labels, run.centroids);
    return run;
}

} // namespace detail

/// Clusters scalar points into opts.k groups. Each of opts.restarts runs starts
/// from centroids drawn from the data, alternates nearest-centroid assignment
/// with mean updates, and stops when no centroid moves by opts.tolerance or
/// after opts.max_iterations. The run with the smallest inertia wins, the
/// earliest one on ties.
///
/// Fewer distinct values than k is not an error: the result then carries
/// duplicate centroids and some clusters stay empty.
inline Clustering1D kmeans_1d(std::span<const double> points, Seed seed,
                              const KMeansOptions &opts = {}, const KMeansHook &hook = {}) {
    if (points.empty())
        throw DomainError("k-means needs at least one point");
    if (opts.k == 0 || opts.restarts == 0 || opts.max_iterations == 0)
        throw DomainError("k, restarts and max_iterations must be positive");
    for (double v : points)
        if (!std::isfinite(v))
            throw DomainError("k-means input contains a non-finite value");

    auto rng = make_rng(seed);
    Clustering1D best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < opts.restarts; ++r) {
        auto run = detail::lloyd_run(points, opts, rng, r, hook);
        if (run.inertia < best.inertia) {
            best = std::move(run);
            best.best_restart = r;
        }
    }
    best.restarts_used = opts.restarts;
    return best;
}

} // namespace hsca
