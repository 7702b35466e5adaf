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

#include "hsca/kmeans.hpp"

#include "oracles.hpp"

#include "gtest/gtest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace hsca;

namespace {

/// Points from two Gaussians whose means are `sep` standard deviations apart.
std::vector<double> mixture(std::mt19937_64 &rng, std::size_t n, double sep) {
    std::normal_distribution<double> z(0.0, 1.0);
    std::bernoulli_distribution pick(0.5);
    std::vector<double> pts(n);
    for (auto &p : pts)
        p = (pick(rng) ? sep : 0.0) + z(rng);
    return pts;
}

std::vector<double> means_of(const std::vector<double> &pts, const Clustering1D &cl) {
    std::vector<double> sum(cl.centroids.size(), 0.0), cnt(cl.centroids.size(), 0.0);
    for (std::size_t p = 0; p < pts.size(); ++p) {
        sum[cl.labels[p]] += pts[p];
        cnt[cl.labels[p]] += 1.0;
    }
    for (std::size_t c = 0; c < sum.size(); ++c)
        sum[c] = cnt[c] > 0 ? sum[c] / cnt[c] : std::nan("");
    return sum;
}

} // namespace

TEST(KMeans1D, separatedPairs) {
    const std::vector<double> pts{0.0, 0.1, 9.9, 10.0};
    // oracle: every one of the 16 subset splits
    const double optimum = oracle::min_inertia_exhaustive(pts);
    EXPECT_NEAR(optimum, 0.01, 1e-12);

    auto cl = kmeans_1d(pts, 1);
    EXPECT_NEAR(cl.inertia, optimum, 1e-12);
    EXPECT_EQ(cl.labels[0], cl.labels[1]);
    EXPECT_EQ(cl.labels[2], cl.labels[3]);
    EXPECT_NE(cl.labels[0], cl.labels[2]);
    auto lo = std::min(cl.centroids[0], cl.centroids[1]);
    auto hi = std::max(cl.centroids[0], cl.centroids[1]);
    EXPECT_NEAR(lo, 0.05, 1e-12);
    EXPECT_NEAR(hi, 9.95, 1e-12);
    EXPECT_EQ(cl.restarts_used, 10u);
}

TEST(KMeans1D, identicalPoints) {
    auto cl = kmeans_1d(std::vector<double>(30, 4.25), 2);
    ASSERT_EQ(cl.centroids.size(), 2u);
    EXPECT_EQ(cl.centroids[0], 4.25);
    EXPECT_EQ(cl.centroids[1], 4.25);
    EXPECT_EQ(cl.inertia, 0.0);
    for (auto l : cl.labels)
        EXPECT_EQ(l, 0u);
}

TEST(KMeans1D, singlePoint) {
    auto cl = kmeans_1d(std::vector<double>{-1.5}, 0);
    EXPECT_EQ(cl.centroids, (std::vector<double>{-1.5, -1.5}));
    EXPECT_EQ(cl.inertia, 0.0);
    EXPECT_EQ(cl.labels.size(), 1u);
}

TEST(KMeans1D, twoDistinctValuesManyCopies) {
    std::vector<double> pts(20, 1.0);
    pts[7] = 3.0;
    auto cl = kmeans_1d(pts, 4);
    EXPECT_EQ(cl.inertia, 0.0);
    EXPECT_NE(cl.labels[7], cl.labels[0]);
}

TEST(KMeans1D, rejectsBadInput) {
    EXPECT_THROW(kmeans_1d(std::vector<double>{}, 0), DomainError);
    EXPECT_THROW(kmeans_1d(std::vector<double>{1.0, std::nan("")}, 0), DomainError);
    KMeansOptions zero_restarts;
    zero_restarts.restarts = 0;
    EXPECT_THROW(kmeans_1d(std::vector<double>{1.0}, 0, zero_restarts), DomainError);
    KMeansOptions zero_k;
    zero_k.k = 0;
    EXPECT_THROW(kmeans_1d(std::vector<double>{1.0}, 0, zero_k), DomainError);
}

TEST(KMeans1D, deterministicPerSeed) {
    std::mt19937_64 rng(2);
    auto pts = mixture(rng, 230, 1.0);
    auto a = kmeans_1d(pts, 77), b = kmeans_1d(pts, 77);
    EXPECT_EQ(a.labels, b.labels);
    EXPECT_EQ(a.centroids, b.centroids);
    EXPECT_EQ(a.inertia, b.inertia);
    EXPECT_EQ(a.iterations_used, b.iterations_used);
}

TEST(KMeans1D, inertiaAndCentroidsAreConsistent) {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<std::size_t> size(1, 60);
    std::uniform_real_distribution<double> sep(0.0, 6.0);
    for (int trial = 0; trial < 300; ++trial) {
        auto pts = mixture(rng, size(rng), sep(rng));
        auto cl = kmeans_1d(pts, rng());
        ASSERT_EQ(cl.labels.size(), pts.size());
        double direct = 0.0;
        for (std::size_t p = 0; p < pts.size(); ++p)
            direct += std::pow(pts[p] - cl.centroids[cl.labels[p]], 2);
        EXPECT_NEAR(cl.inertia, direct, 1e-9 * std::max(1.0, direct));
        auto means = means_of(pts, cl);
        for (std::size_t c = 0; c < 2; ++c) {
            if (!std::isnan(means[c])) {
                EXPECT_NEAR(cl.centroids[c], means[c], 1e-9 * std::max(1.0, std::abs(means[c])));
            }
        }
    }
}

TEST(KMeans1D, inertiaNeverIncreasesWithinARun) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 100; ++trial) {
        auto pts = mixture(rng, 230, 0.5 + trial * 0.05);
        std::vector<std::vector<double>> trace(10);
        kmeans_1d(pts, rng(), {}, [&](std::size_t r, std::size_t, double inertia) {
            trace[r].push_back(inertia);
        });
        for (const auto &run : trace) {
            ASSERT_FALSE(run.empty());
            for (std::size_t k = 1; k < run.size(); ++k)
                EXPECT_LE(run[k], run[k - 1] * (1 + 1e-12) + 1e-12);
        }
    }
}

TEST(KMeans1D, stopsAtIterationCap) {
    std::mt19937_64 rng(10);
    auto pts = mixture(rng, 200, 0.2);
    KMeansOptions opts;
    opts.max_iterations = 1;
    opts.restarts = 3;
    auto cl = kmeans_1d(pts, 1, opts);
    EXPECT_EQ(cl.iterations_used, 1u);
    EXPECT_EQ(cl.restarts_used, 3u);
}

TEST(KMeans1D, thresholdPartitionProperty) {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<std::size_t> size(1, 80);
    std::uniform_real_distribution<double> sep(0.0, 8.0);
    std::uniform_int_distribution<int> dup(0, 3);
    for (int trial = 0; trial < 1000; ++trial) {
        auto pts = mixture(rng, size(rng), sep(rng));
        // sprinkle exact duplicates
        for (std::size_t p = 1; p < pts.size(); ++p)
            if (dup(rng) == 0)
                pts[p] = pts[p - 1];
        auto cl = kmeans_1d(pts, rng());
        ASSERT_TRUE(oracle::is_threshold_partition(pts, cl.labels)) << "trial " << trial;
    }
}

TEST(KMeans1D, matchesBruteForceOptimum) {
    std::mt19937_64 rng(14);
    int agree = 0;
    for (int trial = 0; trial < 100; ++trial) {
        auto pts = mixture(rng, 12, 4.0);
        const double best = oracle::min_inertia_exhaustive(pts);
        ASSERT_NEAR(best, oracle::min_inertia_threshold(pts), 1e-9);
        auto cl = kmeans_1d(pts, rng());
        agree += std::abs(cl.inertia - best) <= 1e-9 * std::max(1.0, best);
    }
    EXPECT_GE(agree, 95);
}

TEST(KMeans1D, moreThanTwoClusters) {
    std::vector<double> pts{0.0, 0.2, 5.0, 5.2, 10.0, 10.2};
    KMeansOptions opts;
    opts.k = 3;
    auto cl = kmeans_1d(pts, 3, opts);
    EXPECT_NEAR(cl.inertia, 3 * 2 * 0.01, 1e-12);
}

TEST(KMeans1D, increasingAffineMapKeepsPartition) {
    std::mt19937_64 rng(16);
    std::uniform_real_distribution<double> scale(0.01, 100.0), shift(-1e3, 1e3);
    for (int trial = 0; trial < 200; ++trial) {
        auto pts = mixture(rng, 230, 3.0);
        const Seed seed = rng();
        const double a = scale(rng), b = shift(rng);
        std::vector<double> moved(pts.size());
        for (std::size_t p = 0; p < pts.size(); ++p)
            moved[p] = a * pts[p] + b;
        auto c1 = kmeans_1d(pts, seed), c2 = kmeans_1d(moved, seed);
        // same unordered pair of index sets
        bool same = true, flipped = true;
        for (std::size_t p = 0; p < pts.size(); ++p) {
            same = same && c1.labels[p] == c2.labels[p];
            flipped = flipped && c1.labels[p] != c2.labels[p];
        }
        EXPECT_TRUE(same || flipped) << "trial " << trial;
    }
}
