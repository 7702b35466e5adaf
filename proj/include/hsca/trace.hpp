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

// Trace data model: design geometry, raw sample grids, and per-clock-cycle
// compressed traces.
//
// Index conventions used throughout hsca: slots are 0-based (j = 0..l-1),
// clock cycles are 1-based when exposed as a `cycle_index` (1..m) and
// 0-based when used as a storage column. Sample offsets are 0-based.

#pragma once

#include "hsca/error.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hsca {

/// Geometry of the attacked design. Defaults describe a 233-bit scalar whose
/// 230 main-loop bits each take 54 clock cycles sampled 300 times.
struct DesignParams {
    std::size_t key_length_total = 233; ///< n
    std::size_t main_loop_bits = 230;   ///< l, number of slots
    std::size_t cycles_per_slot = 54;   ///< m
    std::size_t samples_per_cycle = 300; ///< S
    double clock_period_ns = 30.0;      ///< informational
    double sample_step_ns = 0.1;        ///< informational

    /// Geometry for an n-bit curve: the main loop processes n-2 bits.
    static DesignParams for_curve(std::size_t n) {
        if (n < 3)
            throw DomainError("curve bit length must be at least 3");
        DesignParams p;
        p.key_length_total = n;
        p.main_loop_bits = n - 2;
        return p;
    }

    /// Geometry with explicit counts; n is set to l + 2.
    static DesignParams with_shape(std::size_t l, std::size_t m, std::size_t s = 300) {
        DesignParams p;
        p.main_loop_bits = l;
        p.cycles_per_slot = m;
        p.samples_per_cycle = s;
        p.key_length_total = l + 2;
        p.validate();
        return p;
    }

    std::size_t raw_sample_count() const noexcept {
        return main_loop_bits * cycles_per_slot * samples_per_cycle;
    }

    void validate() const {
        if (main_loop_bits == 0 || cycles_per_slot == 0 || samples_per_cycle == 0)
            throw DomainError("design counts must be strictly positive");
        if (key_length_total < main_loop_bits)
            throw DomainError("main loop cannot process more bits than the key has");
    }

    /// Equality on the counts only; timing fields are informational.
    bool same_shape(const DesignParams &o) const noexcept {
        return main_loop_bits == o.main_loop_bits && cycles_per_slot == o.cycles_per_slot &&
               samples_per_cycle == o.samples_per_cycle;
    }
};

namespace detail {
inline void require_finite(std::span<const double> values, const char *what) {
    for (double v : values)
        if (!std::isfinite(v))
            throw DomainError(std::string(what) + " contains a non-finite value");
}
} // namespace detail

/// Full-resolution trace: l slots x m cycles x S samples, slot-major.
class RawTrace {
  public:
    RawTrace(DesignParams params, std::vector<double> samples)
        : params_(std::move(params)), samples_(std::move(samples)) {
        params_.validate();
        if (samples_.size() != params_.raw_sample_count())
            throw DimensionError("raw trace has " + std::to_string(samples_.size()) +
                                 " samples, geometry requires " +
                                 std::to_string(params_.raw_sample_count()));
        detail::require_finite(samples_, "raw trace");
    }

    const DesignParams &params() const noexcept { return params_; }
    std::span<const double> samples() const noexcept { return samples_; }

    /// Sample `s` (0-based) of storage column `cycle` (0-based) in slot `slot`.
    double operator()(std::size_t slot, std::size_t cycle, std::size_t s) const {
        return samples_[offset(slot, cycle) + s];
    }

    /// The S samples of one clock cycle.
    std::span<const double> cycle_samples(std::size_t slot, std::size_t cycle) const {
        return std::span<const double>(samples_).subspan(offset(slot, cycle),
                                                         params_.samples_per_cycle);
    }

  private:
    std::size_t offset(std::size_t slot, std::size_t cycle) const noexcept {
        return (slot * params_.cycles_per_slot + cycle) * params_.samples_per_cycle;
    }

    DesignParams params_;
    std::vector<double> samples_;
};

/// One summed power value per (slot, cycle): an l x m matrix, slot-major.
class CompressedTrace {
  public:
    CompressedTrace(DesignParams params, std::vector<double> values)
        : params_(std::move(params)), values_(std::move(values)) {
        params_.validate();
        if (values_.size() != slots() * cycles())
            throw DimensionError("compressed trace has " + std::to_string(values_.size()) +
                                 " values, geometry requires " +
                                 std::to_string(slots() * cycles()));
        detail::require_finite(values_, "compressed trace");
    }

    const DesignParams &params() const noexcept { return params_; }
    std::size_t slots() const noexcept { return params_.main_loop_bits; }
    std::size_t cycles() const noexcept { return params_.cycles_per_slot; }
    std::span<const double> values() const noexcept { return values_; }

    /// Value for slot `slot` and storage column `cycle` (0-based).
    double operator()(std::size_t slot, std::size_t cycle) const {
        return values_[slot * cycles() + cycle];
    }

    /// Column for 1-based `cycle_index`, copied out in slot order.
    std::vector<double> column(std::size_t cycle_index) const {
        if (cycle_index == 0 || cycle_index > cycles())
            throw DomainError("cycle index " + std::to_string(cycle_index) + " out of range");
        std::vector<double> out(slots());
        for (std::size_t j = 0; j < slots(); ++j)
            out[j] = (*this)(j, cycle_index - 1);
        return out;
    }

    friend bool operator==(const CompressedTrace &a, const CompressedTrace &b) {
        return a.params_.same_shape(b.params_) && a.values_ == b.values_;
    }

  private:
    DesignParams params_;
    std::vector<double> values_;
};

/// The l values one clock cycle takes across all slots.
struct CycleVector {
    std::size_t cycle_index = 1; ///< 1..m
    std::vector<double> points;  ///< one per slot
};

/// Sums the samples of every clock cycle: x[j][i] = sum_s v[j][i][s].
inline CompressedTrace compress_trace(const RawTrace &raw) {
    const auto &p = raw.params();
    std::vector<double> values(p.main_loop_bits * p.cycles_per_slot);
    for (std::size_t j = 0; j < p.main_loop_bits; ++j)
        for (std::size_t i = 0; i < p.cycles_per_slot; ++i) {
            double sum = 0.0;
            for (double v : raw.cycle_samples(j, i))
                sum += v;
            values[j * p.cycles_per_slot + i] = sum;
        }
    return CompressedTrace(p, std::move(values));
}

/// Splits a compressed trace into its m per-cycle vectors, in cycle order.
inline std::vector<CycleVector> cycle_vectors(const CompressedTrace &ct) {
    std::vector<CycleVector> out;
    out.reserve(ct.cycles());
    for (std::size_t i = 1; i <= ct.cycles(); ++i)
        out.push_back(CycleVector{i, ct.column(i)});
    return out;
}

/// Inverse of cycle_vectors.
inline CompressedTrace reassemble(const DesignParams &params,
                                  std::span<const CycleVector> vectors) {
    params.validate();
    const std::size_t l = params.main_loop_bits, m = params.cycles_per_slot;
    if (vectors.size() != m)
        throw DimensionError("expected " + std::to_string(m) + " cycle vectors");
    std::vector<double> values(l * m);
    std::vector<bool> seen(m, false);
    for (const auto &cv : vectors) {
        if (cv.cycle_index == 0 || cv.cycle_index > m || seen[cv.cycle_index - 1])
            throw DimensionError("cycle vectors must cover indices 1..m exactly once");
        if (cv.points.size() != l)
            throw DimensionError("cycle vector length differs from slot count");
        seen[cv.cycle_index - 1] = true;
        for (std::size_t j = 0; j < l; ++j)
            values[j * m + cv.cycle_index - 1] = cv.points[j];
    }
    return CompressedTrace(params, std::move(values));
}

} // namespace hsca
