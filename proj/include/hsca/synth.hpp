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

// Synthetic stand-in for simulated power traces: scalar keys of prescribed
// hamming weight and a per-clock-cycle additive leakage model
//
//   x[j][i] = base[i] + strength[i] * k[j] + noise,  noise ~ N(0, sigma[i])
//
// applied directly to compressed values. Raw traces spread each compressed
// value over the S samples of its cycle with zero-sum jitter.

#pragma once

#include "hsca/error.hpp"
#include "hsca/rng.hpp"
#include "hsca/trace.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace hsca {

/// A bit sequence holding 0/1 values, MSB first.
using Bits = std::vector<std::uint8_t>;

inline Bits complement(const Bits &bits) {
    Bits out(bits.size());
    std::transform(bits.begin(), bits.end(), out.begin(),
                   [](std::uint8_t b) -> std::uint8_t { return b ? 0 : 1; });
    return out;
}

inline std::string bits_to_string(const Bits &bits) {
    std::string s(bits.size(), '0');
    for (std::size_t j = 0; j < bits.size(); ++j)
        if (bits[j])
            s[j] = '1';
    return s;
}

inline Bits bits_from_string(std::string_view s) {
    Bits out(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (s[j] != '0' && s[j] != '1')
            throw DomainError("bit string may only contain '0' and '1'");
        out[j] = s[j] == '1';
    }
    return out;
}

/// Main-loop portion of the scalar.
class ScalarKey {
  public:
    explicit ScalarKey(Bits bits) : bits_(std::move(bits)) {
        for (auto b : bits_)
            if (b > 1)
                throw DomainError("key bits must be 0 or 1");
        weight_ = static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
    }

    const Bits &bits() const noexcept { return bits_; }
    std::size_t size() const noexcept { return bits_.size(); }
    std::size_t hamming_weight() const noexcept { return weight_; }
    std::uint8_t operator[](std::size_t j) const { return bits_[j]; }

    /// Parses '0'/'1' text, or "0x" hex left-padded to `length` bits.
    static ScalarKey parse(std::string_view text, std::optional<std::size_t> length = {}) {
        while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
            text.remove_suffix(1);
        while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
            text.remove_prefix(1);
        if (text.starts_with("0x") || text.starts_with("0X"))
            return ScalarKey(hex_bits(text.substr(2), length));
        ScalarKey key(bits_from_string(text));
        if (length && key.size() != *length)
            throw DimensionError("key has " + std::to_string(key.size()) + " bits, expected " +
                                 std::to_string(*length));
        return key;
    }

    std::string to_string() const { return bits_to_string(bits_); }

    friend bool operator==(const ScalarKey &, const ScalarKey &) = default;

  private:
    static Bits hex_bits(std::string_view hex, std::optional<std::size_t> length) {
        if (hex.empty())
            throw DomainError("empty hex key");
        Bits all;
        for (char c : hex) {
            int v;
            if (c >= '0' && c <= '9')
                v = c - '0';
            else if (c >= 'a' && c <= 'f')
                v = c - 'a' + 10;
            else if (c >= 'A' && c <= 'F')
                v = c - 'A' + 10;
            else
                throw DomainError(std::string("invalid hex digit '") + c + "'");
            for (int b = 3; b >= 0; --b)
                all.push_back(static_cast<std::uint8_t>((v >> b) & 1));
        }
        const std::size_t want = length.value_or(all.size());
        if (all.size() > want) {
            auto excess = all.size() - want;
            if (std::any_of(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(excess),
                            [](auto b) { return b != 0; }))
                throw DimensionError("hex key has more than " + std::to_string(want) +
                                     " significant bits");
            all.erase(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(excess));
        } else {
            all.insert(all.begin(), want - all.size(), 0);
        }
        return all;
    }

    Bits bits_;
    std::size_t weight_ = 0;
};

/// Key of `length` bits with exactly `hw` ones at uniformly drawn positions.
inline ScalarKey gen_key(std::size_t hw, std::size_t length, Seed seed) {
    if (hw > length)
        throw DomainError("hamming weight " + std::to_string(hw) + " exceeds key length " +
                          std::to_string(length));
    std::vector<std::size_t> pos(length);
    std::iota(pos.begin(), pos.end(), std::size_t{0});
    auto rng = make_rng(seed);
    // Partial Fisher-Yates: the first hw entries become a uniform sample.
    for (std::size_t k = 0; k < hw; ++k) {
        std::uniform_int_distribution<std::size_t> pick(k, length - 1);
        std::swap(pos[k], pos[pick(rng)]);
    }
    Bits bits(length, 0);
    for (std::size_t k = 0; k < hw; ++k)
        bits[pos[k]] = 1;
    return ScalarKey(std::move(bits));
}

/// The 27 hamming weights of the reference experiment, l = 230.
inline std::vector<std::size_t> table1_weights() {
    return {0,   4,   9,   13,  18,  23,  27,  32,  36,  41,  46,  69,  92, 115,
            138, 161, 184, 188, 193, 197, 202, 207, 211, 216, 220, 225, 230};
}

/// Per-cycle leakage parameters; all vectors have one entry per clock cycle.
struct LeakageModel {
    std::vector<double> base_level;    ///< baseline compressed power
    std::vector<double> leak_strength; ///< shift added when the bit is 1
    std::vector<double> noise_sigma;   ///< Gaussian std on the compressed value
    Seed seed = 0;                     ///< seed the model was generated from

    std::size_t cycles() const noexcept { return base_level.size(); }

    void validate(std::optional<std::size_t> m = {}) const {
        const auto n = base_level.size();
        if (leak_strength.size() != n || noise_sigma.size() != n)
            throw DimensionError("leakage model vectors differ in length");
        if (m && n != *m)
            throw DimensionError("leakage model covers " + std::to_string(n) +
                                 " cycles, design has " + std::to_string(*m));
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(base_level[i]) || !std::isfinite(leak_strength[i]) ||
                !std::isfinite(noise_sigma[i]))
                throw DomainError("leakage model contains a non-finite value");
            if (noise_sigma[i] < 0.0)
                throw DomainError("noise sigma must be non-negative");
        }
    }

    std::size_t leaking_cycles() const {
        return static_cast<std::size_t>(std::count_if(
            leak_strength.begin(), leak_strength.end(), [](double a) { return a != 0.0; }));
    }

    friend bool operator==(const LeakageModel &, const LeakageModel &) = default;
};

enum class SnrProfile { strong, moderate, weak };

inline std::string_view to_string(SnrProfile p) {
    switch (p) {
    case SnrProfile::strong:
        return "strong";
    case SnrProfile::moderate:
        return "moderate";
    case SnrProfile::weak:
        return "weak";
    }
    return "moderate";
}

inline SnrProfile parse_profile(std::string_view s) {
    if (s == "strong")
        return SnrProfile::strong;
    if (s == "moderate")
        return SnrProfile::moderate;
    if (s == "weak")
        return SnrProfile::weak;
    throw DomainError("unknown profile '" + std::string(s) + "'");
}

namespace default_model_layout {
// sigma/alpha for the `moderate` profile; `strong` halves and `weak` doubles.
inline constexpr double near_perfect_ratio = 0.1;
inline constexpr double good_ratio = 0.3;
inline constexpr double poor_ratio = 0.8;
inline constexpr double leak_strength = 1.0;
inline constexpr double idle_sigma = 0.5; // noise of non-leaking cycles
inline constexpr double base_min = 40.0, base_max = 60.0;
// Leaking cycle indices used when m = 54, best first.
inline constexpr std::array<std::size_t, 1> near_perfect{41};
inline constexpr std::array<std::size_t, 5> good{14, 24, 39, 49, 28};
inline constexpr std::array<std::size_t, 6> poor{22, 53, 6, 17, 33, 46};
} // namespace default_model_layout

/// Model where one cycle leaks almost perfectly, five leak well, six leak
/// poorly and the rest carry only noise. For m = 54 the leaking cycles sit at
/// fixed indices (41 is the near-perfect one); otherwise they are drawn from
/// the seed. Base levels are always drawn from the seed.
inline LeakageModel default_model(const DesignParams &params, SnrProfile profile, Seed seed) {
    namespace L = default_model_layout;
    params.validate();
    const std::size_t m = params.cycles_per_slot;
    const double scale = profile == SnrProfile::strong ? 0.5
                         : profile == SnrProfile::weak ? 2.0
                                                       : 1.0;
    LeakageModel model;
    model.seed = seed;
    model.base_level.resize(m);
    model.leak_strength.assign(m, 0.0);
    model.noise_sigma.assign(m, L::idle_sigma * scale);

    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> base(L::base_min, L::base_max);
    for (auto &b : model.base_level)
        b = base(rng);

    std::vector<std::size_t> order; // 1-based cycle indices, best leak first
    if (m == 54) {
        order.insert(order.end(), L::near_perfect.begin(), L::near_perfect.end());
        order.insert(order.end(), L::good.begin(), L::good.end());
        order.insert(order.end(), L::poor.begin(), L::poor.end());
    } else {
        order.resize(m);
        std::iota(order.begin(), order.end(), std::size_t{1});
        for (std::size_t k = 0; k + 1 < m; ++k) {
            std::uniform_int_distribution<std::size_t> pick(k, m - 1);
            std::swap(order[k], order[pick(rng)]);
        }
        order.resize(std::min<std::size_t>(m, 12));
    }
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        const double ratio = rank < 1 ? L::near_perfect_ratio
                             : rank < 6 ? L::good_ratio
                                        : L::poor_ratio;
        const auto i = order[rank] - 1;
        model.leak_strength[i] = L::leak_strength;
        model.noise_sigma[i] = ratio * L::leak_strength * scale;
    }
    return model;
}

namespace detail {
inline void check_synth_inputs(const ScalarKey &key, const LeakageModel &model,
                               const DesignParams &params) {
    params.validate();
    model.validate(params.cycles_per_slot);
    if (key.size() != params.main_loop_bits)
        throw DimensionError("key has " + std::to_string(key.size()) + " bits, design has " +
                             std::to_string(params.main_loop_bits) + " slots");
}
} // namespace detail

/// Compressed trace drawn from the leakage model. One standard normal is
/// consumed per (slot, cycle) in slot-major order, even where sigma is 0.
inline CompressedTrace gen_compressed_trace(const ScalarKey &key, const LeakageModel &model,
                                            Seed seed, const DesignParams &params) {
    detail::check_synth_inputs(key, model, params);
    const std::size_t l = params.main_loop_bits, m = params.cycles_per_slot;
    auto rng = make_rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> values(l * m);
    for (std::size_t j = 0; j < l; ++j)
        for (std::size_t i = 0; i < m; ++i) {
            const double z = noise(rng);
            values[j * m + i] =
                model.base_level[i] + model.leak_strength[i] * key[j] + model.noise_sigma[i] * z;
        }
    return CompressedTrace(params, std::move(values));
}

/// Overload taking l and m from the key and model (S defaults to 300).
inline CompressedTrace gen_compressed_trace(const ScalarKey &key, const LeakageModel &model,
                                            Seed seed) {
    return gen_compressed_trace(key, model, seed,
                                DesignParams::with_shape(key.size(), model.cycles()));
}

struct RawOptions {
    /// Std of the per-sample jitter before it is re-centred to sum to zero.
    double jitter_sigma = 0.01;
};

/// Raw trace whose per-cycle sums reproduce gen_compressed_trace for the
/// same seed: each sample is target/S plus zero-sum jitter.
inline RawTrace gen_raw_trace(const ScalarKey &key, const LeakageModel &model, Seed seed,
                              const DesignParams &params, RawOptions opts = {}) {
    if (!(opts.jitter_sigma >= 0.0))
        throw DomainError("jitter sigma must be non-negative");
    const auto target = gen_compressed_trace(key, model, seed, params);
    const std::size_t l = params.main_loop_bits, m = params.cycles_per_slot,
                      s = params.samples_per_cycle;
    auto rng = make_rng(derive_seed(seed, stream::jitter));
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> samples(l * m * s);
    std::vector<double> jitter(s);
    for (std::size_t j = 0; j < l; ++j)
        for (std::size_t i = 0; i < m; ++i) {
            double mean = 0.0;
            for (auto &z : jitter) {
                z = opts.jitter_sigma * noise(rng);
                mean += z;
            }
            mean /= static_cast<double>(s);
            const double level = target(j, i) / static_cast<double>(s);
            double *out = samples.data() + (j * m + i) * s;
            for (std::size_t k = 0; k < s; ++k)
                out[k] = level + (jitter[k] - mean);
        }
    return RawTrace(params, std::move(samples));
}

} // namespace hsca
