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

// Seed handling. Every random draw in hsca comes from a std::mt19937_64
// seeded from a 64-bit value; child seeds are derived by hashing so that
// independent streams (per cycle, per sweep row) never share state.

#pragma once

#include <cstdint>
#include <random>

namespace hsca {

using Seed = std::uint64_t;
using Rng = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stable child seed for (parent, tag). Not commutative in its arguments.
constexpr Seed derive_seed(Seed parent, std::uint64_t tag) noexcept {
    return mix64(mix64(parent) ^ (tag * 0xd6e8feb86659fd93ULL + 0x632be59bd9b4e019ULL));
}

/// Tags used to split one seed into the streams of a single run.
namespace stream {
inline constexpr std::uint64_t key = 0x6b6579;      // "key"
inline constexpr std::uint64_t trace = 0x7472616365; // "trace"
inline constexpr std::uint64_t attack = 0x61747461636b;
inline constexpr std::uint64_t jitter = 0x6a6974746572;
inline constexpr std::uint64_t weight = 0x776569676874;
} // namespace stream

inline Rng make_rng(Seed seed) { return Rng{seed}; }

} // namespace hsca
