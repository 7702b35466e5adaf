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

// On-disk trace formats.
//
// Raw binary ("HSCA"), all integers and floats little-endian:
//
//   offset  size  field
//   0       4     magic "HSCA"
//   4       2     format version (u16, currently 1)
//   6       4     l, slots (u32)
//   10      4     m, cycles per slot (u32)
//   14      4     S, samples per cycle (u32)
//   18      8*N   N = l*m*S IEEE-754 binary64 samples, slot-major then
//                 cycle then sample
//
// Compressed CSV: header "slot,cycle,value", one row per (slot, cycle) with
// 0-based slot and 1-based cycle.

#pragma once

#include "hsca/io.hpp"
#include "hsca/trace.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <limits>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace hsca {

inline constexpr char hsca_magic[4] = {'H', 'S', 'C', 'A'};
inline constexpr std::uint16_t hsca_format_version = 1;
inline constexpr std::size_t hsca_header_size = 18;

namespace detail {
template <typename U> void put_le(std::string &out, U bits) {
    static_assert(std::is_unsigned_v<U>);
    for (std::size_t b = 0; b < sizeof(U); ++b)
        out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
}

template <typename U> U get_le(std::string_view in, std::size_t at) {
    U v = 0;
    for (std::size_t b = 0; b < sizeof(U); ++b)
        v |= static_cast<U>(static_cast<unsigned char>(in[at + b])) << (8 * b);
    return v;
}
} // namespace detail

inline std::string encode_raw_trace(const RawTrace &raw) {
    const auto &p = raw.params();
    constexpr auto u32max = std::numeric_limits<std::uint32_t>::max();
    if (p.main_loop_bits > u32max || p.cycles_per_slot > u32max || p.samples_per_cycle > u32max)
        throw DomainError("trace geometry does not fit the HSCA header");
    std::string out;
    out.reserve(hsca_header_size + 8 * raw.samples().size());
    out.append(hsca_magic, 4);
    detail::put_le<std::uint16_t>(out, hsca_format_version);
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(p.main_loop_bits));
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(p.cycles_per_slot));
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(p.samples_per_cycle));
    for (double v : raw.samples())
        detail::put_le(out, std::bit_cast<std::uint64_t>(v));
    return out;
}

inline bool has_hsca_magic(std::string_view bytes) {
    return bytes.size() >= 4 && std::memcmp(bytes.data(), hsca_magic, 4) == 0;
}

inline RawTrace decode_raw_trace(std::string_view bytes) {
    if (bytes.size() < hsca_header_size || !has_hsca_magic(bytes))
        throw FormatError("not an HSCA trace (bad magic)");
    auto version = detail::get_le<std::uint16_t>(bytes, 4);
    if (version != hsca_format_version)
        throw FormatError("unsupported HSCA version " + std::to_string(version));
    std::size_t l = detail::get_le<std::uint32_t>(bytes, 6);
    std::size_t m = detail::get_le<std::uint32_t>(bytes, 10);
    std::size_t s = detail::get_le<std::uint32_t>(bytes, 14);
    if (l == 0 || m == 0 || s == 0)
        throw FormatError("HSCA header declares an empty dimension");
    const std::size_t n = l * m * s;
    if (n / s / m != l || bytes.size() != hsca_header_size + 8 * n)
        throw FormatError("HSCA payload size does not match declared shape " + std::to_string(l) +
                          "x" + std::to_string(m) + "x" + std::to_string(s));
    std::vector<double> samples(n);
    for (std::size_t k = 0; k < n; ++k)
        samples[k] = std::bit_cast<double>(
            detail::get_le<std::uint64_t>(bytes, hsca_header_size + 8 * k));
    try {
        return RawTrace(DesignParams::with_shape(l, m, s), std::move(samples));
    } catch (const DomainError &e) {
        throw FormatError(std::string("HSCA payload rejected: ") + e.what());
    }
}

inline void write_raw_trace(const std::filesystem::path &path, const RawTrace &raw) {
    io::write_file_atomic(path, encode_raw_trace(raw));
}

inline RawTrace read_raw_trace(const std::filesystem::path &path) {
    return decode_raw_trace(io::read_file(path));
}

inline std::string encode_compressed_csv(const CompressedTrace &ct) {
    std::string out = "slot,cycle,value\n";
    for (std::size_t j = 0; j < ct.slots(); ++j)
        for (std::size_t i = 0; i < ct.cycles(); ++i) {
            out += std::to_string(j);
            out += ',';
            out += std::to_string(i + 1);
            out += ',';
            out += io::format_number(ct(j, i));
            out += '\n';
        }
    return out;
}

/// Parses the compressed CSV; the shape is inferred from the largest slot and
/// cycle index and every (slot, cycle) pair must appear exactly once.
inline CompressedTrace decode_compressed_csv(const std::string &text) {
    auto lines = io::split_lines(text);
    if (lines.empty() || lines.front() != "slot,cycle,value")
        throw FormatError("compressed trace CSV must start with header slot,cycle,value");
    struct Row {
        std::size_t slot, cycle;
        double value;
    };
    std::vector<Row> rows;
    rows.reserve(lines.size() - 1);
    std::size_t l = 0, m = 0;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        auto f = io::split_csv_line(lines[k]);
        if (f.size() != 3)
            throw FormatError("compressed trace CSV line " + std::to_string(k + 1) +
                              " does not have 3 fields");
        Row r{io::parse_count(f[0], "slot"), io::parse_count(f[1], "cycle"),
              io::parse_double(f[2], "value")};
        if (r.cycle == 0)
            throw FormatError("cycle indices are 1-based");
        l = std::max(l, r.slot + 1);
        m = std::max(m, r.cycle);
        rows.push_back(r);
    }
    if (rows.empty() || rows.size() != l * m)
        throw FormatError("compressed trace CSV does not cover a full slot x cycle grid");
    std::vector<double> values(l * m);
    std::vector<bool> seen(l * m, false);
    for (const auto &r : rows) {
        auto at = r.slot * m + r.cycle - 1;
        if (seen[at])
            throw FormatError("duplicate (slot, cycle) in compressed trace CSV");
        seen[at] = true;
        values[at] = r.value;
    }
    try {
        return CompressedTrace(DesignParams::with_shape(l, m), std::move(values));
    } catch (const DomainError &e) {
        throw FormatError(std::string("compressed trace rejected: ") + e.what());
    }
}

inline void write_compressed_csv(const std::filesystem::path &path, const CompressedTrace &ct) {
    io::write_file_atomic(path, encode_compressed_csv(ct));
}

/// Loads either format: HSCA binaries are compressed on load.
inline CompressedTrace load_trace(const std::filesystem::path &path) {
    auto bytes = io::read_file(path);
    if (has_hsca_magic(bytes))
        return compress_trace(decode_raw_trace(bytes));
    if (bytes.rfind("slot,cycle,value", 0) == 0)
        return decode_compressed_csv(bytes);
    throw FormatError(path.string() + " is neither an HSCA trace nor a compressed trace CSV");
}

} // namespace hsca
