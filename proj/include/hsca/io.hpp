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

// Small file helpers shared by every on-disk format.

#pragma once

#include "hsca/error.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace hsca::io {

/// CSV numbers carry 6 significant digits.
inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError("cannot open " + path.string());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

/// Writes `content` to `<path>.tmp` then renames it over `path`, so readers
/// never observe a partially written file.
inline void write_file_atomic(const std::filesystem::path &path, std::string_view content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path())
        fs::create_directories(path.parent_path(), ec);
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw FormatError("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out)
            throw FormatError("write failed for " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw FormatError("cannot rename into " + path.string());
    }
}

/// Splits one CSV line on commas. No quoting: hsca never emits quoted fields.
inline std::vector<std::string> split_csv_line(std::string_view line) {
    if (!line.empty() && line.back() == '\r')
        line.remove_suffix(1);
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        fields.emplace_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return fields;
}

/// Lines of a text file without trailing newline; blank lines dropped.
inline std::vector<std::string> split_lines(const std::string &text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (!line.empty())
            lines.push_back(std::move(line));
    }
    return lines;
}

inline double parse_double(const std::string &s, std::string_view what) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size())
            throw FormatError("");
        return v;
    } catch (const std::exception &) {
        throw FormatError("bad number '" + s + "' in " + std::string(what));
    }
}

inline unsigned long long parse_count(const std::string &s, std::string_view what) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw FormatError("bad count '" + s + "' in " + std::string(what));
    try {
        return std::stoull(s);
    } catch (const std::exception &) {
        throw FormatError("count out of range '" + s + "' in " + std::string(what));
    }
}

} // namespace hsca::io
