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

// Key files ('0'/'1' text, or 0x-prefixed hex) and leakage-model JSON:
//
//   {"base_level": [...], "leak_strength": [...], "noise_sigma": [...], "seed": n}

#pragma once

#include "hsca/io.hpp"
#include "hsca/synth.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>

namespace hsca {

inline void write_key_file(const std::filesystem::path &path, const ScalarKey &key) {
    io::write_file_atomic(path, key.to_string() + '\n');
}

inline ScalarKey read_key_file(const std::filesystem::path &path,
                               std::optional<std::size_t> length = {}) {
    const auto text = io::read_file(path);
    try {
        return ScalarKey::parse(text, length);
    } catch (const DimensionError &) {
        throw;
    } catch (const DomainError &e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

inline nlohmann::json model_to_json(const LeakageModel &m) {
    return nlohmann::json{{"base_level", m.base_level},
                          {"leak_strength", m.leak_strength},
                          {"noise_sigma", m.noise_sigma},
                          {"seed", m.seed}};
}

inline LeakageModel model_from_json(const nlohmann::json &j) {
    LeakageModel m;
    try {
        j.at("base_level").get_to(m.base_level);
        j.at("leak_strength").get_to(m.leak_strength);
        j.at("noise_sigma").get_to(m.noise_sigma);
        if (j.contains("seed"))
            m.seed = j.at("seed").get<Seed>();
    } catch (const nlohmann::json::exception &e) {
        throw FormatError(std::string("malformed leakage model: ") + e.what());
    }
    m.validate();
    return m;
}

inline void write_model_file(const std::filesystem::path &path, const LeakageModel &m) {
    io::write_file_atomic(path, model_to_json(m).dump(2) + '\n');
}

inline LeakageModel read_model_file(const std::filesystem::path &path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(io::read_file(path));
    } catch (const nlohmann::json::parse_error &e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    return model_from_json(j);
}

} // namespace hsca
