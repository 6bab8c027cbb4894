/*
 * Copyright 2026 The ratfix Authors
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
 */

// JSON and DOT encodings of finite systems.

#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ratfix/behaviors.hh"

namespace ratfix {

struct LoadedSystem {
    FiniteCoalgebra system;
    std::optional<StateId> root;

    /// The pointed system, defaulting to the first state. Throws InputError when empty.
    PointedCoalgebra pointed() const;
};

/// Throws InputError on schema errors (unknown keys, unknown state or label
/// names, malformed rationals). Semantic problems such as a partial DFA
/// successor function are left for validate().
LoadedSystem system_from_json(const nlohmann::json& j);
nlohmann::json system_to_json(const FiniteCoalgebra& c, std::optional<StateId> root = std::nullopt);

LoadedSystem parse_system(std::string_view text);
LoadedSystem load_system(const std::string& path);

std::string to_dot(const FiniteCoalgebra& c, std::optional<StateId> root = std::nullopt);

/// Whole-file read; throws InputError if the file cannot be opened.
std::string read_file(const std::string& path);

} // namespace ratfix
