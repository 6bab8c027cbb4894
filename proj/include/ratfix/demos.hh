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

// Self-checking scenarios over the shipped specifications.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ratfix/behaviors.hh"
#include "ratfix/io.hh"
#include "ratfix/sosdsl.hh"

namespace ratfix {

struct DemoCheck {
    std::string property;
    bool pass = false;
};

struct DemoReport {
    std::string name;
    std::vector<std::string> lines;
    std::vector<DemoCheck> checks;

    bool pass() const;
    std::string to_string() const;
};

std::vector<std::string> demo_names();

/// Throws InputError for an unknown name.
DemoReport run_demo(std::string_view name);

/// Embedded resources, parsed. Throw InternalError if missing.
sos::SpecDoc shipped_spec(std::string_view name);
LoadedSystem shipped_system(std::string_view name);

} // namespace ratfix
