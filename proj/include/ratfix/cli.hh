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

// The ratfix command line, callable in-process for tests.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ratfix {

enum ExitCode : int {
    kExitOk = 0,
    kExitNegative = 1,  ///< a well-formed "no": not bipointed, not bisimilar, failed demo
    kExitInput = 2,
    kExitResource = 3,
    kExitInternal = 4,
};

/// args excludes the program name. Data goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ratfix
