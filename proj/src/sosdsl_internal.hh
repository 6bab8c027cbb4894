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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ratfix/sosdsl.hh"

namespace ratfix::sos::detail {

SpecIndex build_index(const SpecDoc& doc);

/// Label variables of a rule in first-occurrence order.
std::vector<std::string> label_variables(const TransitionRule& r);

/// Concrete label of `t` under an assignment of the rule's label variables; nullopt when undefined.
std::optional<std::string> eval_label(const LabelTerm& t, const std::vector<std::string>& vars,
                                      const std::vector<std::string>& values, const LabelDecls& decls);

} // namespace ratfix::sos::detail
