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

// Operational models of a rule specification over a finite system.
//
// Given a base system S, the states of the synthesized system are flat
// terms: a plain base state, or one operator applied to base states. The
// rules determine the observation of every operator application, and plain
// states behave as in the base. Only the part reachable from a chosen root
// is built.

#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "ratfix/behaviors.hh"
#include "ratfix/sosdsl.hh"

namespace ratfix {

struct FlatState {
    static constexpr std::uint32_t kPlain = std::numeric_limits<std::uint32_t>::max();

    std::uint32_t op = kPlain;  ///< signature index, or kPlain
    std::vector<StateId> args;  ///< the base state itself when plain

    static FlatState plain(StateId s) { return {kPlain, {s}}; }
    static FlatState app(std::uint32_t op, std::vector<StateId> args) { return {op, std::move(args)}; }
    bool is_plain() const { return op == kPlain; }

    friend auto operator<=>(const FlatState&, const FlatState&) = default;
};

/// "name" for plain states, "op(n1,n2)" otherwise.
std::string describe(const sos::SpecDoc& spec, const FiniteCoalgebra& base, const FlatState& s);

/// One application of the rules: the observation of `s`, with successors as flat states.
/// Throws InputError when `s` does not fit the signature or the base.
BasicObservation<FlatState> lambda_step(const sos::SpecDoc& spec, const FiniteCoalgebra& base, const FlatState& s);

struct SynthesizedSystem {
    FiniteCoalgebra base;
    std::vector<FlatState> states;  ///< breadth-first discovery order
    FiniteCoalgebra system;         ///< observations over indices into `states`
    StateId root = 0;

    PointedCoalgebra pointed() const { return {system, root}; }
};

/// Number of flat terms over `base_size` states: sum over operators of
/// base_size^arity, plus base_size. Saturates at SIZE_MAX.
std::size_t flat_state_bound(const sos::Signature& sig, std::size_t base_size);

/// Breadth-first closure of `root` under lambda_step. Throws InputError on a
/// kind mismatch or an invalid base, and InternalError if the closure
/// outgrows flat_state_bound (it cannot for a valid specification).
SynthesizedSystem synthesize(const sos::SpecDoc& spec, const FiniteCoalgebra& base, const FlatState& root);

struct EvalOptions {
    /// Quotient by bisimilarity after every operator level.
    bool minimize_levels = false;
};

/// Evaluates a closed term inside out. Leaves name systems in `env` (or
/// nullary operators); each operator node synthesizes over the disjoint
/// union of its arguments. Throws InputError on unbound names, unknown
/// operators or kind mismatches.
PointedCoalgebra eval_term(const sos::SpecDoc& spec, const std::map<std::string, PointedCoalgebra>& env,
                           const sos::Term& term, EvalOptions options = {});

} // namespace ratfix
