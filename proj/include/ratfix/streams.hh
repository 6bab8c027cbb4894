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

// Eventually periodic streams as lassos, and an unfolder for stream rules
// whose conclusions may target arbitrary terms.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ratfix/behaviors.hh"
#include "ratfix/sosdsl.hh"

namespace ratfix {

/// prefix · cycle^ω with a nonempty cycle.
struct Lasso {
    std::vector<Rational> prefix;
    std::vector<Rational> cycle;

    /// Primitive cycle, shortest prefix. Throws InputError on an empty cycle.
    Lasso canonical() const;
    bool is_canonical() const { return canonical() == *this; }

    Rational at(std::size_t i) const;
    std::vector<Rational> take(std::size_t n) const;

    /// "v1,v2 | w1,w2" (prefix | cycle).
    std::string to_string() const;
    static Lasso parse(std::string_view text);

    friend bool operator==(const Lasso&, const Lasso&) = default;
};

/// Canonical lasso of the stream denoted by a pointed stream system.
Lasso lasso_of(const PointedCoalgebra& p);

/// |prefix| + |cycle| states in a rho shape, pointed at the first.
PointedCoalgebra lasso_to_system(const Lasso& l);

/// First n outputs along the successor chain from the root.
std::vector<Rational> unfold(const PointedCoalgebra& p, std::size_t n);

/// Least (prefix length p, period c), lexicographically, with p + 2c <= |values|
/// such that the sample from p on is c-periodic. The result is consistent
/// with the sample only; it is never a proof of eventual periodicity.
std::optional<Lasso> detect_lasso(std::span<const Rational> values);

// ---------------------------------------------------------------------------
// Stream rules with arbitrary target terms

struct GsosOp {
    std::string name;
    std::size_t arity = 0;
    bool indexed = false;  ///< an integer-indexed family f[n]
    sos::SourceSpan at;
};

struct GsosRule {
    std::string op;
    std::string param_var;  ///< bound family index, empty for plain operators
    std::vector<std::string> head_vars;
    std::vector<std::string> value_vars;
    std::vector<std::string> tail_vars;
    sos::Guard guard;
    sos::ValueExpr out;
    sos::Term target;
    sos::SourceSpan at;
};

struct GsosStreamSpec {
    std::vector<GsosOp> ops;
    std::vector<GsosRule> rules;
    /// Every target is a variable or one plain operator over variables.
    bool flat() const;
};

/// Accepts `behavior stream gsos` texts and plain `behavior stream` texts.
/// Throws InputError carrying the diagnostics on failure.
GsosStreamSpec parse_gsos(std::string_view text);

struct UnfoldOptions {
    /// Upper bound on the node count of a configuration.
    std::size_t max_nodes = 1'000'000;
};

/// The first n outputs of `term` under the rules, by term rewriting:
/// outputs come from rule output expressions on argument outputs, and each
/// step replaces the configuration by the instantiated rule target.
/// Throws ResourceError when a configuration outgrows the budget, InputError
/// for unbound variables or unknown operators.
std::vector<Rational> gsos_unfold(const GsosStreamSpec& spec, const std::map<std::string, Lasso>& env,
                                  const sos::Term& term, std::size_t n, UnfoldOptions options = {});

} // namespace ratfix
