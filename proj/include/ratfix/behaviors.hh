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

// Finite systems for the five behaviour types: streams, deterministic
// automata, labelled transition systems, non-deterministic automata and
// monoid-weighted transition systems.
//
// A system is a dense array of states, each carrying exactly one
// observation (output and successors) whose shape depends on the kind.
// Observations are templated on the successor type so that the same shapes
// serve plain systems (successors are StateIds) and synthesized systems
// (successors are flat terms, see synthesis.hh).

#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ratfix/errors.hh"

namespace ratfix {

/// Exact rationals, always in lowest terms with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q" or "p" (optional leading '-'). Throws InputError.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& r);

using StateId = std::uint32_t;
using LabelId = std::uint32_t;

/// Marks a missing successor in a partial (invalid) deterministic system.
inline constexpr StateId kNoState = std::numeric_limits<StateId>::max();

// ---------------------------------------------------------------------------
// Weights and monoids

/// A rational or +infinity. Infinity only occurs in the min-inf monoid.
class Weight {
public:
    Weight() = default;
    Weight(Rational value) : value_(std::move(value)) {}  // NOLINT(implicit)
    Weight(long long value) : value_(value) {}            // NOLINT(implicit)

    static Weight infinity() {
        Weight w;
        w.infinite_ = true;
        return w;
    }

    bool is_infinite() const { return infinite_; }
    const Rational& value() const { return value_; }

    friend bool operator==(const Weight& a, const Weight& b) {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
    }
    friend std::strong_ordering operator<=>(const Weight& a, const Weight& b) {
        if (a.infinite_ || b.infinite_)
            return a.infinite_ <=> b.infinite_;
        if (a.value_ < b.value_) return std::strong_ordering::less;
        if (b.value_ < a.value_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

private:
    bool infinite_ = false;
    Rational value_{0};
};

/// "inf" or a rational literal.
Weight parse_weight(std::string_view text);
std::string to_string(const Weight& w);

enum class MonoidKind { NatPlus, RatPlus, MinInf };

/// One of the built-in commutative monoids weights are drawn from.
///
/// Besides the monoid sum, each built-in carries the product that distributes
/// over it (ordinary multiplication for the additive monoids, ordinary
/// addition for min-inf). Rule weight expressions are built from that
/// product, which is what makes them additive in every argument.
class Monoid {
public:
    constexpr explicit Monoid(MonoidKind kind = MonoidKind::NatPlus) : kind_(kind) {}

    static std::optional<Monoid> from_name(std::string_view name);

    MonoidKind kind() const { return kind_; }
    std::string_view name() const;

    Weight unit() const;
    Weight plus(const Weight& a, const Weight& b) const;
    /// Neutral element of the distributing product.
    Weight one() const;
    Weight times(const Weight& a, const Weight& b) const;
    /// Element of the carrier (naturals, rationals, or nonnegative rationals plus infinity).
    bool contains(const Weight& w) const;
    /// All built-ins are totally ordered by the natural order on their carriers.
    bool ordered() const { return true; }

    friend bool operator==(Monoid, Monoid) = default;

private:
    MonoidKind kind_;
};

// ---------------------------------------------------------------------------
// Functor kinds

enum class Behavior { Stream, Dfa, Lts, Nda, Wts };

std::string_view behavior_name(Behavior b);
std::optional<Behavior> behavior_from_name(std::string_view name);

struct FunctorKind {
    Behavior behavior = Behavior::Stream;
    /// Empty for streams.
    std::vector<std::string> alphabet;
    /// Set for weighted systems only.
    std::optional<Monoid> monoid;

    static FunctorKind stream() { return {}; }
    static FunctorKind dfa(std::vector<std::string> alphabet) { return {Behavior::Dfa, std::move(alphabet), {}}; }
    static FunctorKind lts(std::vector<std::string> alphabet) { return {Behavior::Lts, std::move(alphabet), {}}; }
    static FunctorKind nda(std::vector<std::string> alphabet) { return {Behavior::Nda, std::move(alphabet), {}}; }
    static FunctorKind wts(std::vector<std::string> alphabet, Monoid m) {
        return {Behavior::Wts, std::move(alphabet), m};
    }

    std::optional<LabelId> label_index(std::string_view label) const;
    std::size_t num_labels() const { return alphabet.size(); }
    /// Nonempty duplicate-free alphabet where one is required, monoid iff weighted.
    std::vector<std::string> problems() const;
    std::string describe() const;

    friend bool operator==(const FunctorKind&, const FunctorKind&) = default;
};

// ---------------------------------------------------------------------------
// Observations

template <class T> struct StreamStep {
    Rational out;
    T next;
    friend bool operator==(const StreamStep&, const StreamStep&) = default;
};

template <class T> struct DfaStep {
    bool accept = false;
    std::vector<T> next;  ///< indexed by label
    friend bool operator==(const DfaStep&, const DfaStep&) = default;
};

template <class T> struct LtsStep {
    std::vector<std::pair<LabelId, T>> moves;  ///< sorted, duplicate-free
    friend bool operator==(const LtsStep&, const LtsStep&) = default;
};

template <class T> struct NdaStep {
    bool accept = false;
    std::vector<std::vector<T>> succ;  ///< indexed by label; each sorted, duplicate-free
    friend bool operator==(const NdaStep&, const NdaStep&) = default;
};

template <class T> struct WtsStep {
    std::vector<std::map<T, Weight>> succ;  ///< indexed by label; unit weights never stored
    friend bool operator==(const WtsStep&, const WtsStep&) = default;
};

template <class T>
using BasicObservation = std::variant<StreamStep<T>, DfaStep<T>, LtsStep<T>, NdaStep<T>, WtsStep<T>>;

using Observation = BasicObservation<StateId>;

template <class... Fs> struct Overloaded : Fs... { using Fs::operator()...; };
template <class... Fs> Overloaded(Fs...) -> Overloaded<Fs...>;

/// Re-targets every successor through `f`, restoring the normal form:
/// transition sets are re-sorted and deduplicated, weights landing on the
/// same target are combined with the monoid sum and unit results dropped.
template <class T, class F>
auto map_targets(const BasicObservation<T>& obs, F&& f, const std::optional<Monoid>& monoid)
    -> BasicObservation<std::invoke_result_t<F&, const T&>> {
    using U = std::invoke_result_t<F&, const T&>;
    return std::visit(
        Overloaded{
            [&](const StreamStep<T>& s) -> BasicObservation<U> { return StreamStep<U>{s.out, f(s.next)}; },
            [&](const DfaStep<T>& s) -> BasicObservation<U> {
                DfaStep<U> r{s.accept, {}};
                r.next.reserve(s.next.size());
                for (const auto& t : s.next) r.next.push_back(f(t));
                return r;
            },
            [&](const LtsStep<T>& s) -> BasicObservation<U> {
                LtsStep<U> r;
                r.moves.reserve(s.moves.size());
                for (const auto& [l, t] : s.moves) r.moves.emplace_back(l, f(t));
                std::sort(r.moves.begin(), r.moves.end());
                r.moves.erase(std::unique(r.moves.begin(), r.moves.end()), r.moves.end());
                return r;
            },
            [&](const NdaStep<T>& s) -> BasicObservation<U> {
                NdaStep<U> r{s.accept, {}};
                r.succ.resize(s.succ.size());
                for (std::size_t l = 0; l < s.succ.size(); ++l) {
                    for (const auto& t : s.succ[l]) r.succ[l].push_back(f(t));
                    std::sort(r.succ[l].begin(), r.succ[l].end());
                    r.succ[l].erase(std::unique(r.succ[l].begin(), r.succ[l].end()), r.succ[l].end());
                }
                return r;
            },
            [&](const WtsStep<T>& s) -> BasicObservation<U> {
                if (!monoid) throw InternalError("weighted observation without a monoid");
                WtsStep<U> r;
                r.succ.resize(s.succ.size());
                for (std::size_t l = 0; l < s.succ.size(); ++l) {
                    for (const auto& [t, w] : s.succ[l]) {
                        U u = f(t);
                        auto it = r.succ[l].find(u);
                        if (it == r.succ[l].end())
                            r.succ[l].emplace(std::move(u), w);
                        else
                            it->second = monoid->plus(it->second, w);
                    }
                    std::erase_if(r.succ[l], [&](const auto& kv) { return kv.second == monoid->unit(); });
                }
                return r;
            },
        },
        obs);
}

/// All successors in observation order (duplicates possible across labels).
template <class T> std::vector<T> successors(const BasicObservation<T>& obs) {
    std::vector<T> out;
    std::visit(Overloaded{
                   [&](const StreamStep<T>& s) { out.push_back(s.next); },
                   [&](const DfaStep<T>& s) { out = s.next; },
                   [&](const LtsStep<T>& s) {
                       for (const auto& [l, t] : s.moves) out.push_back(t);
                   },
                   [&](const NdaStep<T>& s) {
                       for (const auto& ts : s.succ) out.insert(out.end(), ts.begin(), ts.end());
                   },
                   [&](const WtsStep<T>& s) {
                       for (const auto& m : s.succ)
                           for (const auto& [t, w] : m) out.push_back(t);
                   },
               },
               obs);
    return out;
}

Behavior behavior_of(const Observation& obs);

// ---------------------------------------------------------------------------
// Systems

struct FiniteCoalgebra {
    FunctorKind kind;
    std::vector<std::string> names;
    std::vector<Observation> obs;

    std::size_t size() const { return obs.size(); }
    bool empty() const { return obs.empty(); }
    /// Linear lookup by name.
    std::optional<StateId> find(std::string_view name) const;

    friend bool operator==(const FiniteCoalgebra&, const FiniteCoalgebra&) = default;
};

struct PointedCoalgebra {
    FiniteCoalgebra system;
    StateId root = 0;

    friend bool operator==(const PointedCoalgebra&, const PointedCoalgebra&) = default;
};

struct Violation {
    /// kNoState for system-level problems.
    StateId state = kNoState;
    std::string field;
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
};

std::string to_string(const Violation& v);

/// Every invariant violation of `c`; empty means valid.
std::vector<Violation> validate(const FiniteCoalgebra& c);

/// Restriction to the states reachable from `s`, numbered in breadth-first
/// discovery order (successors visited in observation order). Throws
/// InputError if `s` is out of range.
PointedCoalgebra reachable(const FiniteCoalgebra& c, StateId s);
PointedCoalgebra reachable(const PointedCoalgebra& p);

struct DisjointUnion {
    FiniteCoalgebra system;
    std::vector<StateId> offsets;
};

/// Concatenation of same-kind systems; the i-th input starts at offsets[i].
/// Throws InputError on a kind mismatch. An empty list gives an empty stream
/// system; use the overload with an explicit kind when that matters.
DisjointUnion disjoint_union(std::span<const FiniteCoalgebra> cs);
DisjointUnion disjoint_union(const FunctorKind& kind, std::span<const FiniteCoalgebra> cs);

/// Throws InputError listing the violations if `c` is invalid.
void require_valid(const FiniteCoalgebra& c, std::string_view what);

} // namespace ratfix
