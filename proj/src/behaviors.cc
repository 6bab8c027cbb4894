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

#include "ratfix/behaviors.hh"

#include <cctype>
#include <deque>
#include <set>
#include <sstream>

namespace ratfix {

namespace {

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

} // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && s.front() == '-') {
        negative = true;
        s.remove_prefix(1);
    }
    auto slash = s.find('/');
    std::string_view num = s.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view{} : s.substr(slash + 1);
    if (!all_digits(num) || (slash != std::string_view::npos && !all_digits(den)))
        throw InputError("malformed rational '" + std::string(text) + "'");
    using boost::multiprecision::cpp_int;
    cpp_int n{std::string(num)};
    cpp_int d = slash == std::string_view::npos ? cpp_int(1) : cpp_int(std::string(den));
    if (d == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    Rational r(n, d);
    return negative ? Rational(-r) : r;
}

std::string to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

Weight parse_weight(std::string_view text) {
    if (text == "inf") return Weight::infinity();
    return Weight(parse_rational(text));
}

std::string to_string(const Weight& w) { return w.is_infinite() ? "inf" : to_string(w.value()); }

std::optional<Monoid> Monoid::from_name(std::string_view name) {
    if (name == "nat-plus") return Monoid(MonoidKind::NatPlus);
    if (name == "rat-plus") return Monoid(MonoidKind::RatPlus);
    if (name == "min-inf") return Monoid(MonoidKind::MinInf);
    return std::nullopt;
}

std::string_view Monoid::name() const {
    switch (kind_) {
    case MonoidKind::NatPlus: return "nat-plus";
    case MonoidKind::RatPlus: return "rat-plus";
    case MonoidKind::MinInf: return "min-inf";
    }
    return "?";
}

Weight Monoid::unit() const { return kind_ == MonoidKind::MinInf ? Weight::infinity() : Weight(0); }

Weight Monoid::plus(const Weight& a, const Weight& b) const {
    if (kind_ == MonoidKind::MinInf) return std::min(a, b);
    return Weight(Rational(a.value() + b.value()));
}

Weight Monoid::one() const { return kind_ == MonoidKind::MinInf ? Weight(0) : Weight(1); }

Weight Monoid::times(const Weight& a, const Weight& b) const {
    if (kind_ == MonoidKind::MinInf) {
        if (a.is_infinite() || b.is_infinite()) return Weight::infinity();
        return Weight(Rational(a.value() + b.value()));
    }
    return Weight(Rational(a.value() * b.value()));
}

bool Monoid::contains(const Weight& w) const {
    switch (kind_) {
    case MonoidKind::NatPlus: return !w.is_infinite() && w.value() >= 0 && denominator(w.value()) == 1;
    case MonoidKind::RatPlus: return !w.is_infinite();
    case MonoidKind::MinInf: return w.is_infinite() || w.value() >= 0;
    }
    return false;
}

std::string_view behavior_name(Behavior b) {
    switch (b) {
    case Behavior::Stream: return "stream";
    case Behavior::Dfa: return "dfa";
    case Behavior::Lts: return "lts";
    case Behavior::Nda: return "nda";
    case Behavior::Wts: return "wts";
    }
    return "?";
}

std::optional<Behavior> behavior_from_name(std::string_view name) {
    for (Behavior b : {Behavior::Stream, Behavior::Dfa, Behavior::Lts, Behavior::Nda, Behavior::Wts})
        if (behavior_name(b) == name) return b;
    return std::nullopt;
}

std::optional<LabelId> FunctorKind::label_index(std::string_view label) const {
    for (std::size_t i = 0; i < alphabet.size(); ++i)
        if (alphabet[i] == label) return static_cast<LabelId>(i);
    return std::nullopt;
}

std::vector<std::string> FunctorKind::problems() const {
    std::vector<std::string> out;
    if (behavior == Behavior::Stream) {
        if (!alphabet.empty()) out.push_back("stream systems take no alphabet");
    } else {
        if (alphabet.empty()) out.push_back("alphabet must be nonempty");
        std::set<std::string> seen;
        for (const auto& a : alphabet)
            if (!seen.insert(a).second) out.push_back("duplicate label '" + a + "'");
    }
    if ((behavior == Behavior::Wts) != monoid.has_value())
        out.push_back(behavior == Behavior::Wts ? "weighted systems need a monoid" : "monoid given for unweighted kind");
    return out;
}

std::string FunctorKind::describe() const {
    std::string s(behavior_name(behavior));
    if (behavior != Behavior::Stream) {
        s += " {";
        for (std::size_t i = 0; i < alphabet.size(); ++i) s += (i ? "," : "") + alphabet[i];
        s += "}";
    }
    if (monoid) s += " " + std::string(monoid->name());
    return s;
}

Behavior behavior_of(const Observation& obs) { return static_cast<Behavior>(obs.index()); }

std::optional<StateId> FiniteCoalgebra::find(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<StateId>(i);
    return std::nullopt;
}

std::string to_string(const Violation& v) {
    std::string s;
    if (v.state != kNoState) s += "state " + std::to_string(v.state) + ": ";
    if (!v.field.empty()) s += v.field + ": ";
    return s + v.message;
}

std::vector<Violation> validate(const FiniteCoalgebra& c) {
    std::vector<Violation> out;
    for (auto& p : c.kind.problems()) out.push_back({kNoState, "kind", p});
    if (c.names.size() != c.obs.size())
        out.push_back({kNoState, "states", "name table has " + std::to_string(c.names.size()) + " entries for " +
                                               std::to_string(c.obs.size()) + " states"});
    {
        std::set<std::string_view> seen;
        for (std::size_t i = 0; i < c.names.size(); ++i)
            if (!seen.insert(c.names[i]).second)
                out.push_back({static_cast<StateId>(i), "name", "duplicate state name '" + c.names[i] + "'"});
    }

    const std::size_t n = c.obs.size();
    const std::size_t labels = c.kind.num_labels();
    for (std::size_t i = 0; i < n; ++i) {
        const StateId s = static_cast<StateId>(i);
        auto bad = [&](std::string field, std::string msg) { out.push_back({s, std::move(field), std::move(msg)}); };
        auto check_target = [&](StateId t, const std::string& field) {
            if (t >= n) bad(field, "dangling successor " + (t == kNoState ? std::string("(none)") : std::to_string(t)));
        };
        const Observation& o = c.obs[i];
        if (behavior_of(o) != c.kind.behavior) {
            bad("obs", "observation is " + std::string(behavior_name(behavior_of(o))) + ", system kind is " +
                           std::string(behavior_name(c.kind.behavior)));
            continue;
        }
        std::visit(
            Overloaded{
                [&](const StreamStep<StateId>& st) { check_target(st.next, "next"); },
                [&](const DfaStep<StateId>& st) {
                    if (st.next.size() != labels) {
                        bad("next", "partial successor function (" + std::to_string(st.next.size()) + " of " +
                                        std::to_string(labels) + " labels)");
                        return;
                    }
                    for (std::size_t l = 0; l < labels; ++l) {
                        if (st.next[l] == kNoState)
                            bad("next." + c.kind.alphabet[l], "partial successor function (no successor)");
                        else
                            check_target(st.next[l], "next." + c.kind.alphabet[l]);
                    }
                },
                [&](const LtsStep<StateId>& st) {
                    if (!std::is_sorted(st.moves.begin(), st.moves.end()) ||
                        std::adjacent_find(st.moves.begin(), st.moves.end()) != st.moves.end())
                        bad("moves", "transition list not sorted and duplicate-free");
                    for (const auto& [l, t] : st.moves) {
                        if (l >= labels) {
                            bad("moves", "unknown label index " + std::to_string(l));
                            continue;
                        }
                        check_target(t, "moves." + c.kind.alphabet[l]);
                    }
                },
                [&](const NdaStep<StateId>& st) {
                    if (st.succ.size() != labels) {
                        bad("succ", "successor table has " + std::to_string(st.succ.size()) + " of " +
                                        std::to_string(labels) + " labels");
                        return;
                    }
                    for (std::size_t l = 0; l < labels; ++l) {
                        const auto& ts = st.succ[l];
                        if (!std::is_sorted(ts.begin(), ts.end()) ||
                            std::adjacent_find(ts.begin(), ts.end()) != ts.end())
                            bad("succ." + c.kind.alphabet[l], "successor set not sorted and duplicate-free");
                        for (StateId t : ts) check_target(t, "succ." + c.kind.alphabet[l]);
                    }
                },
                [&](const WtsStep<StateId>& st) {
                    if (st.succ.size() != labels) {
                        bad("succ", "weight table has " + std::to_string(st.succ.size()) + " of " +
                                        std::to_string(labels) + " labels");
                        return;
                    }
                    if (!c.kind.monoid) return;
                    for (std::size_t l = 0; l < labels; ++l) {
                        for (const auto& [t, w] : st.succ[l]) {
                            std::string field = "succ." + c.kind.alphabet[l];
                            check_target(t, field);
                            if (w == c.kind.monoid->unit())
                                bad(field, "unit weight stored for successor " + std::to_string(t));
                            else if (!c.kind.monoid->contains(w))
                                bad(field, "weight " + to_string(w) + " outside " +
                                               std::string(c.kind.monoid->name()));
                        }
                    }
                },
            },
            o);
    }
    return out;
}

void require_valid(const FiniteCoalgebra& c, std::string_view what) {
    auto vs = validate(c);
    if (vs.empty()) return;
    std::string msg = "invalid " + std::string(what) + ":";
    for (const auto& v : vs) msg += "\n  " + to_string(v);
    throw InputError(msg);
}

PointedCoalgebra reachable(const FiniteCoalgebra& c, StateId s) {
    if (s >= c.size())
        throw InputError("root " + std::to_string(s) + " out of range for a system of " + std::to_string(c.size()) +
                         " states");
    std::vector<StateId> renum(c.size(), kNoState);
    std::vector<StateId> order;
    std::deque<StateId> queue;
    renum[s] = 0;
    order.push_back(s);
    queue.push_back(s);
    while (!queue.empty()) {
        StateId x = queue.front();
        queue.pop_front();
        for (StateId t : successors(c.obs[x])) {
            if (t >= c.size()) throw InputError("dangling successor in reachability");
            if (renum[t] != kNoState) continue;
            renum[t] = static_cast<StateId>(order.size());
            order.push_back(t);
            queue.push_back(t);
        }
    }
    PointedCoalgebra out;
    out.system.kind = c.kind;
    out.system.names.reserve(order.size());
    out.system.obs.reserve(order.size());
    for (StateId x : order) {
        out.system.names.push_back(x < c.names.size() ? c.names[x] : "s" + std::to_string(x));
        out.system.obs.push_back(map_targets(c.obs[x], [&](StateId t) { return renum[t]; }, c.kind.monoid));
    }
    out.root = 0;
    return out;
}

PointedCoalgebra reachable(const PointedCoalgebra& p) { return reachable(p.system, p.root); }

DisjointUnion disjoint_union(std::span<const FiniteCoalgebra> cs) {
    return disjoint_union(cs.empty() ? FunctorKind::stream() : cs.front().kind, cs);
}

DisjointUnion disjoint_union(const FunctorKind& kind, std::span<const FiniteCoalgebra> cs) {
    DisjointUnion u;
    u.system.kind = kind;
    for (const auto& c : cs) {
        if (!(c.kind == kind))
            throw InputError("disjoint union of mismatched kinds: " + kind.describe() + " vs " + c.kind.describe());
        const StateId off = static_cast<StateId>(u.system.size());
        u.offsets.push_back(off);
        for (std::size_t i = 0; i < c.size(); ++i) {
            u.system.names.push_back(c.names[i]);
            u.system.obs.push_back(map_targets(c.obs[i], [&](StateId t) { return t + off; }, kind.monoid));
        }
    }
    // Names must stay unique for serialization.
    if (cs.size() > 1) {
        std::set<std::string> seen(u.system.names.begin(), u.system.names.end());
        if (seen.size() != u.system.names.size()) {
            std::size_t part = 0;
            for (std::size_t i = 0; i < u.system.size(); ++i) {
                while (part + 1 < u.offsets.size() && i >= u.offsets[part + 1]) ++part;
                u.system.names[i] = std::to_string(part) + "." + u.system.names[i];
            }
        }
    }
    return u;
}

} // namespace ratfix
