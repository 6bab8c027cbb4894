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

#include "ratfix/synthesis.hh"

#include <deque>
#include <set>

#include "ratfix/bisim.hh"

namespace ratfix {

namespace {

using sos::ConcreteRule;
using sos::SpecDoc;
using sos::TargetPattern;

FlatState instantiate(const TargetPattern& t, const std::vector<StateId>& slots) {
    if (!t.is_app) return FlatState::plain(slots[t.slot]);
    std::vector<StateId> args;
    args.reserve(t.arg_slots.size());
    for (auto k : t.arg_slots) args.push_back(slots[k]);
    return FlatState::app(static_cast<std::uint32_t>(t.op), std::move(args));
}

/// Targets of label-l transitions out of s, for the unweighted transition kinds.
std::vector<StateId> successors_by_label(const Observation& obs, LabelId l) {
    std::vector<StateId> out;
    std::visit(Overloaded{
                   [&](const DfaStep<StateId>& s) { out.push_back(s.next[l]); },
                   [&](const LtsStep<StateId>& s) {
                       for (const auto& [m, t] : s.moves)
                           if (m == l) out.push_back(t);
                   },
                   [&](const NdaStep<StateId>& s) { out = s.succ[l]; },
                   [&](const auto&) { throw InternalError("successors_by_label on an unlabelled observation"); },
               },
               obs);
    return out;
}

bool accepts(const Observation& obs) {
    if (auto* d = std::get_if<DfaStep<StateId>>(&obs)) return d->accept;
    if (auto* n = std::get_if<NdaStep<StateId>>(&obs)) return n->accept;
    throw InternalError("accepts on an observation without an accept bit");
}

bool output_triggered(const SpecDoc& spec, const FiniteCoalgebra& base, const FlatState& s) {
    for (const auto& rule : spec.index->output[s.op]) {
        bool fires = true;
        for (std::size_t i = 0; fires && i < s.args.size(); ++i) {
            bool final = accepts(base.obs[s.args[i]]);
            if (rule.final_args[i])
                fires = final;
            else if (spec.output_semantics == sos::OutputSemantics::Exact)
                fires = !final;
        }
        if (fires) return true;
    }
    return false;
}

/// Calls emit(target, slots) once per way of matching the positive premises.
template <class Choices, class Emit>
void enumerate(const ConcreteRule& rule, const FlatState& s, const Choices& choices, Emit&& emit) {
    const std::size_t n = s.args.size();
    const std::size_t m = rule.positive.size();
    for (const auto& c : choices)
        if (c.empty()) return;
    std::vector<std::size_t> pick(m, 0);
    std::vector<StateId> slots(s.args);
    slots.resize(n + m);
    for (;;) {
        for (std::size_t j = 0; j < m; ++j) slots[n + j] = choices[j][pick[j]].first;
        emit(instantiate(rule.target, slots), pick);
        std::size_t j = 0;
        while (j < m && ++pick[j] == choices[j].size()) pick[j++] = 0;
        if (j == m) return;
    }
}

BasicObservation<FlatState> step_stream(const SpecDoc& spec, const FiniteCoalgebra& base, const FlatState& s) {
    const std::size_t n = s.args.size();
    std::vector<Rational> values;
    std::vector<StateId> slots(s.args);
    slots.resize(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& st = std::get<StreamStep<StateId>>(base.obs[s.args[i]]);
        values.push_back(st.out);
        slots[n + i] = st.next;
    }
    sos::StreamSelection sel = sos::stream_rule_select(spec, s.op, values);
    return StreamStep<FlatState>{sel.out, instantiate(sel.compiled->target, slots)};
}

BasicObservation<FlatState> step_transitions(const SpecDoc& spec, const FiniteCoalgebra& base, const FlatState& s) {
    const std::size_t nlabels = spec.kind.num_labels();
    std::vector<std::vector<FlatState>> by_label(nlabels);
    for (LabelId c = 0; c < nlabels; ++c) {
        for (std::size_t ri : spec.index->by_op_label[s.op][c]) {
            const ConcreteRule& rule = spec.index->concrete[ri];
            if (rule.vacuous) continue;
            bool blocked = false;
            for (const auto& neg : rule.negative)
                blocked = blocked || !successors_by_label(base.obs[s.args[neg.arg]], neg.label).empty();
            if (blocked) continue;
            std::vector<std::vector<std::pair<StateId, int>>> choices;
            for (const auto& pos : rule.positive) {
                std::vector<std::pair<StateId, int>> c;
                for (StateId t : successors_by_label(base.obs[s.args[pos.arg]], pos.label)) c.emplace_back(t, 0);
                choices.push_back(std::move(c));
            }
            enumerate(rule, s, choices, [&](FlatState t, const auto&) { by_label[c].push_back(std::move(t)); });
        }
        std::sort(by_label[c].begin(), by_label[c].end());
        by_label[c].erase(std::unique(by_label[c].begin(), by_label[c].end()), by_label[c].end());
    }

    switch (spec.kind.behavior) {
    case Behavior::Lts: {
        LtsStep<FlatState> r;
        for (LabelId c = 0; c < nlabels; ++c)
            for (auto& t : by_label[c]) r.moves.emplace_back(c, std::move(t));
        return r;
    }
    case Behavior::Nda: return NdaStep<FlatState>{output_triggered(spec, base, s), std::move(by_label)};
    case Behavior::Dfa: {
        DfaStep<FlatState> r{output_triggered(spec, base, s), {}};
        for (LabelId c = 0; c < nlabels; ++c) {
            if (by_label[c].size() != 1)
                throw InternalError("dfa rules for " + spec.signature.at(s.op).name + " give " +
                                    std::to_string(by_label[c].size()) + " successors on '" + spec.kind.alphabet[c] +
                                    "'");
            r.next.push_back(std::move(by_label[c][0]));
        }
        return r;
    }
    default: throw InternalError("step_transitions on a non-transition kind");
    }
}

BasicObservation<FlatState> step_weighted(const SpecDoc& spec, const FiniteCoalgebra& base, const FlatState& s) {
    const Monoid& m = *spec.kind.monoid;
    const std::size_t nlabels = spec.kind.num_labels();
    WtsStep<FlatState> r;
    r.succ.resize(nlabels);
    auto total = [&](StateId x, LabelId l) {
        Weight w = m.unit();
        for (const auto& [t, v] : std::get<WtsStep<StateId>>(base.obs[x]).succ[l]) w = m.plus(w, v);
        return w;
    };
    for (LabelId c = 0; c < nlabels; ++c) {
        for (std::size_t ri : spec.index->by_op_label[s.op][c]) {
            const ConcreteRule& rule = spec.index->concrete[ri];
            std::vector<std::optional<Weight>> w(rule.weight_slots);
            bool ok = true;
            for (const auto& t : rule.totals) {
                Weight tw = total(s.args[t.arg], t.label);
                if (!t.pattern.is_var) {
                    ok = ok && tw == t.pattern.constant;
                } else if (w[t.pattern.slot]) {
                    ok = ok && *w[t.pattern.slot] == tw;
                } else {
                    w[t.pattern.slot] = tw;
                }
            }
            auto value = [&](const sos::WeightOperand& o) -> const Weight& {
                if (!o.is_var) return o.constant;
                if (!w[o.slot]) throw InternalError("unbound weight slot");
                return *w[o.slot];
            };
            for (const auto& g : rule.guard) ok = ok && sos::compare(value(g.lhs), g.op, value(g.rhs));
            if (!ok) continue;

            std::vector<std::vector<std::pair<StateId, Weight>>> choices;
            for (const auto& pos : rule.positive) {
                const auto& edges = std::get<WtsStep<StateId>>(base.obs[s.args[pos.arg]]).succ[pos.label];
                choices.emplace_back(edges.begin(), edges.end());
            }
            enumerate(rule, s, choices, [&](FlatState t, const std::vector<std::size_t>& pick) {
                for (std::size_t j = 0; j < pick.size(); ++j) w[j] = choices[j][pick[j]].second;
                Weight prod = m.one();
                for (const auto& f : rule.weight_factors) prod = m.times(prod, value(f));
                auto [it, fresh] = r.succ[c].try_emplace(std::move(t), prod);
                if (!fresh) it->second = m.plus(it->second, prod);
            });
        }
        std::erase_if(r.succ[c], [&](const auto& kv) { return kv.second == m.unit(); });
    }
    return r;
}

void check_flat_state(const SpecDoc& spec, const FiniteCoalgebra& base, const FlatState& s) {
    for (StateId a : s.args)
        if (a >= base.size()) throw InputError("flat state refers to state " + std::to_string(a) + " outside the base");
    if (s.is_plain()) {
        if (s.args.size() != 1) throw InputError("a plain flat state holds exactly one base state");
        return;
    }
    if (s.op >= spec.signature.size()) throw InputError("flat state refers to an unknown operator");
    if (spec.signature.at(s.op).arity != s.args.size())
        throw InputError("operator " + spec.signature.at(s.op).name + " has arity " +
                         std::to_string(spec.signature.at(s.op).arity) + ", got " + std::to_string(s.args.size()));
}

void check_kinds(const SpecDoc& spec, const FiniteCoalgebra& base) {
    if (!(spec.kind == base.kind))
        throw InputError("specification is for " + spec.kind.describe() + " but the system is " + base.kind.describe());
}

} // namespace

std::string describe(const SpecDoc& spec, const FiniteCoalgebra& base, const FlatState& s) {
    if (s.is_plain()) return base.names.at(s.args.at(0));
    std::string out = spec.signature.at(s.op).name + "(";
    for (std::size_t i = 0; i < s.args.size(); ++i) out += (i ? "," : "") + base.names.at(s.args[i]);
    return out + ")";
}

BasicObservation<FlatState> lambda_step(const SpecDoc& spec, const FiniteCoalgebra& base, const FlatState& s) {
    check_kinds(spec, base);
    check_flat_state(spec, base, s);
    if (s.is_plain())
        return map_targets(base.obs[s.args[0]], [](StateId t) { return FlatState::plain(t); }, base.kind.monoid);
    switch (spec.kind.behavior) {
    case Behavior::Stream: return step_stream(spec, base, s);
    case Behavior::Wts: return step_weighted(spec, base, s);
    default: return step_transitions(spec, base, s);
    }
}

std::size_t flat_state_bound(const sos::Signature& sig, std::size_t base_size) {
    constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
    auto add = [](std::size_t a, std::size_t b) { return a > kMax - b ? kMax : a + b; };
    std::size_t bound = base_size;
    for (const auto& op : sig.ops) {
        std::size_t p = 1;
        for (std::size_t i = 0; i < op.arity; ++i) p = (base_size != 0 && p > kMax / base_size) ? kMax : p * base_size;
        bound = add(bound, p);
    }
    return bound;
}

SynthesizedSystem synthesize(const SpecDoc& spec, const FiniteCoalgebra& base, const FlatState& root) {
    check_kinds(spec, base);
    require_valid(base, "base system");
    check_flat_state(spec, base, root);
    const std::size_t bound = flat_state_bound(spec.signature, base.size());

    SynthesizedSystem out;
    out.base = base;
    out.system.kind = base.kind;
    std::map<FlatState, StateId> ids;
    std::deque<StateId> queue;
    auto intern = [&](const FlatState& s) -> StateId {
        auto [it, fresh] = ids.try_emplace(s, static_cast<StateId>(out.states.size()));
        if (fresh) {
            if (out.states.size() >= bound)
                throw InternalError("synthesized system exceeds the bound of " + std::to_string(bound) + " flat states");
            out.states.push_back(s);
            queue.push_back(it->second);
        }
        return it->second;
    };
    intern(root);
    std::vector<std::optional<Observation>> obs;
    while (!queue.empty()) {
        StateId id = queue.front();
        queue.pop_front();
        BasicObservation<FlatState> step = lambda_step(spec, base, out.states[id]);
        Observation o = map_targets(step, intern, base.kind.monoid);
        if (obs.size() <= id) obs.resize(id + 1);
        obs[id] = std::move(o);
    }
    std::set<std::string> used;
    for (std::size_t i = 0; i < out.states.size(); ++i) {
        out.system.obs.push_back(std::move(*obs[i]));
        std::string name = describe(spec, base, out.states[i]);
        std::string unique = name;
        for (int k = 2; !used.insert(unique).second; ++k) unique = name + "#" + std::to_string(k);
        out.system.names.push_back(std::move(unique));
    }
    return out;
}

PointedCoalgebra eval_term(const SpecDoc& spec, const std::map<std::string, PointedCoalgebra>& env,
                           const sos::Term& term, EvalOptions options) {
    if (term.param) throw InputError("operator families cannot be evaluated here: " + term.to_string());
    if (!term.is_app) {
        if (auto it = env.find(term.head); it != env.end()) {
            check_kinds(spec, it->second.system);
            return it->second;
        }
        if (auto op = spec.signature.find(term.head); !op || spec.signature.at(*op).arity != 0)
            throw InputError("unbound name '" + term.head + "'");
    }
    auto op = spec.signature.find(term.head);
    if (!op) throw InputError("unknown operator '" + term.head + "'");
    if (spec.signature.at(*op).arity != term.args.size())
        throw InputError("operator " + term.head + " has arity " + std::to_string(spec.signature.at(*op).arity) +
                         ", applied to " + std::to_string(term.args.size()) + " arguments");
    std::vector<PointedCoalgebra> args;
    for (const auto& a : term.args) args.push_back(eval_term(spec, env, a, options));
    std::vector<FiniteCoalgebra> systems;
    for (const auto& a : args) systems.push_back(a.system);
    DisjointUnion u = disjoint_union(spec.kind, systems);
    std::vector<StateId> roots;
    for (std::size_t i = 0; i < args.size(); ++i) roots.push_back(u.offsets[i] + args[i].root);
    SynthesizedSystem s = synthesize(spec, u.system, FlatState::app(static_cast<std::uint32_t>(*op), roots));
    PointedCoalgebra out = s.pointed();
    return options.minimize_levels ? minimize(out) : out;
}

} // namespace ratfix
