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

#include "generators.hh"

#include <algorithm>
#include <map>

namespace ratfix::testing {

namespace {

Weight random_weight(Rng& rng, const Monoid& m) {
    switch (m.kind()) {
    case MonoidKind::NatPlus: return Weight(Rational(static_cast<int>(rng.between(1, 3))));
    case MonoidKind::RatPlus: return Weight(Rational(static_cast<int>(rng.between(1, 4)), static_cast<int>(rng.between(1, 3))));
    case MonoidKind::MinInf:
        return rng.chance(0.15) ? Weight::infinity() : Weight(Rational(static_cast<int>(rng.between(0, 4))));
    }
    return m.unit();
}

// Splits w into two non-unit parts whose monoid sum is w, when possible.
std::optional<std::pair<Weight, Weight>> split_weight(Rng& rng, const Monoid& m, const Weight& w) {
    switch (m.kind()) {
    case MonoidKind::NatPlus:
        if (w.value() < 2) return std::nullopt;
        return std::pair{Weight(Rational(1)), Weight(w.value() - 1)};
    case MonoidKind::RatPlus: {
        Rational part = w.value() * Rational(1, static_cast<int>(rng.between(2, 4)));
        return std::pair{Weight(part), Weight(w.value() - part)};
    }
    case MonoidKind::MinInf: return std::pair{w, w};
    }
    return std::nullopt;
}

std::string var_list(const std::vector<std::string>& vs) {
    std::string s;
    for (std::size_t i = 0; i < vs.size(); ++i) s += (i ? "," : "") + vs[i];
    return s;
}

struct OpShape {
    std::string name;
    std::size_t arity;
};

std::vector<OpShape> random_ops(Rng& rng) {
    std::vector<OpShape> ops;
    std::size_t count = rng.between(1, 3);
    for (std::size_t i = 0; i < count; ++i) ops.push_back({"f" + std::to_string(i), rng.between(i == 0 ? 1 : 0, 2)});
    return ops;
}

std::string head(const OpShape& op) {
    if (op.arity == 0) return op.name;
    std::vector<std::string> xs;
    for (std::size_t i = 1; i <= op.arity; ++i) xs.push_back("x" + std::to_string(i));
    return op.name + "(" + var_list(xs) + ")";
}

// A variable from `vars` or one operator applied to such variables.
std::string flat_target(Rng& rng, const std::vector<OpShape>& ops, const std::vector<std::string>& vars) {
    if (!vars.empty() && rng.chance(0.35)) return rng.pick(vars);
    std::vector<OpShape> usable;
    for (const auto& o : ops)
        if (o.arity == 0 || !vars.empty()) usable.push_back(o);
    const OpShape& g = rng.pick(usable);
    if (g.arity == 0) return g.name;
    std::vector<std::string> args;
    for (std::size_t i = 0; i < g.arity; ++i) args.push_back(rng.pick(vars));
    return g.name + "(" + var_list(args) + ")";
}

std::string value_expr(Rng& rng, const std::vector<std::string>& vars, int depth) {
    if (depth == 0 || rng.chance(0.4)) {
        if (!vars.empty() && rng.chance(0.7)) return rng.pick(vars);
        return std::to_string(rng.between(0, 3));
    }
    static const std::vector<std::string> ops = {" + ", " - ", " * "};
    return "(" + value_expr(rng, vars, depth - 1) + rng.pick(ops) + value_expr(rng, vars, depth - 1) + ")";
}

std::string stream_spec(Rng& rng) {
    auto ops = random_ops(rng);
    std::string s = "behavior stream\n";
    for (const auto& o : ops) s += "op " + o.name + "/" + std::to_string(o.arity) + "\n";
    for (const auto& o : ops) {
        std::vector<std::string> values, vars, premises;
        for (std::size_t i = 1; i <= o.arity; ++i) {
            std::string x = "x" + std::to_string(i), r = "r" + std::to_string(i);
            premises.push_back(x + " =" + r + "-> " + x + "'");
            values.push_back(r);
            vars.push_back(x);
            vars.push_back(x + "'");
        }
        std::size_t rules = values.empty() ? 1 : rng.between(1, 3);
        for (std::size_t k = 0; k < rules; ++k) {
            s += "\n";
            for (const auto& p : premises) s += p + "  ";
            if (!premises.empty()) s += "\n";
            if (k + 1 < rules) {
                static const std::vector<std::string> cmps = {" = ", " != ", " < ", " <= "};
                s += "when " + value_expr(rng, values, 1) + rng.pick(cmps) + value_expr(rng, values, 1);
                if (rng.chance(0.3)) s += ", " + rng.pick(values) + " <= " + std::to_string(rng.between(0, 2));
                s += "\n";
            } else if (!values.empty() && rules > 1 && rng.chance(0.5)) {
                s += "otherwise\n";
            }
            s += "---\n" + head(o) + " =" + value_expr(rng, values, 2) + "-> " + flat_target(rng, ops, vars) + "\n";
        }
    }
    return s;
}

std::string header(const FunctorKind& kind) {
    std::string s = "behavior " + std::string(behavior_name(kind.behavior)) + " labels {" + var_list(kind.alphabet) + "}";
    if (kind.monoid) s += " monoid " + std::string(kind.monoid->name());
    return s + "\n";
}

std::string output_rules(Rng& rng, const OpShape& o) {
    // Distinct subsets of the argument positions.
    std::set<std::size_t> masks;
    std::size_t count = rng.between(0, 2);
    for (std::size_t i = 0; i < count; ++i) masks.insert(rng.below(std::size_t{1} << o.arity));
    std::string s;
    for (std::size_t m : masks) {
        std::vector<std::string> finals, xs;
        for (std::size_t i = 1; i <= o.arity; ++i) {
            xs.push_back("x" + std::to_string(i));
            if (m & (std::size_t{1} << (i - 1))) finals.push_back(xs.back());
        }
        s += "\noutput " + o.name + "(" + var_list(xs) + ") final when final {" + var_list(finals) + "}\n";
    }
    return s;
}

std::string transition_spec(Rng& rng, const FunctorKind& kind) {
    auto ops = random_ops(rng);
    const bool dfa = kind.behavior == Behavior::Dfa, wts = kind.behavior == Behavior::Wts;
    std::string s = header(kind);
    for (const auto& o : ops) s += "op " + o.name + "/" + std::to_string(o.arity) + "\n";
    for (const auto& o : ops) {
        std::vector<std::string> conclusion_labels;
        if (dfa) {
            conclusion_labels = kind.alphabet;
        } else {
            std::size_t rules = rng.between(1, 3);
            for (std::size_t k = 0; k < rules; ++k) conclusion_labels.push_back(rng.pick(kind.alphabet));
        }
        for (const auto& c : conclusion_labels) {
            std::vector<std::string> vars, lines, factors, totals;
            for (std::size_t i = 1; i <= o.arity; ++i) vars.push_back("x" + std::to_string(i));
            const std::size_t positives = o.arity == 0 ? 0 : rng.between(0, 2);
            const bool schematic = !dfa && !wts && positives > 0 && rng.chance(0.3);
            std::string premises;
            for (std::size_t j = 1; j <= positives; ++j) {
                std::string x = "x" + std::to_string(rng.between(1, o.arity)), y = "y" + std::to_string(j);
                std::string label = schematic && j == 1 ? "$l" : rng.pick(kind.alphabet);
                if (wts) {
                    std::string u = "u" + std::to_string(j);
                    premises += x + " -" + label + "," + u + "-> " + y + "  ";
                    factors.push_back(u);
                } else {
                    premises += x + " -" + label + "-> " + y + "  ";
                }
                vars.push_back(y);
            }
            if (!dfa && !wts && o.arity > 0 && rng.chance(0.3))
                premises += "x" + std::to_string(rng.between(1, o.arity)) + " -" + rng.pick(kind.alphabet) + "-/->  ";
            if (wts && o.arity > 0) {
                std::size_t count = rng.between(0, 2);
                for (std::size_t j = 1; j <= count; ++j) {
                    std::string w = "w" + std::to_string(j);
                    premises += "x" + std::to_string(rng.between(1, o.arity)) + " =" + rng.pick(kind.alphabet) + "=> " + w + "  ";
                    totals.push_back(w);
                }
            }
            s += "\n" + premises + (premises.empty() ? "" : "\n");
            if (!totals.empty() && rng.chance(0.7)) {
                std::string rhs = totals.size() > 1 && rng.chance(0.5) ? totals[1] : std::to_string(rng.between(0, 3));
                s += "when " + totals[0] + (rng.chance(0.5) ? " <= " : " < ") + rhs + "\n";
            }
            std::string label = schematic && rng.chance(0.6) ? "$l" : c;
            s += "---\n" + head(o) + " -" + label;
            if (wts) {
                if (factors.empty() || rng.chance(0.3)) factors.push_back(to_string(random_weight(rng, *kind.monoid)));
                std::shuffle(factors.begin(), factors.end(), std::mt19937(static_cast<unsigned>(rng.below(1000))));
                std::string w;
                for (std::size_t i = 0; i < factors.size(); ++i) w += (i ? "*" : "") + factors[i];
                s += "," + w;
            }
            s += "-> " + flat_target(rng, ops, vars) + "\n";
        }
        if (dfa || kind.behavior == Behavior::Nda) s += output_rules(rng, o);
    }
    return s;
}

} // namespace

FunctorKind random_kind(Rng& rng, Behavior b, std::vector<std::string> alphabet) {
    switch (b) {
    case Behavior::Stream: return FunctorKind::stream();
    case Behavior::Dfa: return FunctorKind::dfa(alphabet);
    case Behavior::Lts: return FunctorKind::lts(alphabet);
    case Behavior::Nda: return FunctorKind::nda(alphabet);
    case Behavior::Wts: {
        static const std::vector<std::string> monoids = {"nat-plus", "rat-plus", "min-inf"};
        return FunctorKind::wts(alphabet, *Monoid::from_name(rng.pick(monoids)));
    }
    }
    return FunctorKind::stream();
}

FiniteCoalgebra random_system(Rng& rng, const FunctorKind& kind, std::size_t n) {
    FiniteCoalgebra c;
    c.kind = kind;
    const std::size_t labels = kind.num_labels();
    auto target = [&] { return static_cast<StateId>(rng.below(n)); };
    for (std::size_t i = 0; i < n; ++i) {
        c.names.push_back("s" + std::to_string(i));
        switch (kind.behavior) {
        case Behavior::Stream: c.obs.push_back(StreamStep<StateId>{Rational(static_cast<int>(rng.below(3))), target()}); break;
        case Behavior::Dfa: {
            DfaStep<StateId> d{rng.chance(0.4), {}};
            for (std::size_t l = 0; l < labels; ++l) d.next.push_back(target());
            c.obs.push_back(d);
            break;
        }
        case Behavior::Lts: {
            std::set<std::pair<LabelId, StateId>> moves;
            std::size_t count = rng.below(4);
            for (std::size_t k = 0; k < count; ++k) moves.insert({static_cast<LabelId>(rng.below(labels)), target()});
            c.obs.push_back(LtsStep<StateId>{{moves.begin(), moves.end()}});
            break;
        }
        case Behavior::Nda: {
            NdaStep<StateId> d{rng.chance(0.4), {}};
            for (std::size_t l = 0; l < labels; ++l) {
                std::set<StateId> succ;
                std::size_t count = rng.below(3);
                for (std::size_t k = 0; k < count; ++k) succ.insert(target());
                d.succ.emplace_back(succ.begin(), succ.end());
            }
            c.obs.push_back(d);
            break;
        }
        case Behavior::Wts: {
            WtsStep<StateId> d;
            for (std::size_t l = 0; l < labels; ++l) {
                std::map<StateId, Weight> m;
                std::size_t count = rng.below(3);
                for (std::size_t k = 0; k < count; ++k) {
                    Weight w = random_weight(rng, *kind.monoid);
                    if (w != kind.monoid->unit()) m[target()] = w;
                }
                d.succ.push_back(m);
            }
            c.obs.push_back(d);
            break;
        }
        }
    }
    return c;
}

FiniteCoalgebra inflate(Rng& rng, const FiniteCoalgebra& base) {
    const auto n = static_cast<StateId>(base.size());
    FiniteCoalgebra c;
    c.kind = base.kind;
    auto copy = [&](StateId t) { return rng.chance(0.5) ? t : t + n; };
    for (int round = 0; round < 2; ++round) {
        for (StateId s = 0; s < n; ++s) {
            c.names.push_back(base.names[s] + (round ? "'" : ""));
            std::visit(Overloaded{
                           [&](const StreamStep<StateId>& o) { c.obs.push_back(StreamStep<StateId>{o.out, copy(o.next)}); },
                           [&](const DfaStep<StateId>& o) {
                               DfaStep<StateId> d{o.accept, {}};
                               for (StateId t : o.next) d.next.push_back(copy(t));
                               c.obs.push_back(d);
                           },
                           [&](const LtsStep<StateId>& o) {
                               std::set<std::pair<LabelId, StateId>> moves;
                               for (const auto& [l, t] : o.moves) {
                                   moves.insert({l, copy(t)});
                                   if (rng.chance(0.3)) moves.insert({l, copy(t)});
                               }
                               c.obs.push_back(LtsStep<StateId>{{moves.begin(), moves.end()}});
                           },
                           [&](const NdaStep<StateId>& o) {
                               NdaStep<StateId> d{o.accept, {}};
                               for (const auto& succ : o.succ) {
                                   std::set<StateId> ts;
                                   for (StateId t : succ) {
                                       ts.insert(copy(t));
                                       if (rng.chance(0.3)) ts.insert(copy(t));
                                   }
                                   d.succ.emplace_back(ts.begin(), ts.end());
                               }
                               c.obs.push_back(d);
                           },
                           [&](const WtsStep<StateId>& o) {
                               const Monoid& m = *base.kind.monoid;
                               WtsStep<StateId> d;
                               for (const auto& succ : o.succ) {
                                   std::map<StateId, Weight> out;
                                   for (const auto& [t, w] : succ) {
                                       auto parts = rng.chance(0.4) ? split_weight(rng, m, w) : std::nullopt;
                                       if (parts) {
                                           out[t] = parts->first;
                                           out[t + n] = parts->second;
                                       } else {
                                           out[copy(t)] = w;
                                       }
                                   }
                                   d.succ.push_back(out);
                               }
                               c.obs.push_back(d);
                           },
                       },
                       base.obs[s]);
        }
    }
    return c;
}

Lasso random_lasso(Rng& rng, std::size_t max_prefix, std::size_t max_cycle, int lo, int hi) {
    auto value = [&] { return Rational(lo + static_cast<int>(rng.below(static_cast<std::size_t>(hi - lo + 1)))); };
    Lasso l;
    std::size_t p = rng.below(max_prefix + 1), c = rng.between(1, max_cycle);
    for (std::size_t i = 0; i < p; ++i) l.prefix.push_back(value());
    for (std::size_t i = 0; i < c; ++i) l.cycle.push_back(value());
    return l;
}

std::string random_spec_text(Rng& rng, const FunctorKind& kind) {
    return kind.behavior == Behavior::Stream ? stream_spec(rng) : transition_spec(rng, kind);
}

std::vector<std::vector<bool>> naive_bisimulation(const FiniteCoalgebra& c) {
    const std::size_t n = c.size();
    std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, true));
    auto matched = [&](const std::vector<StateId>& xs, const std::vector<StateId>& ys) {
        for (StateId x : xs)
            if (std::none_of(ys.begin(), ys.end(), [&](StateId y) { return rel[x][y]; })) return false;
        return true;
    };
    auto related = [&](StateId s, StateId t) -> bool {
        const Observation& a = c.obs[s];
        const Observation& b = c.obs[t];
        switch (c.kind.behavior) {
        case Behavior::Stream: {
            const auto& x = std::get<StreamStep<StateId>>(a);
            const auto& y = std::get<StreamStep<StateId>>(b);
            return x.out == y.out && rel[x.next][y.next];
        }
        case Behavior::Dfa: {
            const auto& x = std::get<DfaStep<StateId>>(a);
            const auto& y = std::get<DfaStep<StateId>>(b);
            if (x.accept != y.accept) return false;
            for (std::size_t l = 0; l < x.next.size(); ++l)
                if (!rel[x.next[l]][y.next[l]]) return false;
            return true;
        }
        case Behavior::Lts: {
            const auto& x = std::get<LtsStep<StateId>>(a);
            const auto& y = std::get<LtsStep<StateId>>(b);
            for (LabelId l = 0; l < c.kind.num_labels(); ++l) {
                std::vector<StateId> xs, ys;
                for (const auto& [m, t] : x.moves)
                    if (m == l) xs.push_back(t);
                for (const auto& [m, t] : y.moves)
                    if (m == l) ys.push_back(t);
                if (!matched(xs, ys)) return false;
                for (StateId v : ys)
                    if (std::none_of(xs.begin(), xs.end(), [&](StateId u) { return rel[u][v]; })) return false;
            }
            return true;
        }
        case Behavior::Nda: {
            const auto& x = std::get<NdaStep<StateId>>(a);
            const auto& y = std::get<NdaStep<StateId>>(b);
            if (x.accept != y.accept) return false;
            for (std::size_t l = 0; l < x.succ.size(); ++l) {
                if (!matched(x.succ[l], y.succ[l])) return false;
                for (StateId v : y.succ[l])
                    if (std::none_of(x.succ[l].begin(), x.succ[l].end(), [&](StateId u) { return rel[u][v]; }))
                        return false;
            }
            return true;
        }
        case Behavior::Wts: break;
        }
        throw std::logic_error("naive_bisimulation: weighted systems are not supported");
    };
    for (bool changed = true; changed;) {
        changed = false;
        for (StateId s = 0; s < n; ++s)
            for (StateId t = 0; t < n; ++t)
                if (rel[s][t] && !related(s, t)) rel[s][t] = false, changed = true;
    }
    return rel;
}

std::vector<std::string> depth_descriptions(const FiniteCoalgebra& c, std::size_t depth) {
    std::vector<std::string> desc(c.size(), "");
    for (std::size_t k = 0; k < depth; ++k) {
        // Intern the previous level so descriptions stay short.
        std::map<std::string, std::size_t> ids;
        std::vector<std::string> prev(c.size());
        for (std::size_t s = 0; s < c.size(); ++s)
            prev[s] = "#" + std::to_string(ids.try_emplace(desc[s], ids.size()).first->second);
        std::vector<std::string> next(c.size());
        for (std::size_t s = 0; s < c.size(); ++s) {
            std::string d;
            std::visit(Overloaded{
                           [&](const StreamStep<StateId>& o) { d = to_string(o.out) + ">" + prev[o.next]; },
                           [&](const DfaStep<StateId>& o) {
                               d = o.accept ? "F" : "N";
                               for (StateId t : o.next) d += "," + prev[t];
                           },
                           [&](const LtsStep<StateId>& o) {
                               std::set<std::string> moves;
                               for (const auto& [l, t] : o.moves) moves.insert(c.kind.alphabet[l] + ":" + prev[t]);
                               for (const auto& m : moves) d += m + ";";
                           },
                           [&](const NdaStep<StateId>& o) {
                               d = o.accept ? "F" : "N";
                               for (const auto& succ : o.succ) {
                                   std::set<std::string> ts;
                                   for (StateId t : succ) ts.insert(prev[t]);
                                   d += "|";
                                   for (const auto& t : ts) d += t + ";";
                               }
                           },
                           [&](const WtsStep<StateId>& o) {
                               const Monoid& m = *c.kind.monoid;
                               for (const auto& succ : o.succ) {
                                   std::map<std::string, Weight> agg;
                                   for (const auto& [t, w] : succ) {
                                       auto [it, fresh] = agg.try_emplace(prev[t], w);
                                       if (!fresh) it->second = m.plus(it->second, w);
                                   }
                                   d += "|";
                                   for (const auto& [t, w] : agg)
                                       if (w != m.unit()) d += t + "=" + to_string(w) + ";";
                               }
                           },
                       },
                       c.obs[s]);
            next[s] = d;
        }
        desc = std::move(next);
    }
    return desc;
}

std::set<Word> accepted_words(const PointedCoalgebra& p, std::size_t max_len) {
    const FiniteCoalgebra& c = p.system;
    auto accepting = [&](const std::set<StateId>& cur) {
        for (StateId s : cur) {
            const Observation& o = c.obs[s];
            if (auto d = std::get_if<DfaStep<StateId>>(&o); d && d->accept) return true;
            if (auto d = std::get_if<NdaStep<StateId>>(&o); d && d->accept) return true;
        }
        return false;
    };
    auto step = [&](const std::set<StateId>& cur, LabelId l) {
        std::set<StateId> out;
        for (StateId s : cur) {
            const Observation& o = c.obs[s];
            if (auto d = std::get_if<DfaStep<StateId>>(&o)) out.insert(d->next[l]);
            if (auto d = std::get_if<NdaStep<StateId>>(&o)) out.insert(d->succ[l].begin(), d->succ[l].end());
        }
        return out;
    };
    std::set<Word> out;
    std::vector<Word> frontier{{}};
    for (std::size_t len = 0; len <= max_len; ++len) {
        std::vector<Word> longer;
        for (const Word& w : frontier) {
            std::set<StateId> cur{p.root};
            for (const auto& letter : w) cur = step(cur, *c.kind.label_index(letter));
            if (accepting(cur)) out.insert(w);
            for (const auto& letter : c.kind.alphabet) {
                Word v = w;
                v.push_back(letter);
                longer.push_back(std::move(v));
            }
        }
        frontier = std::move(longer);
    }
    return out;
}

std::set<Word> interleavings(const Word& w, const Word& v) {
    if (w.empty()) return {v};
    if (v.empty()) return {w};
    std::set<Word> out;
    for (const auto& [first, rest_w, rest_v] :
         {std::tuple{w[0], Word(w.begin() + 1, w.end()), v}, std::tuple{v[0], w, Word(v.begin() + 1, v.end())}}) {
        for (const Word& tail : interleavings(rest_w, rest_v)) {
            Word x{first};
            x.insert(x.end(), tail.begin(), tail.end());
            out.insert(std::move(x));
        }
    }
    return out;
}

std::vector<Rational> walk(const PointedCoalgebra& p, std::size_t n) {
    std::vector<Rational> out;
    StateId s = p.root;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& step = std::get<StreamStep<StateId>>(p.system.obs[s]);
        out.push_back(step.out);
        s = step.next;
    }
    return out;
}

std::size_t flat_bound(const sos::Signature& sig, std::size_t n) {
    std::size_t total = n;
    for (std::size_t g = 0; g < sig.size(); ++g) {
        std::size_t term = 1;
        for (std::size_t i = 0; i < sig.at(g).arity; ++i) term *= n;
        total += term;
    }
    return total;
}

} // namespace ratfix::testing
