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

#include <algorithm>

#include "sosdsl_internal.hh"

namespace ratfix::sos::detail {

namespace {

std::optional<std::size_t> slot_of(const std::vector<std::string>& names, const std::string& v) {
    if (v.empty()) return std::nullopt;
    auto it = std::find(names.begin(), names.end(), v);
    if (it == names.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names.begin());
}

std::optional<TargetPattern> resolve_target(const FlatTerm& t, const std::vector<std::string>& vars,
                                            const Signature& sig) {
    TargetPattern p;
    if (!t.is_app) {
        auto s = slot_of(vars, t.head);
        if (!s) return std::nullopt;
        p.slot = *s;
        return p;
    }
    auto op = sig.find(t.head);
    if (!op || sig.at(*op).arity != t.args.size()) return std::nullopt;
    p.is_app = true;
    p.op = *op;
    for (const auto& a : t.args) {
        auto s = slot_of(vars, a);
        if (!s) return std::nullopt;
        p.arg_slots.push_back(*s);
    }
    return p;
}

void add_var(std::vector<std::string>& vars, const LabelTerm& t) {
    if (t.arg_is_var && std::find(vars.begin(), vars.end(), t.arg) == vars.end()) vars.push_back(t.arg);
}

} // namespace

std::vector<std::string> label_variables(const TransitionRule& r) {
    std::vector<std::string> vars;
    for (const auto& p : r.positive) add_var(vars, p.label);
    for (const auto& p : r.negative) add_var(vars, p.label);
    for (const auto& p : r.totals) add_var(vars, p.label);
    for (const auto& c : r.label_conditions) {
        add_var(vars, c.lhs);
        if (c.op == LabelCondition::Op::Eq || c.op == LabelCondition::Op::Ne) add_var(vars, c.rhs);
    }
    add_var(vars, r.label);
    return vars;
}

std::optional<std::string> eval_label(const LabelTerm& t, const std::vector<std::string>& vars,
                                      const std::vector<std::string>& values, const LabelDecls& decls) {
    std::string arg = t.arg;
    if (t.arg_is_var) {
        auto s = slot_of(vars, t.arg);
        if (!s) return std::nullopt;
        arg = values[*s];
    }
    return decls.apply(t.fn, arg);
}

SpecIndex build_index(const SpecDoc& doc) {
    SpecIndex idx;
    const Signature& sig = doc.signature;
    const std::size_t nops = sig.size();
    const std::size_t nlabels = doc.kind.num_labels();
    idx.stream.resize(nops);
    idx.by_op_label.assign(nops, std::vector<std::vector<std::size_t>>(nlabels));
    idx.output.resize(nops);

    for (std::size_t i = 0; i < doc.stream_rules.size(); ++i) {
        const StreamRule& r = doc.stream_rules[i];
        auto op = sig.find(r.op);
        if (!op || sig.at(*op).arity != r.head_vars.size()) continue;
        std::vector<std::string> vars = r.head_vars;
        vars.insert(vars.end(), r.tail_vars.begin(), r.tail_vars.end());
        auto target = resolve_target(r.target, vars, sig);
        if (!target || !r.out.valid()) continue;
        CompiledStreamRule c;
        c.source = i;
        c.out = r.out.resolved(r.value_vars);
        c.guard.otherwise = r.guard.otherwise;
        for (const auto& cmp : r.guard.all)
            c.guard.all.push_back({cmp.lhs.resolved(r.value_vars), cmp.op, cmp.rhs.resolved(r.value_vars)});
        bool unbound = !c.out.unbound().empty();
        for (const auto& cmp : c.guard.all) unbound = unbound || !cmp.lhs.unbound().empty() || !cmp.rhs.unbound().empty();
        if (unbound) continue;
        c.target = std::move(*target);
        idx.stream[*op].push_back(std::move(c));
    }

    for (std::size_t i = 0; i < doc.transition_rules.size(); ++i) {
        const TransitionRule& r = doc.transition_rules[i];
        auto op = sig.find(r.op);
        if (!op || sig.at(*op).arity != r.head_vars.size()) continue;
        const std::size_t n = r.head_vars.size();

        std::vector<std::string> vars = r.head_vars;
        for (const auto& p : r.positive) vars.push_back(p.target);
        auto target = resolve_target(r.target, vars, sig);
        if (!target) continue;

        // Weight slots: premise weights first, then distinct total-weight variables.
        std::vector<std::string> wvars;
        for (const auto& p : r.positive) wvars.push_back(p.weight_var);
        for (const auto& t : r.totals)
            if (t.pattern.is_var && !slot_of(wvars, t.pattern.var)) wvars.push_back(t.pattern.var);
        auto operand = [&](const WeightAtom& a) -> std::optional<WeightOperand> {
            if (!a.is_var) return WeightOperand{false, 0, a.constant};
            auto s = slot_of(wvars, a.var);
            if (!s) return std::nullopt;
            return WeightOperand{true, *s, {}};
        };

        const std::vector<std::string> lvars = label_variables(r);
        std::vector<std::size_t> choice(lvars.size(), 0);
        if (!lvars.empty() && nlabels == 0) continue;
        for (;;) {
            std::vector<std::string> values;
            for (std::size_t k = 0; k < lvars.size(); ++k) values.push_back(doc.kind.alphabet[choice[k]]);
            auto label_id = [&](const LabelTerm& t) -> std::optional<LabelId> {
                auto l = eval_label(t, lvars, values, doc.decls);
                if (!l) return std::nullopt;
                return doc.kind.label_index(*l);
            };

            ConcreteRule c;
            c.source = i;
            c.op = *op;
            bool ok = true;
            if (auto l = label_id(r.label))
                c.label = *l;
            else
                ok = false;
            for (std::size_t j = 0; ok && j < r.positive.size(); ++j) {
                auto arg = slot_of(r.head_vars, r.positive[j].arg);
                auto l = label_id(r.positive[j].label);
                if (!arg || !l) ok = false;
                else c.positive.push_back({*arg, *l});
            }
            for (std::size_t j = 0; ok && j < r.negative.size(); ++j) {
                auto arg = slot_of(r.head_vars, r.negative[j].arg);
                auto l = label_id(r.negative[j].label);
                if (!arg || !l) ok = false;
                else c.negative.push_back({*arg, *l});
            }
            for (std::size_t j = 0; ok && j < r.totals.size(); ++j) {
                auto arg = slot_of(r.head_vars, r.totals[j].arg);
                auto l = label_id(r.totals[j].label);
                auto pat = operand(r.totals[j].pattern);
                if (!arg || !l || !pat) ok = false;
                else c.totals.push_back({*arg, *l, *pat});
            }
            for (const auto& cond : r.label_conditions) {
                if (!ok) break;
                auto lhs = eval_label(cond.lhs, lvars, values, doc.decls);
                switch (cond.op) {
                case LabelCondition::Op::In:
                case LabelCondition::Op::NotIn: {
                    bool member = false;
                    if (auto s = doc.decls.sets.find(cond.set); lhs && s != doc.decls.sets.end())
                        member = std::count(s->second.begin(), s->second.end(), *lhs) > 0;
                    // An undefined label belongs to no set.
                    ok = (cond.op == LabelCondition::Op::In) == member;
                    break;
                }
                case LabelCondition::Op::Eq:
                case LabelCondition::Op::Ne: {
                    auto rhs = eval_label(cond.rhs, lvars, values, doc.decls);
                    bool equal = lhs && rhs && *lhs == *rhs;
                    ok = (cond.op == LabelCondition::Op::Eq) == equal;
                    break;
                }
                }
            }
            for (std::size_t j = 0; ok && j < r.weight_guard.size(); ++j) {
                auto lhs = operand(r.weight_guard[j].lhs);
                auto rhs = operand(r.weight_guard[j].rhs);
                if (!lhs || !rhs) ok = false;
                else c.guard.push_back({*lhs, r.weight_guard[j].op, *rhs});
            }
            if (ok && r.weight) {
                for (const auto& f : r.weight->factors) {
                    auto o = operand(f);
                    if (!o) {
                        ok = false;
                        break;
                    }
                    c.weight_factors.push_back(*o);
                }
            }
            if (ok) {
                c.weight_slots = wvars.size();
                c.target = *target;
                for (const auto& p : c.positive)
                    for (const auto& q : c.negative)
                        if (p.arg == q.arg && p.label == q.label) c.vacuous = true;
                idx.by_op_label[*op][c.label].push_back(idx.concrete.size());
                idx.concrete.push_back(std::move(c));
            }

            std::size_t k = 0;
            while (k < choice.size() && ++choice[k] == nlabels) choice[k++] = 0;
            if (k == choice.size()) break;
        }
        (void)n;
    }

    for (std::size_t i = 0; i < doc.output_rules.size(); ++i) {
        const OutputRule& r = doc.output_rules[i];
        auto op = sig.find(r.op);
        if (!op || sig.at(*op).arity != r.head_vars.size()) continue;
        CompiledOutputRule c;
        c.source = i;
        c.final_args.assign(r.head_vars.size(), false);
        bool ok = true;
        for (const auto& v : r.final_vars) {
            auto s = slot_of(r.head_vars, v);
            if (!s) ok = false;
            else c.final_args[*s] = true;
        }
        if (ok) idx.output[*op].push_back(std::move(c));
    }
    return idx;
}

} // namespace ratfix::sos::detail

namespace ratfix::sos {

SpecDoc load_spec(std::string_view text) {
    ParseResult res = parse_spec(text);
    std::string msg;
    if (!res.ok()) {
        for (const auto& d : res.diagnostics) msg += "\n  " + to_string(d);
        throw InputError("specification does not parse:" + msg);
    }
    auto diags = validate_spec(*res.doc);
    if (!is_bipointed(diags)) {
        for (const auto& d : diags)
            if (d.is_error()) msg += "\n  " + to_string(d);
        throw InputError("specification is not bipointed:" + msg);
    }
    return std::move(*res.doc);
}

StreamSelection stream_rule_select(const SpecDoc& doc, std::size_t op, std::span<const Rational> values) {
    if (doc.kind.behavior != Behavior::Stream) throw InputError("stream_rule_select on a non-stream specification");
    if (op >= doc.signature.size()) throw InputError("unknown operator index");
    if (values.size() != doc.signature.at(op).arity)
        throw InputError("operator " + doc.signature.at(op).name + " has arity " +
                         std::to_string(doc.signature.at(op).arity) + ", got " + std::to_string(values.size()) +
                         " values");
    for (const auto& rule : doc.index->stream[op]) {
        if (!rule.guard.holds(values)) continue;
        StreamSelection sel;
        sel.rule = rule.source;
        sel.compiled = &rule;
        sel.values.assign(values.begin(), values.end());
        sel.out = rule.out.eval(values);
        return sel;
    }
    throw InternalError("no stream rule for " + doc.signature.at(op).name + " is triggered");
}

StreamSelection stream_rule_select(const SpecDoc& doc, std::string_view op, std::span<const Rational> values) {
    auto i = doc.signature.find(op);
    if (!i) throw InputError("unknown operator '" + std::string(op) + "'");
    return stream_rule_select(doc, *i, values);
}

} // namespace ratfix::sos
