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
#include <set>

#include "sosdsl_internal.hh"

namespace ratfix::sos {

namespace {

class Checker {
public:
    explicit Checker(const SpecDoc& doc) : doc_(doc) {}

    std::vector<Diagnostic> run() {
        for (const auto& p : doc_.kind.problems()) error({}, p);
        check_signature();
        if (doc_.kind.behavior == Behavior::Stream) {
            for (const auto& r : doc_.stream_rules) check_stream_rule(r);
            check_stream_coverage();
        } else {
            for (const auto& r : doc_.transition_rules) check_transition_rule(r);
            check_vacuous();
            if (doc_.kind.behavior == Behavior::Dfa) check_dfa_determinism();
        }
        for (const auto& r : doc_.output_rules) check_output_rule(r);
        check_output_overlap();
        std::stable_sort(out_.begin(), out_.end(), [](const Diagnostic& a, const Diagnostic& b) {
            return std::pair(a.at.line, a.at.column) < std::pair(b.at.line, b.at.column);
        });
        return std::move(out_);
    }

private:
    void error(SourceSpan at, std::string msg) { out_.push_back({Diagnostic::Severity::Error, at, std::move(msg)}); }
    void warning(SourceSpan at, std::string msg) {
        out_.push_back({Diagnostic::Severity::Warning, at, std::move(msg)});
    }

    void check_signature() {
        std::set<std::string> seen;
        for (const auto& op : doc_.signature.ops)
            if (!seen.insert(op.name).second) error(op.at, "operator '" + op.name + "' declared twice");
    }

    // Operator declared with matching arity; variables pairwise distinct.
    bool check_head(const std::string& op, const std::vector<std::string>& vars, SourceSpan at) {
        auto i = doc_.signature.find(op);
        if (!i) {
            error(at, "undeclared operator '" + op + "'");
            return false;
        }
        if (doc_.signature.at(*i).arity != vars.size()) {
            error(at, "operator '" + op + "' has arity " + std::to_string(doc_.signature.at(*i).arity) + " but the rule gives " +
                          std::to_string(vars.size()) + " arguments");
            return false;
        }
        return true;
    }

    void check_distinct(const std::vector<std::string>& vars, SourceSpan at, const std::string& what) {
        std::set<std::string> seen;
        for (const auto& v : vars)
            if (!v.empty() && !seen.insert(v).second) error(at, what + " '" + v + "' is not distinct");
    }

    void check_target(const FlatTerm& t, const std::vector<std::string>& vars, SourceSpan at) {
        auto known = [&](const std::string& v) { return std::find(vars.begin(), vars.end(), v) != vars.end(); };
        if (!t.is_app) {
            if (!known(t.head)) error(at, "target variable '" + t.head + "' is not bound by the rule");
            return;
        }
        auto op = doc_.signature.find(t.head);
        if (!op) {
            error(at, "target uses undeclared operator '" + t.head + "'");
            return;
        }
        if (doc_.signature.at(*op).arity != t.args.size())
            error(at, "target " + t.to_string() + " does not match the arity of '" + t.head + "'");
        for (const auto& a : t.args)
            if (!known(a)) error(at, "target variable '" + a + "' is not bound by the rule");
    }

    // ---- streams

    void check_stream_rule(const StreamRule& r) {
        if (!check_head(r.op, r.head_vars, r.at)) return;
        for (std::size_t i = 0; i < r.head_vars.size(); ++i)
            if (r.value_vars[i].empty()) error(r.at, "argument '" + r.head_vars[i] + "' has no premise");
        std::vector<std::string> vars = r.head_vars;
        vars.insert(vars.end(), r.tail_vars.begin(), r.tail_vars.end());
        check_distinct(vars, r.at, "variable");
        check_distinct(r.value_vars, r.at, "value variable");
        auto check_expr = [&](const ValueExpr& e) {
            if (!e.valid()) return;
            for (const auto& v : e.variables())
                if (std::find(r.value_vars.begin(), r.value_vars.end(), v) == r.value_vars.end())
                    error(r.at, "'" + v + "' is not a value variable of this rule");
        };
        if (!r.out.valid()) error(r.at, "missing output expression");
        check_expr(r.out);
        for (const auto& c : r.guard.all) {
            check_expr(c.lhs);
            check_expr(c.rhs);
        }
        check_target(r.target, vars, r.at);
    }

    void check_stream_coverage() {
        for (std::size_t op = 0; op < doc_.signature.size(); ++op) {
            const OpDecl& d = doc_.signature.at(op);
            std::vector<const StreamRule*> rules;
            for (const auto& r : doc_.stream_rules)
                if (r.op == d.name) rules.push_back(&r);
            if (rules.empty()) {
                error(d.at, "non-exhaustive trigger: operator '" + d.name + "' has no rules");
                continue;
            }
            for (std::size_t i = 0; i + 1 < rules.size(); ++i) {
                if (rules[i]->guard.otherwise)
                    error(rules[i]->at, "'otherwise' may only guard the last rule of '" + d.name + "'");
                else if (rules[i]->guard.is_catch_all())
                    for (std::size_t j = i + 1; j < rules.size(); ++j)
                        warning(rules[j]->at, "rule for '" + d.name + "' is unreachable after an unguarded rule");
                if (rules[i]->guard.is_catch_all()) break;
            }
            if (!rules.back()->guard.is_catch_all())
                error(rules.back()->at, "non-exhaustive trigger: the last rule of '" + d.name +
                                            "' must be unguarded or guarded by 'otherwise'");
        }
    }

    // ---- transition formats

    void check_label(const LabelTerm& t, SourceSpan at) {
        if (!t.fn.empty() && t.fn != "co" && !doc_.decls.maps.count(t.fn))
            error(at, "undeclared label map '" + t.fn + "'");
        if (t.fn == "co" && doc_.decls.complement.empty())
            error(at, "co(...) used without any complement declaration");
        if (!t.arg_is_var && !doc_.kind.label_index(t.arg))
            error(at, "label '" + t.arg + "' is not in the alphabet");
    }

    void check_transition_rule(const TransitionRule& r) {
        if (!check_head(r.op, r.head_vars, r.at)) return;
        std::vector<std::string> vars = r.head_vars;
        for (const auto& p : r.positive) vars.push_back(p.target);
        check_distinct(vars, r.at, "variable");
        auto is_arg = [&](const std::string& v) {
            return std::find(r.head_vars.begin(), r.head_vars.end(), v) != r.head_vars.end();
        };
        for (const auto& p : r.positive) {
            if (!is_arg(p.arg)) error(r.at, "premise on '" + p.arg + "', which is not an argument of " + r.op);
            check_label(p.label, r.at);
        }
        for (const auto& p : r.negative) {
            if (!is_arg(p.arg)) error(r.at, "premise on '" + p.arg + "', which is not an argument of " + r.op);
            check_label(p.label, r.at);
        }
        for (const auto& p : r.totals) {
            if (!is_arg(p.arg)) error(r.at, "premise on '" + p.arg + "', which is not an argument of " + r.op);
            check_label(p.label, r.at);
        }
        for (const auto& c : r.label_conditions) {
            check_label(c.lhs, r.at);
            if (c.op == LabelCondition::Op::In || c.op == LabelCondition::Op::NotIn) {
                auto s = doc_.decls.sets.find(c.set);
                if (s == doc_.decls.sets.end())
                    error(r.at, "undeclared label set '" + c.set + "'");
                else
                    for (const auto& l : s->second)
                        if (!doc_.kind.label_index(l))
                            error(r.at, "label set '" + c.set + "' contains '" + l + "', which is not in the alphabet");
            } else {
                check_label(c.rhs, r.at);
            }
        }
        check_label(r.label, r.at);
        check_target(r.target, vars, r.at);
        if (doc_.kind.behavior == Behavior::Dfa && !r.negative.empty())
            error(r.at, "negative premises are not part of the dfa format");
        if (doc_.kind.behavior == Behavior::Wts) check_weights(r);
    }

    void check_weights(const TransitionRule& r) {
        const Monoid m = doc_.kind.monoid.value_or(Monoid{});
        std::vector<std::string> premise_vars;
        for (const auto& p : r.positive) premise_vars.push_back(p.weight_var);
        check_distinct(premise_vars, r.at, "weight variable");
        std::set<std::string> total_vars;
        for (const auto& t : r.totals) {
            if (!t.pattern.is_var) continue;
            if (std::count(premise_vars.begin(), premise_vars.end(), t.pattern.var))
                error(r.at, "'" + t.pattern.var + "' names both a transition weight and a total weight");
            total_vars.insert(t.pattern.var);
        }
        auto check_constant = [&](const WeightAtom& a) {
            if (!a.is_var && !m.contains(a.constant))
                error(r.at, "weight " + a.to_string() + " is not in the " + std::string(m.name()) + " carrier");
        };
        for (const auto& t : r.totals) check_constant(t.pattern);
        if (!r.weight) {
            error(r.at, "missing conclusion weight");
        } else {
            for (const auto& f : r.weight->factors) {
                check_constant(f);
                if (f.is_var && !total_vars.count(f.var) &&
                    !std::count(premise_vars.begin(), premise_vars.end(), f.var))
                    error(r.at, "weight variable '" + f.var + "' is not bound by a premise");
            }
            for (const auto& u : premise_vars) {
                auto n = std::count_if(r.weight->factors.begin(), r.weight->factors.end(),
                                       [&](const WeightAtom& a) { return a.is_var && a.var == u; });
                if (n != 1)
                    error(r.at, "conclusion weight must use '" + u +
                                    "' exactly once to be additive in it, found " + std::to_string(n));
            }
        }
        if (!r.weight_guard.empty() && !m.ordered())
            error(r.at, "weight guards need an ordered monoid, " + std::string(m.name()) + " is not");
        for (const auto& c : r.weight_guard) {
            for (const WeightAtom* a : {&c.lhs, &c.rhs}) {
                check_constant(*a);
                if (a->is_var && !total_vars.count(a->var))
                    error(r.at, "weight guards may only compare total weights and constants, not '" + a->var + "'");
            }
        }
    }

    void check_vacuous() {
        std::set<std::size_t> reported;
        for (const auto& c : doc_.index->concrete)
            if (c.vacuous && reported.insert(c.source).second)
                warning(doc_.transition_rules[c.source].at, "vacuous (never triggered): a premise and its negation");
    }

    void check_dfa_determinism() {
        if (doc_.kind.alphabet.empty()) return;
        for (std::size_t op = 0; op < doc_.signature.size(); ++op) {
            for (LabelId l = 0; l < doc_.kind.num_labels(); ++l) {
                const auto& rules = doc_.index->by_op_label[op][l];
                const std::string which = "'" + doc_.signature.at(op).name + "' on label '" + doc_.kind.alphabet[l] + "'";
                if (rules.empty())
                    error(doc_.signature.at(op).at, "no rule for " + which + "; dfa specifications need exactly one");
                else if (rules.size() > 1)
                    error(doc_.transition_rules[doc_.index->concrete[rules[1]].source].at,
                          "more than one rule for " + which + "; dfa specifications need exactly one");
            }
        }
    }

    // ---- output rules

    void check_output_rule(const OutputRule& r) {
        if (!check_head(r.op, r.head_vars, r.at)) return;
        check_distinct(r.head_vars, r.at, "variable");
        check_distinct(r.final_vars, r.at, "final argument");
        for (const auto& v : r.final_vars)
            if (std::find(r.head_vars.begin(), r.head_vars.end(), v) == r.head_vars.end())
                error(r.at, "'" + v + "' is not an argument of " + r.op);
    }

    void check_output_overlap() {
        for (std::size_t op = 0; op < doc_.signature.size(); ++op) {
            const auto& rules = doc_.index->output[op];
            for (std::size_t i = 0; i < rules.size(); ++i) {
                for (std::size_t j = 0; j < i; ++j) {
                    const SourceSpan at = doc_.output_rules[rules[i].source].at;
                    const std::string& name = doc_.signature.at(op).name;
                    if (doc_.output_semantics == OutputSemantics::MentionedOnly) {
                        // Every rule fires when all arguments are final.
                        error(at, "two output rules for '" + name +
                                      "' both trigger when all arguments are final (mentioned-only semantics)");
                        break;
                    }
                    if (rules[i].final_args == rules[j].final_args)
                        error(at, "two output rules for '" + name + "' with the same final arguments");
                }
            }
        }
    }

    const SpecDoc& doc_;
    std::vector<Diagnostic> out_;
};

} // namespace

std::vector<Diagnostic> validate_spec(const SpecDoc& doc) {
    if (!doc.index) throw InternalError("specification without an index");
    return Checker(doc).run();
}

} // namespace ratfix::sos
