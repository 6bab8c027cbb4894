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

#include <sstream>

#include "ratfix/sosdsl.hh"

namespace ratfix::sos {

namespace {

std::string join(const std::vector<std::string>& xs, std::string_view sep) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += sep;
        s += xs[i];
    }
    return s;
}

std::string head(const std::string& op, const std::vector<std::string>& vars) {
    return op + "(" + join(vars, ",") + ")";
}

std::string print_label_condition(const LabelCondition& c) {
    switch (c.op) {
    case LabelCondition::Op::In: return c.lhs.to_string() + " in " + c.set;
    case LabelCondition::Op::NotIn: return c.lhs.to_string() + " notin " + c.set;
    case LabelCondition::Op::Eq: return c.lhs.to_string() + " = " + c.rhs.to_string();
    case LabelCondition::Op::Ne: return c.lhs.to_string() + " != " + c.rhs.to_string();
    }
    return "?";
}

void print_stream_rule(std::ostream& os, const StreamRule& r) {
    std::vector<std::string> premises;
    for (std::size_t i = 0; i < r.head_vars.size(); ++i)
        if (!r.value_vars[i].empty())
            premises.push_back(r.head_vars[i] + " =" + r.value_vars[i] + "-> " + r.tail_vars[i]);
    if (!premises.empty()) os << join(premises, "  ") << "\n";
    if (r.guard.otherwise) {
        os << "otherwise\n";
    } else if (!r.guard.all.empty()) {
        std::vector<std::string> cs;
        for (const auto& c : r.guard.all)
            cs.push_back(c.lhs.to_string() + " " + std::string(to_string(c.op)) + " " + c.rhs.to_string());
        os << "when " << join(cs, ", ") << "\n";
    }
    os << "---\n" << head(r.op, r.head_vars) << " =" << r.out.to_string() << "-> " << r.target.to_string() << "\n";
}

void print_transition_rule(std::ostream& os, const TransitionRule& r) {
    std::vector<std::string> premises;
    for (const auto& p : r.positive)
        premises.push_back(p.arg + " -" + p.label.to_string() + (p.weight_var.empty() ? "" : "," + p.weight_var) +
                           "-> " + p.target);
    for (const auto& p : r.negative) premises.push_back(p.arg + " -" + p.label.to_string() + "-/->");
    for (const auto& p : r.totals)
        premises.push_back(p.arg + " =" + p.label.to_string() + "=> " + p.pattern.to_string());
    if (!premises.empty()) os << join(premises, "  ") << "\n";
    std::vector<std::string> conds;
    for (const auto& c : r.label_conditions) conds.push_back(print_label_condition(c));
    for (const auto& c : r.weight_guard)
        conds.push_back(c.lhs.to_string() + " " + std::string(to_string(c.op)) + " " + c.rhs.to_string());
    if (!conds.empty()) os << "when " << join(conds, ", ") << "\n";
    os << "---\n" << head(r.op, r.head_vars) << " -" << r.label.to_string();
    if (r.weight) os << "," << r.weight->to_string();
    os << "-> " << r.target.to_string() << "\n";
}

} // namespace

std::string pretty_print(const SpecDoc& doc) {
    std::ostringstream os;
    os << "behavior " << behavior_name(doc.kind.behavior);
    if (doc.kind.behavior != Behavior::Stream) os << " labels {" << join(doc.kind.alphabet, ", ") << "}";
    if (doc.kind.monoid) os << " monoid " << doc.kind.monoid->name();
    os << "\n";
    if (doc.output_semantics == OutputSemantics::MentionedOnly) os << "output_semantics mentioned-only\n";
    for (const auto& [a, b] : doc.decls.complement)
        if (a <= b) os << "complement " << a << " " << b << "\n";
    for (const auto& [name, labels] : doc.decls.sets) os << "set " << name << " {" << join(labels, ", ") << "}\n";
    for (const auto& [name, m] : doc.decls.maps) {
        std::vector<std::string> pairs;
        for (const auto& [from, to] : m) pairs.push_back(from + " -> " + to);
        os << "map " << name << " {" << join(pairs, ", ") << "}\n";
    }
    for (const auto& op : doc.signature.ops) os << "op " << op.name << "/" << op.arity << "\n";
    for (const auto& r : doc.stream_rules) {
        os << "\n";
        print_stream_rule(os, r);
    }
    for (const auto& r : doc.transition_rules) {
        os << "\n";
        print_transition_rule(os, r);
    }
    if (!doc.output_rules.empty()) os << "\n";
    for (const auto& r : doc.output_rules)
        os << "output " << head(r.op, r.head_vars) << " final when final {" << join(r.final_vars, ", ") << "}\n";
    return os.str();
}

} // namespace ratfix::sos
