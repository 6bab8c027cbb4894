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

#include "ratfix/sosdsl.hh"

namespace ratfix::sos {

std::string to_string(const Diagnostic& d) {
    return std::to_string(d.at.line) + ":" + std::to_string(d.at.column) + ": " +
           (d.is_error() ? "error: " : "warning: ") + d.message;
}

bool is_bipointed(std::span<const Diagnostic> diagnostics) {
    return std::none_of(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& d) { return d.is_error(); });
}

std::string_view to_string(CmpOp op) {
    switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
    }
    return "?";
}

ValueExpr ValueExpr::constant(Rational value) {
    auto n = std::make_shared<Node>();
    n->op = Op::Const;
    n->value = std::move(value);
    return ValueExpr(std::move(n));
}

ValueExpr ValueExpr::variable(std::string name) {
    auto n = std::make_shared<Node>();
    n->op = Op::Var;
    n->name = std::move(name);
    return ValueExpr(std::move(n));
}

ValueExpr ValueExpr::unary(Op op, ValueExpr operand) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(operand.node_);
    return ValueExpr(std::move(n));
}

ValueExpr ValueExpr::binary(Op op, ValueExpr lhs, ValueExpr rhs) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(lhs.node_);
    n->rhs = std::move(rhs.node_);
    return ValueExpr(std::move(n));
}

namespace {

std::shared_ptr<const ValueExpr::Node> resolve(const std::shared_ptr<const ValueExpr::Node>& n,
                                               std::span<const std::string> names) {
    if (!n) return n;
    auto copy = std::make_shared<ValueExpr::Node>(*n);
    if (n->op == ValueExpr::Op::Var) {
        copy->slot = -1;
        for (std::size_t i = 0; i < names.size(); ++i)
            if (!names[i].empty() && names[i] == n->name) copy->slot = static_cast<int>(i);
    }
    copy->lhs = resolve(n->lhs, names);
    copy->rhs = resolve(n->rhs, names);
    return copy;
}

void collect(const ValueExpr::Node* n, bool only_unbound, std::vector<std::string>& out) {
    if (!n) return;
    if (n->op == ValueExpr::Op::Var && (!only_unbound || n->slot < 0) &&
        std::find(out.begin(), out.end(), n->name) == out.end())
        out.push_back(n->name);
    collect(n->lhs.get(), only_unbound, out);
    collect(n->rhs.get(), only_unbound, out);
}

Rational eval_node(const ValueExpr::Node& n, std::span<const Rational> env) {
    switch (n.op) {
    case ValueExpr::Op::Const: return n.value;
    case ValueExpr::Op::Var:
        if (n.slot < 0 || static_cast<std::size_t>(n.slot) >= env.size())
            throw InternalError("unresolved value variable '" + n.name + "'");
        return env[static_cast<std::size_t>(n.slot)];
    case ValueExpr::Op::Neg: return -eval_node(*n.lhs, env);
    case ValueExpr::Op::Add: return eval_node(*n.lhs, env) + eval_node(*n.rhs, env);
    case ValueExpr::Op::Sub: return eval_node(*n.lhs, env) - eval_node(*n.rhs, env);
    case ValueExpr::Op::Mul: return eval_node(*n.lhs, env) * eval_node(*n.rhs, env);
    }
    throw InternalError("bad value expression node");
}

int precedence(ValueExpr::Op op) {
    switch (op) {
    case ValueExpr::Op::Add:
    case ValueExpr::Op::Sub: return 1;
    case ValueExpr::Op::Mul: return 2;
    case ValueExpr::Op::Neg: return 3;
    default: return 4;
    }
}

std::string print_node(const ValueExpr::Node& n) {
    auto wrap = [&](const ValueExpr::Node& child, int min_prec) {
        std::string s = print_node(child);
        return precedence(child.op) < min_prec ? "(" + s + ")" : s;
    };
    switch (n.op) {
    case ValueExpr::Op::Const: {
        std::string s = ratfix::to_string(n.value);
        return n.value < 0 ? "(" + s + ")" : s;
    }
    case ValueExpr::Op::Var: return n.name;
    case ValueExpr::Op::Neg:
        // "-3" would read back as a negative constant.
        if (n.lhs->op == ValueExpr::Op::Const && n.lhs->value >= 0) return "-(" + print_node(*n.lhs) + ")";
        return "-" + wrap(*n.lhs, 4);
    case ValueExpr::Op::Add: return wrap(*n.lhs, 1) + "+" + wrap(*n.rhs, 2);
    case ValueExpr::Op::Sub: return wrap(*n.lhs, 1) + "-" + wrap(*n.rhs, 2);
    case ValueExpr::Op::Mul: return wrap(*n.lhs, 2) + "*" + wrap(*n.rhs, 3);
    }
    return "?";
}

} // namespace

ValueExpr ValueExpr::resolved(std::span<const std::string> names) const { return ValueExpr(resolve(node_, names)); }

std::vector<std::string> ValueExpr::unbound() const {
    std::vector<std::string> out;
    collect(node_.get(), true, out);
    return out;
}

std::vector<std::string> ValueExpr::variables() const {
    std::vector<std::string> out;
    collect(node_.get(), false, out);
    return out;
}

Rational ValueExpr::eval(std::span<const Rational> env) const {
    if (!node_) throw InternalError("empty value expression");
    return eval_node(*node_, env);
}

std::string ValueExpr::to_string() const { return node_ ? print_node(*node_) : std::string("<empty>"); }

bool Guard::holds(std::span<const Rational> env) const {
    if (otherwise) return true;
    return std::all_of(all.begin(), all.end(),
                       [&](const Comparison& c) { return compare(c.lhs.eval(env), c.op, c.rhs.eval(env)); });
}

std::string Term::to_string() const {
    std::string s = head;
    if (param) {
        s += "[";
        if (param->var.empty())
            s += std::to_string(param->offset);
        else
            s += param->var + (param->offset > 0   ? "+" + std::to_string(param->offset)
                               : param->offset < 0 ? std::to_string(param->offset)
                                                   : "");
        s += "]";
    }
    if (is_app) {
        s += "(";
        for (std::size_t i = 0; i < args.size(); ++i) s += (i ? "," : "") + args[i].to_string();
        s += ")";
    }
    return s;
}

std::size_t Term::size() const {
    std::size_t n = 1;
    for (const auto& a : args) n += a.size();
    return n;
}

std::string FlatTerm::to_string() const {
    if (!is_app) return head;
    std::string s = head + "(";
    for (std::size_t i = 0; i < args.size(); ++i) s += (i ? "," : "") + args[i];
    return s + ")";
}

std::optional<std::size_t> Signature::find(std::string_view name) const {
    for (std::size_t i = 0; i < ops.size(); ++i)
        if (ops[i].name == name) return i;
    return std::nullopt;
}

std::string LabelTerm::to_string() const {
    std::string a = (arg_is_var ? "$" : "") + arg;
    return fn.empty() ? a : fn + "(" + a + ")";
}

std::string WeightAtom::to_string() const {
    if (is_var) return var;
    std::string s = ratfix::to_string(constant);
    return s;
}

std::string WeightExpr::to_string() const {
    if (factors.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < factors.size(); ++i) s += (i ? "*" : "") + factors[i].to_string();
    return s;
}

std::optional<std::string> LabelDecls::apply(const std::string& fn, const std::string& label) const {
    if (fn.empty()) return label;
    if (fn == "co") {
        auto it = complement.find(label);
        if (it == complement.end()) return std::nullopt;
        return it->second;
    }
    auto m = maps.find(fn);
    if (m == maps.end()) return std::nullopt;
    auto it = m->second.find(label);
    return it == m->second.end() ? label : it->second;
}

} // namespace ratfix::sos
