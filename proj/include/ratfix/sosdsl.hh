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

// Rule specifications: parsing, format validation and rule lookup.
//
// A specification declares a behaviour kind, a finite signature and a set
// of rules whose conclusions target either a variable or one operator
// applied to variables. Four rule shapes are supported:
//
//   stream   x1 =r1-> x1'  x2 =r2-> x2'  when r1 < r2  ---  f(x1,x2) =r1+r2-> g(x2,x1')
//   lts/nda  x1 -$l-> y  x2 -b-/->  ---  f(x1,x2) -$l-> f(y,x2)
//   dfa      as lts, without negative premises, one rule per (operator, label)
//   wts      x =a=> w  x =b=> v  x -a,u-> y  when w <= v  ---  f(x) -a,u-> f(y)
//
// plus output rules for nda/dfa:  output f(x1,x2) final when final {x1,x2}
//
// Labels may be schematic ($l) and are expanded over the finite alphabet
// when the specification is indexed; `co(...)` looks up declared
// complements, `m(...)` applies a declared label map.

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ratfix/behaviors.hh"

namespace ratfix::sos {

struct SourceSpan {
    int line = 0;
    int column = 0;
};

struct Diagnostic {
    enum class Severity { Error, Warning };

    Severity severity = Severity::Error;
    SourceSpan at;
    std::string message;

    bool is_error() const { return severity == Severity::Error; }
};

std::string to_string(const Diagnostic& d);
/// True iff no diagnostic is an error.
bool is_bipointed(std::span<const Diagnostic> diagnostics);

// ---------------------------------------------------------------------------
// Value expressions over rationals (stream outputs and guards)

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view to_string(CmpOp op);

template <class T> bool compare(const T& a, CmpOp op, const T& b) {
    switch (op) {
    case CmpOp::Eq: return a == b;
    case CmpOp::Ne: return !(a == b);
    case CmpOp::Lt: return a < b;
    case CmpOp::Le: return a <= b;
    case CmpOp::Gt: return a > b;
    case CmpOp::Ge: return a >= b;
    }
    return false;
}

/// Immutable arithmetic expression (+, -, *, unary -, constants, variables).
/// Variables are resolved to slots of an evaluation environment once the
/// enclosing rule is known.
class ValueExpr {
public:
    enum class Op { Const, Var, Neg, Add, Sub, Mul };

    struct Node {
        Op op = Op::Const;
        Rational value;
        std::string name;
        int slot = -1;
        std::shared_ptr<const Node> lhs, rhs;
    };

    ValueExpr() = default;
    static ValueExpr constant(Rational value);
    static ValueExpr variable(std::string name);
    static ValueExpr unary(Op op, ValueExpr operand);
    static ValueExpr binary(Op op, ValueExpr lhs, ValueExpr rhs);

    bool valid() const { return node_ != nullptr; }
    const Node& node() const { return *node_; }

    /// Copy with every variable bound to its index in `names`; unknown
    /// variables keep slot -1 and are reported by unbound().
    ValueExpr resolved(std::span<const std::string> names) const;
    std::vector<std::string> unbound() const;
    std::vector<std::string> variables() const;

    /// Evaluates with slot i bound to env[i]. Throws InternalError on an unresolved variable.
    Rational eval(std::span<const Rational> env) const;
    std::string to_string() const;

private:
    explicit ValueExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

struct Comparison {
    ValueExpr lhs;
    CmpOp op = CmpOp::Eq;
    ValueExpr rhs;
};

struct Guard {
    bool otherwise = false;
    std::vector<Comparison> all;  ///< conjunction; empty and !otherwise means unguarded

    bool is_catch_all() const { return otherwise || all.empty(); }
    bool holds(std::span<const Rational> env) const;
};

// ---------------------------------------------------------------------------
// Terms

/// Integer index of an operator family instance: `var + offset`, or just
/// `offset` when var is empty. Only the stream GSOS dialect uses these.
struct ParamExpr {
    std::string var;
    long long offset = 0;
};

/// General term over operators and variables.
struct Term {
    std::string head;
    bool is_app = false;
    std::optional<ParamExpr> param;
    std::vector<Term> args;

    static Term var(std::string name) { return {std::move(name), false, std::nullopt, {}}; }
    std::string to_string() const;
    std::size_t size() const;
};

/// A variable, or one operator applied to variables.
struct FlatTerm {
    std::string head;
    bool is_app = false;
    std::vector<std::string> args;

    std::string to_string() const;
};

/// Parses a closed term such as "par(plus(P,Q),R)"; identifiers without
/// argument lists become variables. Throws InputError.
Term parse_term(std::string_view text);

// ---------------------------------------------------------------------------
// Rules

struct OpDecl {
    std::string name;
    std::size_t arity = 0;
    SourceSpan at;
};

struct Signature {
    std::vector<OpDecl> ops;

    std::optional<std::size_t> find(std::string_view name) const;
    const OpDecl& at(std::size_t i) const { return ops.at(i); }
    std::size_t size() const { return ops.size(); }
};

struct StreamRule {
    std::string op;
    std::vector<std::string> head_vars;   ///< x1..xn
    std::vector<std::string> value_vars;  ///< r1..rn, aligned with head_vars ("" if no premise)
    std::vector<std::string> tail_vars;   ///< x1'..xn', aligned with head_vars
    Guard guard;
    ValueExpr out;
    FlatTerm target;
    SourceSpan at;
};

/// Label position in a rule: a label, a label variable, or a declared
/// function (complement "co" or a label map) applied to either.
struct LabelTerm {
    std::string fn;  ///< empty for a plain label or variable
    std::string arg;
    bool arg_is_var = false;

    std::string to_string() const;
};

struct LabelCondition {
    enum class Op { In, NotIn, Eq, Ne };
    LabelTerm lhs;
    Op op = Op::In;
    std::string set;  ///< In / NotIn
    LabelTerm rhs;    ///< Eq / Ne
};

/// Weight variable or monoid constant.
struct WeightAtom {
    bool is_var = false;
    std::string var;
    Weight constant;

    std::string to_string() const;
};

struct WeightComparison {
    WeightAtom lhs;
    CmpOp op = CmpOp::Le;
    WeightAtom rhs;
};

/// Product (the product distributing over the monoid sum) of atoms; empty means one.
struct WeightExpr {
    std::vector<WeightAtom> factors;
    std::string to_string() const;
};

struct PositivePremise {
    std::string arg;
    LabelTerm label;
    std::string weight_var;  ///< weighted systems only
    std::string target;
};

struct NegativePremise {
    std::string arg;
    LabelTerm label;
};

struct TotalWeightPremise {
    std::string arg;
    LabelTerm label;
    WeightAtom pattern;
};

/// Transition rule for lts, nda, dfa and wts specifications.
struct TransitionRule {
    std::string op;
    std::vector<std::string> head_vars;
    std::vector<PositivePremise> positive;
    std::vector<NegativePremise> negative;
    std::vector<TotalWeightPremise> totals;
    std::vector<LabelCondition> label_conditions;
    std::vector<WeightComparison> weight_guard;
    LabelTerm label;
    std::optional<WeightExpr> weight;
    FlatTerm target;
    SourceSpan at;
};

struct OutputRule {
    std::string op;
    std::vector<std::string> head_vars;
    std::vector<std::string> final_vars;
    SourceSpan at;
};

/// How arguments not mentioned in an output rule's premise are treated.
enum class OutputSemantics {
    Exact,          ///< unmentioned arguments must be non-final
    MentionedOnly,  ///< unmentioned arguments are ignored
};

struct LabelDecls {
    std::map<std::string, std::string> complement;  ///< symmetric
    std::map<std::string, std::vector<std::string>> sets;
    std::map<std::string, std::map<std::string, std::string>> maps;

    /// Value of a label function; nullopt where undefined. Label maps are the identity off their domain.
    std::optional<std::string> apply(const std::string& fn, const std::string& label) const;
};

// ---------------------------------------------------------------------------
// Rule instances with labels expanded and variables resolved to slots.
//
// Transition rule slots: 0..n-1 are the operator's arguments, n..n+m-1 the
// targets of the positive premises in order. Weight slots: 0..m-1 are the
// premise weights u_j, then one slot per distinct total-weight variable.
// Stream rule slots: 0..n-1 arguments, n..2n-1 their tails.

struct TargetPattern {
    bool is_app = false;
    std::size_t slot = 0;  ///< variable target
    std::size_t op = 0;    ///< application target
    std::vector<std::size_t> arg_slots;
};

struct WeightOperand {
    bool is_var = false;
    std::size_t slot = 0;
    Weight constant;
};

struct ConcreteRule {
    std::size_t source = 0;  ///< index into SpecDoc::transition_rules
    std::size_t op = 0;
    LabelId label = 0;

    struct Positive {
        std::size_t arg;
        LabelId label;
    };
    struct Negative {
        std::size_t arg;
        LabelId label;
    };
    struct Total {
        std::size_t arg;
        LabelId label;
        WeightOperand pattern;  ///< a variable pattern binds its slot (or must match if already bound)
    };
    struct Cmp {
        WeightOperand lhs;
        CmpOp op;
        WeightOperand rhs;
    };

    std::vector<Positive> positive;
    std::vector<Negative> negative;
    std::vector<Total> totals;
    std::vector<Cmp> guard;
    std::size_t weight_slots = 0;
    std::vector<WeightOperand> weight_factors;
    TargetPattern target;
    bool vacuous = false;
};

struct CompiledStreamRule {
    std::size_t source = 0;  ///< index into SpecDoc::stream_rules
    Guard guard;             ///< value slots 0..n-1
    ValueExpr out;
    TargetPattern target;
};

struct CompiledOutputRule {
    std::size_t source = 0;
    std::vector<bool> final_args;  ///< one flag per argument position
};

struct SpecIndex {
    std::vector<std::vector<CompiledStreamRule>> stream;                 ///< [op] in rule order
    std::vector<ConcreteRule> concrete;                                  ///< all expanded transition rules
    std::vector<std::vector<std::vector<std::size_t>>> by_op_label;      ///< [op][label] -> concrete
    std::vector<std::vector<CompiledOutputRule>> output;                 ///< [op]
};

/// A parsed specification. Immutable once built by parse_spec.
struct SpecDoc {
    FunctorKind kind;
    Signature signature;
    OutputSemantics output_semantics = OutputSemantics::Exact;
    LabelDecls decls;
    std::vector<StreamRule> stream_rules;
    std::vector<TransitionRule> transition_rules;
    std::vector<OutputRule> output_rules;

    /// Rules that could be resolved; unresolvable ones are reported by validate_spec.
    std::shared_ptr<const SpecIndex> index;

    std::size_t rule_count() const { return stream_rules.size() + transition_rules.size() + output_rules.size(); }
};

struct ParseResult {
    std::optional<SpecDoc> doc;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return doc.has_value(); }
};

ParseResult parse_spec(std::string_view text);

/// Format check. Errors make the specification non-bipointed; warnings
/// (vacuous or unreachable rules) do not.
std::vector<Diagnostic> validate_spec(const SpecDoc& doc);

/// parse_spec + validate_spec; throws InputError with every error when the
/// text does not describe a bipointed specification.
SpecDoc load_spec(std::string_view text);

/// Canonical concrete syntax; parse_spec(pretty_print(d)) re-prints identically.
std::string pretty_print(const SpecDoc& doc);

struct StreamSelection {
    std::size_t rule = 0;  ///< index into SpecDoc::stream_rules
    const CompiledStreamRule* compiled = nullptr;
    std::vector<Rational> values;  ///< binding of the rule's value variables
    Rational out;                  ///< output expression evaluated under the binding
};

/// First rule of `op` whose guard holds on `values`. Throws InputError on an
/// arity mismatch and InternalError if no rule matches (impossible after validation).
StreamSelection stream_rule_select(const SpecDoc& doc, std::size_t op, std::span<const Rational> values);
StreamSelection stream_rule_select(const SpecDoc& doc, std::string_view op, std::span<const Rational> values);

} // namespace ratfix::sos
