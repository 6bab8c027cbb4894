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

// Lexer and recursive-descent parser for rule specifications, the stream
// GSOS dialect, and closed terms.

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

#include "ratfix/sosdsl.hh"
#include "ratfix/streams.hh"
#include "sosdsl_internal.hh"

namespace ratfix::sos {

namespace {

enum class Tok { Ident, LabelVar, Number, Punct, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    SourceSpan at;
    std::size_t begin = 0, end = 0;
};

struct ParseError {
    SourceSpan at;
    std::string message;
};

// Longest match first.
constexpr std::array<std::string_view, 23> kPuncts = {
    "---", "-/->", "->", "=>", "<=", ">=", "!=", "-", "=", "<", ">", "(",
    ")",   "{",    "}",  "[",  "]",  ",",  "+",  "*", "/", "|", ";"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t k) {
        for (std::size_t j = 0; j < k; ++j) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        Token t;
        t.at = {line, col};
        t.begin = i;
        if (ident_start(c) || (c == '$' && i + 1 < src.size() && ident_start(src[i + 1]))) {
            std::size_t j = i + (c == '$' ? 1 : 0);
            while (j < src.size() && ident_char(src[j])) ++j;
            t.kind = c == '$' ? Tok::LabelVar : Tok::Ident;
            t.text = std::string(src.substr(c == '$' ? i + 1 : i, j - i - (c == '$' ? 1 : 0)));
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            t.kind = Tok::Number;
            t.text = std::string(src.substr(i, j - i));
            advance(j - i);
        } else {
            bool matched = false;
            for (auto p : kPuncts) {
                if (src.substr(i, p.size()) == p) {
                    t.kind = Tok::Punct;
                    t.text = std::string(p);
                    advance(p.size());
                    matched = true;
                    break;
                }
            }
            if (!matched) throw ParseError{t.at, "unexpected character '" + std::string(1, c) + "'"};
        }
        t.end = i;
        out.push_back(std::move(t));
    }
    Token end;
    end.kind = Tok::End;
    end.at = {line, col};
    end.begin = end.end = src.size();
    out.push_back(end);
    return out;
}

const std::set<std::string, std::less<>> kReserved = {
    "behavior", "op", "output", "output_semantics", "complement", "set", "map", "when",
    "otherwise", "final", "in", "notin", "labels", "co", "inf", "monoid"};

std::string describe(const Token& t) {
    switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::LabelVar: return "'$" + t.text + "'";
    default: return "'" + t.text + "'";
    }
}

struct RawStreamRule {
    std::string op;
    std::string param_var;
    std::vector<std::string> head_vars, value_vars, tail_vars;
    Guard guard;
    ValueExpr out;
    Term target;
    SourceSpan at;
};

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(lex(src)) {}

    SpecDoc parse_spec();
    GsosStreamSpec parse_gsos();
    static void check_gsos(const GsosStreamSpec& spec);
    Term parse_closed_term() {
        Term t = parse_term();
        if (peek().kind != Tok::End) fail(peek(), "expected end of term");
        return t;
    }

private:
    // -- token helpers
    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    const Token& next() {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }
    bool at_punct(std::string_view p, std::size_t k = 0) const {
        return peek(k).kind == Tok::Punct && peek(k).text == p;
    }
    bool at_word(std::string_view w, std::size_t k = 0) const {
        return peek(k).kind == Tok::Ident && peek(k).text == w;
    }
    [[noreturn]] void fail(const Token& t, const std::string& msg) const {
        throw ParseError{t.at, msg + " (found " + describe(t) + ")"};
    }
    void expect_punct(std::string_view p, std::string_view context) {
        if (!at_punct(p)) fail(peek(), "expected '" + std::string(p) + "' " + std::string(context));
        next();
    }
    void expect_word(std::string_view w, std::string_view context) {
        if (!at_word(w)) fail(peek(), "expected '" + std::string(w) + "' " + std::string(context));
        next();
    }
    std::string expect_ident(std::string_view what) {
        if (peek().kind != Tok::Ident || kReserved.count(peek().text))
            fail(peek(), "expected " + std::string(what));
        return next().text;
    }
    std::size_t expect_nat(std::string_view what) {
        if (peek().kind != Tok::Number) fail(peek(), "expected " + std::string(what));
        const Token& t = next();
        if (t.text.size() > 9) fail(t, "number too large for " + std::string(what));
        return static_cast<std::size_t>(std::stoul(t.text));
    }
    /// `ident(-ident)*` written without spaces, as in "min-inf".
    std::string dashed_word(std::string_view what) {
        if (peek().kind != Tok::Ident) fail(peek(), "expected " + std::string(what));
        const Token& first = next();
        std::string w = first.text;
        std::size_t end = first.end;
        while (at_punct("-") && peek().begin == end && peek(1).kind == Tok::Ident && peek(1).begin == peek().end) {
            next();
            const Token& part = next();
            w += "-" + part.text;
            end = part.end;
        }
        return w;
    }

    // -- shared pieces
    std::vector<std::string> ident_list(std::string_view what);
    Rational rational_literal();
    ValueExpr value_sum();
    ValueExpr value_product();
    ValueExpr value_unary();
    ValueExpr value_primary();
    CmpOp cmp_op();
    Guard stream_guard();
    Term parse_term();
    ParamExpr param_expr();
    LabelTerm label_term();
    WeightAtom weight_atom();
    FlatTerm flatten(const Term& t, const Token& where) const;

    void parse_header(SpecDoc& doc, bool gsos);
    bool parse_declaration(SpecDoc& doc, GsosStreamSpec* gsos);
    RawStreamRule stream_rule(bool gsos);
    TransitionRule transition_rule(const SpecDoc& doc);
    OutputRule output_rule();

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

std::vector<std::string> Parser::ident_list(std::string_view what) {
    std::vector<std::string> out;
    expect_punct("{", "to open " + std::string(what));
    if (!at_punct("}")) {
        out.push_back(expect_ident(what));
        while (at_punct(",")) {
            next();
            out.push_back(expect_ident(what));
        }
    }
    expect_punct("}", "to close " + std::string(what));
    return out;
}

Rational Parser::rational_literal() {
    std::string text = next().text;
    if (at_punct("/") && peek(1).kind == Tok::Number) {
        next();
        text += "/" + next().text;
    }
    try {
        return parse_rational(text);
    } catch (const InputError& e) {
        throw ParseError{peek().at, e.what()};
    }
}

ValueExpr Parser::value_sum() {
    ValueExpr e = value_product();
    while (at_punct("+") || at_punct("-")) {
        auto op = next().text == "+" ? ValueExpr::Op::Add : ValueExpr::Op::Sub;
        e = ValueExpr::binary(op, e, value_product());
    }
    return e;
}

ValueExpr Parser::value_product() {
    ValueExpr e = value_unary();
    while (at_punct("*")) {
        next();
        e = ValueExpr::binary(ValueExpr::Op::Mul, e, value_unary());
    }
    return e;
}

ValueExpr Parser::value_unary() {
    if (at_punct("-")) {
        next();
        if (peek().kind == Tok::Number) return ValueExpr::constant(-rational_literal());
        return ValueExpr::unary(ValueExpr::Op::Neg, value_unary());
    }
    return value_primary();
}

ValueExpr Parser::value_primary() {
    if (peek().kind == Tok::Number) return ValueExpr::constant(rational_literal());
    if (peek().kind == Tok::Ident && !kReserved.count(peek().text)) return ValueExpr::variable(next().text);
    if (at_punct("(")) {
        next();
        ValueExpr e = value_sum();
        expect_punct(")", "to close the parenthesized expression");
        return e;
    }
    fail(peek(), "expected a value expression (number, value variable or '(')");
}

CmpOp Parser::cmp_op() {
    static const std::array<std::pair<std::string_view, CmpOp>, 6> ops = {
        {{"=", CmpOp::Eq}, {"!=", CmpOp::Ne}, {"<", CmpOp::Lt}, {"<=", CmpOp::Le}, {">", CmpOp::Gt}, {">=", CmpOp::Ge}}};
    for (auto [s, op] : ops) {
        if (at_punct(s)) {
            next();
            return op;
        }
    }
    fail(peek(), "expected a comparison (=, !=, <, <=, >, >=)");
}

Guard Parser::stream_guard() {
    Guard g;
    if (at_word("otherwise")) {
        next();
        g.otherwise = true;
        return g;
    }
    if (!at_word("when")) return g;
    next();
    do {
        if (at_punct(",")) next();
        Comparison c;
        c.lhs = value_sum();
        c.op = cmp_op();
        c.rhs = value_sum();
        g.all.push_back(std::move(c));
    } while (at_punct(","));
    return g;
}

ParamExpr Parser::param_expr() {
    ParamExpr p;
    if (peek().kind == Tok::Number) {
        p.offset = static_cast<long long>(expect_nat("a family index"));
        return p;
    }
    p.var = expect_ident("a family index variable or number");
    if (at_punct("+") || at_punct("-")) {
        bool minus = next().text == "-";
        long long k = static_cast<long long>(expect_nat("an index offset"));
        p.offset = minus ? -k : k;
    }
    return p;
}

Term Parser::parse_term() {
    Term t;
    t.head = expect_ident("an operator or variable");
    if (at_punct("[")) {
        next();
        t.param = param_expr();
        expect_punct("]", "to close the family index");
        t.is_app = true;
    }
    if (at_punct("(")) {
        next();
        t.is_app = true;
        if (!at_punct(")")) {
            t.args.push_back(parse_term());
            while (at_punct(",")) {
                next();
                t.args.push_back(parse_term());
            }
        }
        expect_punct(")", "to close the argument list");
    }
    return t;
}

FlatTerm Parser::flatten(const Term& t, const Token& where) const {
    FlatTerm f{t.head, t.is_app, {}};
    if (t.param) fail(where, "operator families are only available in the stream GSOS dialect");
    for (const auto& a : t.args) {
        if (a.is_app) fail(where, "rule target must be flat: a variable or one operator applied to variables");
        f.args.push_back(a.head);
    }
    return f;
}

LabelTerm Parser::label_term() {
    LabelTerm l;
    if (peek().kind == Tok::LabelVar) {
        l.arg = next().text;
        l.arg_is_var = true;
        return l;
    }
    if (peek().kind != Tok::Ident) fail(peek(), "expected a label, a label variable ($x) or co(...)");
    std::string head = next().text;
    if (at_punct("(")) {
        next();
        l.fn = head;
        if (peek().kind == Tok::LabelVar) {
            l.arg = next().text;
            l.arg_is_var = true;
        } else {
            l.arg = expect_ident("a label or label variable");
        }
        expect_punct(")", "to close the label function application");
        return l;
    }
    if (kReserved.count(head)) fail(toks_[pos_ - 1], "expected a label");
    l.arg = head;
    return l;
}

WeightAtom Parser::weight_atom() {
    WeightAtom a;
    if (at_word("inf")) {
        next();
        a.constant = Weight::infinity();
        return a;
    }
    if (at_punct("-") && peek(1).kind == Tok::Number) {
        next();
        a.constant = Weight(Rational(-rational_literal()));
        return a;
    }
    if (peek().kind == Tok::Number) {
        a.constant = Weight(rational_literal());
        return a;
    }
    a.is_var = true;
    a.var = expect_ident("a weight variable or constant");
    return a;
}

void Parser::parse_header(SpecDoc& doc, bool gsos) {
    if (peek().kind == Tok::End) fail(peek(), "missing 'behavior' header");
    if (!at_word("behavior")) fail(peek(), "missing 'behavior' header");
    next();
    const Token& kt = peek();
    std::string kind = kt.kind == Tok::Ident ? next().text : "";
    auto behavior = behavior_from_name(kind);
    if (!behavior) fail(kt, "unknown behaviour kind; expected stream, dfa, lts, nda or wts");
    doc.kind.behavior = *behavior;
    if (gsos && *behavior != Behavior::Stream) fail(kt, "the GSOS dialect is for stream specifications only");
    if (*behavior == Behavior::Stream) {
        if (at_word("gsos")) {
            if (!gsos)
                fail(peek(), "GSOS-dialect specifications are not bipointed; run them with the unfold command");
            next();
        }
        return;
    }
    expect_word("labels", "after the behaviour kind");
    doc.kind.alphabet = ident_list("the label alphabet");
    if (*behavior == Behavior::Wts) {
        if (at_word("monoid")) next();
        const Token& mt = peek();
        auto name = dashed_word("a monoid name");
        doc.kind.monoid = Monoid::from_name(name);
        if (!doc.kind.monoid) fail(mt, "unknown monoid '" + name + "'; expected nat-plus, rat-plus or min-inf");
    }
}

bool Parser::parse_declaration(SpecDoc& doc, GsosStreamSpec* gsos) {
    const Token& start = peek();
    if (at_word("op")) {
        next();
        OpDecl d;
        d.at = start.at;
        d.name = expect_ident("an operator name");
        bool indexed = false;
        if (at_punct("[")) {
            if (!gsos) fail(peek(), "operator families are only available in the stream GSOS dialect");
            next();
            expect_ident("a family index variable");
            expect_punct("]", "to close the family index");
            indexed = true;
        }
        expect_punct("/", "between operator name and arity");
        d.arity = expect_nat("an arity");
        if (gsos) gsos->ops.push_back({d.name, d.arity, indexed, d.at});
        doc.signature.ops.push_back(std::move(d));
        return true;
    }
    if (at_word("output_semantics")) {
        next();
        const Token& wt = peek();
        auto w = dashed_word("exact or mentioned-only");
        if (w == "exact")
            doc.output_semantics = OutputSemantics::Exact;
        else if (w == "mentioned-only")
            doc.output_semantics = OutputSemantics::MentionedOnly;
        else
            fail(wt, "expected exact or mentioned-only");
        return true;
    }
    if (at_word("complement")) {
        next();
        std::string a = expect_ident("a label");
        std::string b = expect_ident("its complement label");
        doc.decls.complement[a] = b;
        doc.decls.complement[b] = a;
        return true;
    }
    if (at_word("set")) {
        next();
        std::string name = expect_ident("a label set name");
        doc.decls.sets[name] = ident_list("the label set");
        return true;
    }
    if (at_word("map")) {
        next();
        std::string name = expect_ident("a label map name");
        auto& m = doc.decls.maps[name];
        expect_punct("{", "to open the label map");
        while (!at_punct("}")) {
            std::string from = expect_ident("a label");
            expect_punct("->", "in the label map");
            m[from] = expect_ident("a label");
            if (!at_punct(",")) break;
            next();
        }
        expect_punct("}", "to close the label map");
        return true;
    }
    return false;
}

RawStreamRule Parser::stream_rule(bool gsos) {
    RawStreamRule r;
    r.at = peek().at;
    struct Premise {
        std::string arg, value, tail;
        Token at;
    };
    std::vector<Premise> premises;
    while (!at_punct("---") && !at_word("when") && !at_word("otherwise")) {
        Premise p;
        p.at = peek();
        p.arg = expect_ident("a premise 'x =r-> x'' or '---'");
        expect_punct("=", "in a stream premise 'x =r-> x''");
        p.value = expect_ident("a value variable");
        expect_punct("->", "in a stream premise 'x =r-> x''");
        p.tail = expect_ident("a tail variable");
        premises.push_back(std::move(p));
    }
    r.guard = stream_guard();
    expect_punct("---", "before the conclusion");
    const Token& head_tok = peek();
    r.op = expect_ident("the conclusion's operator");
    if (at_punct("[")) {
        if (!gsos) fail(peek(), "operator families are only available in the stream GSOS dialect");
        next();
        r.param_var = expect_ident("a family index variable");
        expect_punct("]", "to close the family index");
    }
    if (at_punct("(")) {
        next();
        if (!at_punct(")")) {
            r.head_vars.push_back(expect_ident("an argument variable"));
            while (at_punct(",")) {
                next();
                r.head_vars.push_back(expect_ident("an argument variable"));
            }
        }
        expect_punct(")", "to close the argument list");
    }
    r.value_vars.assign(r.head_vars.size(), "");
    r.tail_vars.assign(r.head_vars.size(), "");
    for (const auto& p : premises) {
        auto it = std::find(r.head_vars.begin(), r.head_vars.end(), p.arg);
        if (it == r.head_vars.end()) fail(p.at, "premise on '" + p.arg + "', which is not an argument of " + r.op);
        auto k = static_cast<std::size_t>(it - r.head_vars.begin());
        if (!r.value_vars[k].empty()) fail(p.at, "second premise on argument '" + p.arg + "'");
        r.value_vars[k] = p.value;
        r.tail_vars[k] = p.tail;
    }
    (void)head_tok;
    expect_punct("=", "before the output expression in the conclusion");
    r.out = value_sum();
    expect_punct("->", "after the output expression");
    r.target = parse_term();
    return r;
}

TransitionRule Parser::transition_rule(const SpecDoc& doc) {
    TransitionRule r;
    r.at = peek().at;
    const bool weighted = doc.kind.behavior == Behavior::Wts;
    std::set<std::string> weight_vars;
    while (!at_punct("---") && !at_word("when") && !at_word("otherwise")) {
        const Token& pt = peek();
        std::string arg = expect_ident("a premise or '---'");
        if (at_punct("=")) {
            if (!weighted) fail(peek(), "total-weight premises 'x =a=> w' are only allowed in wts specifications");
            next();
            TotalWeightPremise t;
            t.arg = arg;
            t.label = label_term();
            expect_punct("=>", "in a total-weight premise 'x =a=> w'");
            t.pattern = weight_atom();
            if (t.pattern.is_var) weight_vars.insert(t.pattern.var);
            r.totals.push_back(std::move(t));
            continue;
        }
        if (!at_punct("-")) fail(peek(), "expected '-' starting a transition premise");
        next();
        LabelTerm label = label_term();
        if (at_punct("-/->")) {
            if (weighted) fail(peek(), "negative premises are not part of the wts format");
            next();
            r.negative.push_back({arg, label});
            continue;
        }
        PositivePremise p;
        p.arg = arg;
        p.label = label;
        if (weighted) {
            expect_punct(",", "before the weight variable in 'x -a,u-> y'");
            p.weight_var = expect_ident("a weight variable");
            weight_vars.insert(p.weight_var);
        }
        expect_punct("->", "in a transition premise");
        p.target = expect_ident("a premise target variable");
        (void)pt;
        r.positive.push_back(std::move(p));
    }
    if (at_word("otherwise")) fail(peek(), "'otherwise' is only meaningful in stream specifications");
    if (at_word("when")) {
        next();
        do {
            if (at_punct(",")) next();
            bool is_weight = peek().kind == Tok::Number || at_word("inf") ||
                             (at_punct("-") && peek(1).kind == Tok::Number) ||
                             (peek().kind == Tok::Ident && weight_vars.count(peek().text) && !at_punct("(", 1));
            if (is_weight) {
                WeightComparison c;
                c.lhs = weight_atom();
                c.op = cmp_op();
                c.rhs = weight_atom();
                r.weight_guard.push_back(std::move(c));
                continue;
            }
            LabelCondition c;
            c.lhs = label_term();
            if (at_word("in") || at_word("notin")) {
                c.op = next().text == "in" ? LabelCondition::Op::In : LabelCondition::Op::NotIn;
                c.set = expect_ident("a label set name");
            } else if (at_punct("=") || at_punct("!=")) {
                c.op = next().text == "=" ? LabelCondition::Op::Eq : LabelCondition::Op::Ne;
                c.rhs = label_term();
            } else {
                fail(peek(), "expected 'in', 'notin', '=' or '!=' in a label condition");
            }
            r.label_conditions.push_back(std::move(c));
        } while (at_punct(","));
    }
    expect_punct("---", "before the conclusion");
    r.op = expect_ident("the conclusion's operator");
    if (at_punct("(")) {
        next();
        if (!at_punct(")")) {
            r.head_vars.push_back(expect_ident("an argument variable"));
            while (at_punct(",")) {
                next();
                r.head_vars.push_back(expect_ident("an argument variable"));
            }
        }
        expect_punct(")", "to close the argument list");
    }
    expect_punct("-", "before the conclusion label");
    r.label = label_term();
    if (weighted) {
        expect_punct(",", "before the conclusion weight in 'f(x) -a,u-> t'");
        WeightExpr w;
        w.factors.push_back(weight_atom());
        while (at_punct("*")) {
            next();
            w.factors.push_back(weight_atom());
        }
        r.weight = std::move(w);
    }
    expect_punct("->", "after the conclusion label");
    const Token& tt = peek();
    r.target = flatten(parse_term(), tt);
    return r;
}

OutputRule Parser::output_rule() {
    OutputRule r;
    r.at = peek().at;
    r.op = expect_ident("the operator of the output rule");
    expect_punct("(", "to open the argument list");
    if (!at_punct(")")) {
        r.head_vars.push_back(expect_ident("an argument variable"));
        while (at_punct(",")) {
            next();
            r.head_vars.push_back(expect_ident("an argument variable"));
        }
    }
    expect_punct(")", "to close the argument list");
    expect_word("final", "in 'output f(x..) final when final {..}'");
    expect_word("when", "in 'output f(x..) final when final {..}'");
    expect_word("final", "in 'output f(x..) final when final {..}'");
    expect_punct("{", "to open the final-argument set");
    while (!at_punct("}")) {
        if (peek().kind == Tok::Number) {
            const Token& nt = peek();
            std::size_t k = expect_nat("an argument position");
            if (k == 0 || k > r.head_vars.size()) fail(nt, "argument position out of range");
            r.final_vars.push_back(r.head_vars[k - 1]);
        } else {
            r.final_vars.push_back(expect_ident("an argument variable"));
        }
        if (!at_punct(",")) break;
        next();
    }
    expect_punct("}", "to close the final-argument set");
    return r;
}

SpecDoc Parser::parse_spec() {
    SpecDoc doc;
    parse_header(doc, false);
    while (peek().kind != Tok::End) {
        if (parse_declaration(doc, nullptr)) continue;
        if (at_word("output")) {
            const Token& ot = next();
            if (doc.kind.behavior != Behavior::Nda && doc.kind.behavior != Behavior::Dfa)
                fail(ot, "output rules are only allowed in nda and dfa specifications");
            doc.output_rules.push_back(output_rule());
            continue;
        }
        if (doc.kind.behavior == Behavior::Stream) {
            const Token& rt = peek();
            RawStreamRule raw = stream_rule(false);
            StreamRule r{raw.op, raw.head_vars, raw.value_vars, raw.tail_vars, raw.guard, raw.out,
                         flatten(raw.target, rt), raw.at};
            doc.stream_rules.push_back(std::move(r));
        } else {
            doc.transition_rules.push_back(transition_rule(doc));
        }
    }
    // A bare identifier naming a nullary operator (and no rule variable) is an application.
    auto fix_target = [&](FlatTerm& t, auto is_rule_var) {
        if (t.is_app) return;
        auto op = doc.signature.find(t.head);
        if (op && doc.signature.at(*op).arity == 0 && !is_rule_var(t.head)) t.is_app = true;
    };
    for (auto& r : doc.stream_rules) {
        fix_target(r.target, [&](const std::string& v) {
            return std::count(r.head_vars.begin(), r.head_vars.end(), v) ||
                   std::count(r.tail_vars.begin(), r.tail_vars.end(), v);
        });
    }
    for (auto& r : doc.transition_rules) {
        fix_target(r.target, [&](const std::string& v) {
            if (std::count(r.head_vars.begin(), r.head_vars.end(), v)) return true;
            return std::any_of(r.positive.begin(), r.positive.end(),
                               [&](const PositivePremise& p) { return p.target == v; });
        });
    }
    doc.index = std::make_shared<const SpecIndex>(detail::build_index(doc));
    return doc;
}

GsosStreamSpec Parser::parse_gsos() {
    SpecDoc header;
    GsosStreamSpec spec;
    parse_header(header, true);
    while (peek().kind != Tok::End) {
        if (at_word("output") || at_word("output_semantics") || at_word("complement") || at_word("set") ||
            at_word("map"))
            fail(peek(), "only operator declarations and stream rules are allowed in stream specifications");
        if (parse_declaration(header, &spec)) continue;
        RawStreamRule raw = stream_rule(true);
        spec.rules.push_back({raw.op, raw.param_var, raw.head_vars, raw.value_vars, raw.tail_vars, raw.guard,
                              raw.out, raw.target, raw.at});
    }
    check_gsos(spec);
    return spec;
}

void Parser::check_gsos(const GsosStreamSpec& spec) {
    auto find_op = [&](const std::string& name) -> const GsosOp* {
        for (const auto& op : spec.ops)
            if (op.name == name) return &op;
        return nullptr;
    };
    for (const auto& r : spec.rules) {
        auto check = [&](const sos::Term& t, auto&& self) -> void {
            if (!t.is_app) return;
            const GsosOp* op = find_op(t.head);
            if (!op) throw ParseError{r.at, "target mentions undeclared operator '" + t.head + "'"};
            if (op->arity != t.args.size())
                throw ParseError{r.at, "operator '" + t.head + "' expects " + std::to_string(op->arity) +
                                           " argument(s) in the target"};
            if (op->indexed != t.param.has_value())
                throw ParseError{r.at, op->indexed ? "family '" + t.head + "' needs an index in the target"
                                                   : "operator '" + t.head + "' takes no index"};
            for (const auto& a : t.args) self(a, self);
        };
        check(r.target, check);
    }
    for (const auto& op : spec.ops) {
        const GsosRule* last = nullptr;
        for (const auto& r : spec.rules) {
            if (r.op != op.name) continue;
            if (last && last->guard.otherwise)
                throw ParseError{last->at, "'otherwise' may only guard the last rule of '" + op.name + "'"};
            last = &r;
        }
        if (!last) throw ParseError{op.at, "non-exhaustive trigger: operator '" + op.name + "' has no rules"};
        if (!last->guard.is_catch_all())
            throw ParseError{last->at, "non-exhaustive trigger: the last rule of '" + op.name +
                                           "' must be unguarded or guarded by 'otherwise'"};
    }
}

} // namespace

ParseResult parse_spec(std::string_view text) {
    ParseResult res;
    try {
        Parser p(text);
        res.doc = p.parse_spec();
    } catch (const ParseError& e) {
        res.diagnostics.push_back({Diagnostic::Severity::Error, e.at, e.message});
    }
    return res;
}

Term parse_term(std::string_view text) {
    try {
        Parser p(text);
        return p.parse_closed_term();
    } catch (const ParseError& e) {
        throw InputError("term " + std::to_string(e.at.line) + ":" + std::to_string(e.at.column) + ": " + e.message);
    }
}

} // namespace ratfix::sos

namespace ratfix {

GsosStreamSpec parse_gsos(std::string_view text) {
    try {
        sos::Parser p(text);
        return p.parse_gsos();
    } catch (const sos::ParseError& e) {
        throw InputError(std::to_string(e.at.line) + ":" + std::to_string(e.at.column) + ": " + e.message);
    }
}

} // namespace ratfix
