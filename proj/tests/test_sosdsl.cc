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

#include <catch_amalgamated.hpp>

#include "generators.hh"
#include "ratfix/demos.hh"
#include "ratfix/resources.hh"

using namespace ratfix;
using namespace ratfix::testing;
using sos::Diagnostic;

namespace {

std::vector<Diagnostic> all_diagnostics(std::string_view text) {
    auto r = sos::parse_spec(text);
    auto out = r.diagnostics;
    if (r.ok()) {
        auto more = sos::validate_spec(*r.doc);
        out.insert(out.end(), more.begin(), more.end());
    }
    return out;
}

bool has_error(std::string_view text, std::string_view fragment) {
    for (const auto& d : all_diagnostics(text))
        if (d.is_error() && d.message.find(fragment) != std::string::npos) return true;
    return false;
}

bool has_warning(std::string_view text, std::string_view fragment) {
    for (const auto& d : all_diagnostics(text))
        if (!d.is_error() && d.message.find(fragment) != std::string::npos) return true;
    return false;
}

bool bipointed(std::string_view text) { return sos::is_bipointed(all_diagnostics(text)) && sos::parse_spec(text).ok(); }

} // namespace

TEST_CASE("zip parses to one binary operator and one rule") {
    auto r = sos::parse_spec(*resource("zip.sos"));
    REQUIRE(r.ok());
    CHECK(r.doc->signature.size() == 1);
    CHECK(r.doc->signature.at(0).name == "zip");
    CHECK(r.doc->signature.at(0).arity == 2);
    CHECK(r.doc->stream_rules.size() == 1);
    CHECK(sos::validate_spec(*r.doc).empty());
}

TEST_CASE("the one-line zip text from the format description parses") {
    CHECK(bipointed("behavior stream  op zip/2  x1 =r1-> x1'  x2 =r2-> x2'  ---  zip(x1,x2) =r1-> zip(x2,x1')"));
}

TEST_CASE("empty input has no header") {
    auto r = sos::parse_spec("");
    CHECK_FALSE(r.ok());
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].message.find("missing 'behavior' header") != std::string::npos);
    CHECK(r.diagnostics[0].at.line == 1);
}

TEST_CASE("ccs has eight rules over five operators") {
    auto r = sos::parse_spec(*resource("ccs.sos"));
    REQUIRE(r.ok());
    CHECK(r.doc->transition_rules.size() == 8);
    std::vector<std::pair<std::string, std::size_t>> ops;
    for (const auto& o : r.doc->signature.ops) ops.emplace_back(o.name, o.arity);
    CHECK(ops == std::vector<std::pair<std::string, std::size_t>>{
                     {"pre_a", 1}, {"plus", 2}, {"par", 2}, {"restrict_L", 1}, {"rename_rho", 1}});
    CHECK(sos::validate_spec(*r.doc).empty());
}

TEST_CASE("every shipped rule specification is bipointed") {
    for (auto name : {"zip.sos", "ccs.sos", "shuffle.sos", "priority.sos"}) {
        INFO(name);
        CHECK(bipointed(*resource(name)));
    }
    CHECK_FALSE(sos::parse_spec(*resource("p.gsos")).ok());
    CHECK_FALSE(sos::parse_spec(*resource("un.gsos")).ok());
}

TEST_CASE("stream totality and rule order") {
    const char* guarded_only = "behavior stream\nop f/1\nx =r-> x'\nwhen r > 0\n---\nf(x) =r-> f(x')\n";
    CHECK(has_error(guarded_only, "non-exhaustive trigger"));
    CHECK(has_error("behavior stream\nop f/1\nop g/1\nx =r-> x'\n---\nf(x) =r-> x'\n", "non-exhaustive trigger"));
    CHECK(has_error("behavior stream\nop f/1\n"
                    "x =r-> x'\notherwise\n---\nf(x) =r-> x'\n"
                    "x =r-> x'\n---\nf(x) =1-> x'\n",
                    "'otherwise' may only guard the last rule"));
    CHECK(has_warning("behavior stream\nop f/1\n"
                      "x =r-> x'\n---\nf(x) =r-> x'\n"
                      "x =r-> x'\n---\nf(x) =1-> x'\n",
                      "unreachable"));
    CHECK(has_error("behavior stream\nop f/1\n---\nf(x) =1-> x\n", "has no premise"));
    CHECK(has_error("behavior stream\nop f/1\nx =r-> x'\n---\nf(x) =q-> x'\n", "not a value variable"));
}

TEST_CASE("format violations are reported") {
    CHECK(has_error("behavior lts labels {a}\nop f/1\nx -a-> y\n---\nf(x) -a-> g(y)\n", "undeclared operator 'g'"));
    CHECK(has_error("behavior lts labels {a}\nop f/1\nx -a-> y\n---\nf(x) -a-> f(y,y)\n", "does not match the arity"));
    CHECK(has_error("behavior lts labels {a}\nop f/2\n---\nf(x) -a-> x\n", "has arity 2"));
    CHECK(has_error("behavior lts labels {a}\nop f/1\nx -a-> x\n---\nf(x) -a-> x\n", "is not distinct"));
    CHECK(has_error("behavior lts labels {a}\nop f/1\nx -b-> y\n---\nf(x) -a-> y\n", "not in the alphabet"));
    CHECK(has_error("behavior lts labels {a}\nop f/1\n---\nf(x) -a-> z\n", "not bound by the rule"));
    CHECK(has_error("behavior lts labels {a}\nop f/1\nop f/1\n---\nf(x) -a-> x\n", "declared twice"));
    CHECK(has_error("behavior lts labels {a}\nop f/1\nx -$l-> y\n---\nf(x) -co($l)-> y\n", "complement"));
    CHECK(has_error("behavior lts labels {a}\nop f/1\nx -$l-> y\nwhen $l in S\n---\nf(x) -$l-> y\n", "undeclared label set"));
    CHECK(has_error("behavior dfa labels {a}\nop f/1\nx -a-/->\n---\nf(x) -a-> x\n", "negative premises"));
    CHECK(has_error("behavior dfa labels {a, b}\nop f/1\nx -a-> y\n---\nf(x) -a-> y\n", "no rule for"));
    CHECK(has_error("behavior dfa labels {a}\nop f/1\n---\nf(x) -a-> x\n---\nf(x) -a-> f(x)\n", "rule"));
}

TEST_CASE("non-flat targets are rejected") {
    auto r = sos::parse_spec("behavior lts labels {a}\nop f/1\nx -a-> y\n---\nf(x) -a-> f(f(y))\n");
    CHECK_FALSE(r.ok());
    CHECK_FALSE(r.diagnostics.empty());
}

TEST_CASE("weighted rules stay additive in every premise weight") {
    const std::string head = "behavior wts labels {a} monoid nat-plus\nop f/1\n";
    CHECK(bipointed(head + "x -a,u-> y\n---\nf(x) -a,2*u-> y\n"));
    CHECK(has_error(head + "x -a,u-> y\n---\nf(x) -a,u*u-> y\n", "exactly once"));
    CHECK(has_error(head + "x -a,u-> y\n---\nf(x) -a,3-> y\n", "exactly once"));
    CHECK(has_error(head + "---\nf(x) -a,1/2-> x\n", "carrier"));
    CHECK(has_error(head + "x -a,u-> y\n---\nf(x) -a,u*v-> y\n", "not bound"));
    CHECK(has_error(head + "x =a=> w  x -a,u-> y\nwhen u <= w\n---\nf(x) -a,u-> y\n", "only compare total weights"));
    CHECK(bipointed(head + "x =a=> w  x -a,u-> y\nwhen w <= 3\n---\nf(x) -a,u-> y\n"));
    CHECK(has_error(head + "x =a=> u  x -a,u-> y\n---\nf(x) -a,u-> y\n", "both a transition weight and a total weight"));
}

TEST_CASE("contradictory premises give a vacuous-rule warning") {
    const char* text = "behavior lts labels {a}\nop f/1\nx -a-> y  x -a-/->\n---\nf(x) -a-> y\n";
    CHECK(has_warning(text, "vacuous (never triggered)"));
    CHECK(bipointed(text));
}

TEST_CASE("output rules must not overlap") {
    const std::string head = "behavior nda labels {a}\nop f/2\n";
    const std::string both = "output f(x,y) final when final {x, y}\n";
    const std::string first = "output f(x,y) final when final {x}\n";
    CHECK(bipointed(head + both));
    CHECK(bipointed(head + both + first));
    CHECK(has_error(head + both + both, "same final arguments"));
    CHECK(has_error(head + "output_semantics mentioned-only\n" + both + first, "two output rules"));
    CHECK(bipointed(head + "output_semantics mentioned-only\n" + first));
    CHECK(has_error(head + "output f(x,y) final when final {z}\n", "not an argument"));
}

TEST_CASE("diagnostics carry line and column") {
    auto ds = all_diagnostics("behavior lts labels {a}\nop f/1\n\nx -b-> y\n---\nf(x) -a-> y\n");
    REQUIRE_FALSE(ds.empty());
    CHECK(ds[0].at.line == 4);
    CHECK(sos::to_string(ds[0]).rfind("4:", 0) == 0);
    auto syntax = sos::parse_spec("behavior lts labels {a}\nop f/1\n---\nf(x) -a x\n");
    REQUIRE_FALSE(syntax.diagnostics.empty());
    CHECK(syntax.diagnostics[0].at.line == 4);
}

TEST_CASE("load_spec throws with every error") {
    CHECK_THROWS_AS(sos::load_spec("behavior stream\nop f/1\n"), InputError);
    CHECK_NOTHROW(sos::load_spec(*resource("zip.sos")));
}

TEST_CASE("stream rule selection follows rule order") {
    auto zip = sos::load_spec(*resource("zip.sos"));
    std::vector<Rational> v{5, 7};
    auto sel = sos::stream_rule_select(zip, "zip", v);
    CHECK(sel.rule == 0);
    CHECK(sel.values == v);
    CHECK(sel.out == 5);
    REQUIRE(sel.compiled->target.is_app);
    CHECK(sel.compiled->target.arg_slots == std::vector<std::size_t>{1, 2});

    auto two = sos::load_spec("behavior stream\nop f/1\n"
                              "x =r-> x'\nwhen r = 0\n---\nf(x) =1-> x'\n"
                              "x =r-> x'\notherwise\n---\nf(x) =2-> x'\n");
    CHECK(sos::stream_rule_select(two, "f", std::vector<Rational>{0}).rule == 0);
    CHECK(sos::stream_rule_select(two, "f", std::vector<Rational>{Rational(1, 3)}).rule == 1);
    CHECK_THROWS_AS(sos::stream_rule_select(two, "f", std::vector<Rational>{0, 1}), InputError);
}

TEST_CASE("random specifications are bipointed, total and print back to themselves") {
    Rng rng(2024);
    for (Behavior b : kAllBehaviors) {
        for (int i = 0; i < 80; ++i) {
            FunctorKind kind = random_kind(rng, b);
            std::string text = random_spec_text(rng, kind);
            INFO(text);
            auto r = sos::parse_spec(text);
            REQUIRE(r.ok());
            REQUIRE(sos::is_bipointed(sos::validate_spec(*r.doc)));
            std::string printed = sos::pretty_print(*r.doc);
            auto again = sos::parse_spec(printed);
            REQUIRE(again.ok());
            CHECK(sos::pretty_print(*again.doc) == printed);
            CHECK(again.doc->rule_count() == r.doc->rule_count());

            if (b != Behavior::Stream) continue;
            // Exactly the first rule whose guard holds is selected.
            for (std::size_t op = 0; op < r.doc->signature.size(); ++op) {
                const auto& rules = r.doc->index->stream[op];
                for (int k = 0; k < 10; ++k) {
                    std::vector<Rational> values;
                    for (std::size_t a = 0; a < r.doc->signature.at(op).arity; ++a)
                        values.push_back(Rational(static_cast<int>(rng.below(5)) - 2, static_cast<int>(rng.between(1, 2))));
                    auto sel = sos::stream_rule_select(*r.doc, op, values);
                    std::size_t first = 0;
                    while (!rules[first].guard.holds(values)) ++first;
                    CHECK(sel.compiled == &rules[first]);
                }
            }
        }
    }
}

TEST_CASE("shipped specifications print back to themselves") {
    for (auto name : {"zip.sos", "ccs.sos", "shuffle.sos", "priority.sos"}) {
        auto doc = shipped_spec(name);
        std::string printed = sos::pretty_print(doc);
        INFO(printed);
        auto again = sos::parse_spec(printed);
        REQUIRE(again.ok());
        CHECK(sos::pretty_print(*again.doc) == printed);
    }
}

TEST_CASE("terms parse and print") {
    CHECK(sos::parse_term("par(plus(P,Q), R)").to_string() == "par(plus(P,Q),R)");
    CHECK(sos::parse_term("u[5](z)").to_string() == "u[5](z)");
    CHECK(sos::parse_term("x").size() == 1);
    CHECK_THROWS_AS(sos::parse_term("f(x"), InputError);
}
