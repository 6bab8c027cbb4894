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
#include "ratfix/bisim.hh"
#include "ratfix/demos.hh"
#include "ratfix/io.hh"
#include "ratfix/synthesis.hh"

using namespace ratfix;
using namespace ratfix::testing;

namespace {

WordSet words(std::initializer_list<const char*> ws) {
    WordSet out;
    for (const char* w : ws) out.push_back(word_from_string(w));
    return out;
}

std::set<Word> as_set(const WordSet& ws) { return {ws.begin(), ws.end()}; }

PointedCoalgebra a_star() {
    return PointedCoalgebra{{FunctorKind::dfa({"a", "b"}), {"q", "sink"}, {DfaStep<StateId>{true, {0, 1}}, DfaStep<StateId>{false, {1, 1}}}}, 0};
}

std::size_t binomial(std::size_t n, std::size_t k) {
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

} // namespace

TEST_CASE("word text form") {
    CHECK(word_to_string({}) == "");
    CHECK(word_to_string({"a", "b"}) == "ab");
    CHECK(word_to_string({"tau", "a"}) == "tau.a");
    CHECK(word_from_string("abc") == Word{"a", "b", "c"});
    CHECK(word_from_string("tau.a") == Word{"tau", "a"});
    CHECK(word_from_string("").empty());
}

TEST_CASE("enumeration of small languages") {
    PointedCoalgebra none{{FunctorKind::dfa({"a"}), {"q"}, {DfaStep<StateId>{false, {0}}}}, 0};
    CHECK(enumerate_words(none, 5).empty());
    CHECK(enumerate_words(a_star(), 2) == words({"", "a", "aa"}));
}

TEST_CASE("enumeration is length-lex and matches direct simulation") {
    Rng rng(131);
    for (Behavior b : {Behavior::Dfa, Behavior::Nda}) {
        for (int i = 0; i < 100; ++i) {
            PointedCoalgebra p{random_system(rng, random_kind(rng, b), rng.between(1, 4)), 0};
            WordSet ws = enumerate_words(p, 6);
            CHECK(std::is_sorted(ws.begin(), ws.end(), LengthLex{}));
            CHECK(std::adjacent_find(ws.begin(), ws.end()) == ws.end());
            CHECK(as_set(ws) == accepted_words(p, 6));
        }
    }
}

TEST_CASE("subset construction") {
    // Already deterministic: singleton subsets, same shape.
    auto d = shipped_system("systems/dfa_ab.json").pointed();
    PointedCoalgebra det = nda_to_dfa(dfa_as_nda(d));
    CHECK(det.system.size() == reachable(d).system.size());
    CHECK(bisimilar(det, d));

    auto n = parse_system(R"({"kind":"nda","alphabet":["a"],"states":["r","s","t"],
        "obs":[{"accept":false,"succ":{"a":["s","t"]}},{"accept":true,"succ":{}},{"accept":false,"succ":{}}]})").pointed();
    PointedCoalgebra u = nda_to_dfa(n);
    const auto& root = std::get<DfaStep<StateId>>(u.system.obs[u.root]);
    CHECK(std::get<DfaStep<StateId>>(u.system.obs[root.next[0]]).accept);
    CHECK(u.system.names[root.next[0]] == "{s,t}");
    CHECK(u.system.find("{}"));
    CHECK(validate(u.system).empty());
    CHECK_THROWS_AS(nda_to_dfa(d), InputError);
}

TEST_CASE("language equivalence") {
    PointedCoalgebra p = a_star();
    CHECK(language_equiv(p, p));
    PointedCoalgebra unrolled{{FunctorKind::dfa({"a", "b"}),
                               {"q0", "q1", "sink"},
                               {DfaStep<StateId>{true, {1, 2}}, DfaStep<StateId>{true, {0, 2}}, DfaStep<StateId>{false, {2, 2}}}},
                              0};
    CHECK(language_equiv(p, unrolled));
    CHECK(as_set(enumerate_words(p, 6)) == as_set(enumerate_words(unrolled, 6)));
    // a* b?
    PointedCoalgebra ab{{FunctorKind::dfa({"a", "b"}),
                         {"q", "end", "sink"},
                         {DfaStep<StateId>{true, {0, 1}}, DfaStep<StateId>{true, {2, 2}}, DfaStep<StateId>{false, {2, 2}}}},
                        0};
    CHECK_FALSE(language_equiv(p, ab));
    CHECK(as_set(enumerate_words(ab, 1)).count({"b"}));
    CHECK_THROWS_AS(language_equiv(p, PointedCoalgebra{{FunctorKind::dfa({"a"}), {"q"}, {DfaStep<StateId>{true, {0}}}}, 0}),
                    InputError);
    CHECK_THROWS_AS(language_equiv(p, lasso_to_system(Lasso::parse("| 1"))), InputError);
}

TEST_CASE("nda language equivalence matches words up to the product size") {
    Rng rng(137);
    for (int i = 0; i < 100; ++i) {
        FunctorKind k = FunctorKind::nda({"a", "b"});
        PointedCoalgebra p{random_system(rng, k, rng.between(1, 3)), 0}, q{random_system(rng, k, rng.between(1, 3)), 0};
        // Determinized sizes are at most 2^3 each.
        std::size_t len = 16;
        CHECK(language_equiv(p, q) == (accepted_words(p, len) == accepted_words(q, len)));
    }
}

TEST_CASE("interleavings of words") {
    CHECK(word_shuffle({"a", "b"}, {"c"}) == words({"abc", "acb", "cab"}));
    CHECK(word_shuffle({}, {"x", "y"}) == words({"xy"}));
    CHECK(word_shuffle({"a", "a"}, {"a"}) == words({"aaa"}));
    Rng rng(139);
    const std::vector<std::string> letters{"a", "b", "c", "d", "e", "f"};
    for (int i = 0; i < 200; ++i) {
        Word w, v;
        std::size_t n = rng.below(4), m = rng.below(4);
        for (std::size_t k = 0; k < n; ++k) w.push_back(letters[rng.below(2)]);
        for (std::size_t k = 0; k < m; ++k) v.push_back(letters[rng.below(2)]);
        WordSet s = word_shuffle(w, v);
        CHECK(as_set(s) == interleavings(w, v));
        CHECK(s.size() <= binomial(n + m, n));
        // Disjoint letters give every interleaving exactly once.
        Word x;
        for (std::size_t k = 0; k < m; ++k) x.push_back(letters[2 + rng.below(4)]);
        CHECK(word_shuffle(w, x).size() == binomial(n + x.size(), n));
    }
}

TEST_CASE("the shuffle example") {
    auto spec = shipped_spec("shuffle.sos");
    std::map<std::string, PointedCoalgebra> env{{"x", dfa_as_nda(shipped_system("systems/dfa_ab.json").pointed())},
                                                {"y", dfa_as_nda(shipped_system("systems/dfa_c.json").pointed())}};
    PointedCoalgebra s = eval_term(spec, env, sos::parse_term("shuffle(x,y)"));
    CHECK(enumerate_words(nda_to_dfa(s), 3) == words({"abc", "acb", "cab"}));
    CHECK(enumerate_words(s, 6) == words({"abc", "acb", "cab"}));
}
