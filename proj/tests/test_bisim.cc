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
#include "ratfix/io.hh"

using namespace ratfix;
using namespace ratfix::testing;

namespace {

// States related by the engine, as a relation.
std::vector<std::vector<bool>> engine_relation(const FiniteCoalgebra& c) {
    Partition p = coarsest_bisimulation(c);
    std::vector<std::vector<bool>> rel(c.size(), std::vector<bool>(c.size()));
    for (StateId s = 0; s < c.size(); ++s)
        for (StateId t = 0; t < c.size(); ++t) rel[s][t] = p.block_of[s] == p.block_of[t];
    return rel;
}

// Same up to a bijection of states that preserves the root and observations.
bool isomorphic(const PointedCoalgebra& p, const PointedCoalgebra& q) {
    if (p.system.size() != q.system.size() || !(p.system.kind == q.system.kind)) return false;
    // Both are reachable from the root in a deterministic order after reachable().
    PointedCoalgebra a = reachable(p), b = reachable(q);
    return a.system.obs == b.system.obs;
}

} // namespace

TEST_CASE("identical self-loops share a block") {
    FiniteCoalgebra c{FunctorKind::stream(), {"x", "y"}, {StreamStep<StateId>{0, 0}, StreamStep<StateId>{0, 1}}};
    CHECK(coarsest_bisimulation(c).size() == 1);
}

TEST_CASE("a-star and its unrolled copy are bisimilar") {
    FiniteCoalgebra one{FunctorKind::dfa({"a", "b"}), {"q", "sink"}, {DfaStep<StateId>{true, {0, 1}}, DfaStep<StateId>{false, {1, 1}}}};
    FiniteCoalgebra two{FunctorKind::dfa({"a", "b"}),
                        {"q0", "q1", "sink"},
                        {DfaStep<StateId>{true, {1, 2}}, DfaStep<StateId>{true, {0, 2}}, DfaStep<StateId>{false, {2, 2}}}};
    CHECK(bisimilar({one, 0}, {two, 0}));
    CHECK(accepted_words({one, 0}, 6) == accepted_words({two, 0}, 6));
}

TEST_CASE("weights into one block aggregate") {
    auto c = parse_system(R"({"kind":"wts","alphabet":["a"],"monoid":"nat-plus","states":["u","v","b1","b2"],
        "obs":[{"a":{"b1":"1","b2":"1"}},{"a":{"b1":"2"}},{},{}]})").system;
    Partition p = coarsest_bisimulation(c);
    CHECK(p.block_of[0] == p.block_of[1]);
    CHECK(p.block_of[2] == p.block_of[3]);
    CHECK(p.size() == 2);
}

TEST_CASE("deadlock differs from a loop") {
    FiniteCoalgebra dead{FunctorKind::lts({"a"}), {"d"}, {LtsStep<StateId>{}}};
    FiniteCoalgebra loop{FunctorKind::lts({"a"}), {"l"}, {LtsStep<StateId>{{{0, 0}}}}};
    CHECK_FALSE(bisimilar({dead, 0}, {loop, 0}));
    CHECK(bisimilar({loop, 0}, {loop, 0}));
    CHECK_THROWS_AS(bisimilar({loop, 0}, {FiniteCoalgebra{FunctorKind::lts({"b"}), {"l"}, {LtsStep<StateId>{}}}, 0}),
                    InputError);
}

TEST_CASE("partitions agree with the relational oracle") {
    Rng rng(61);
    for (Behavior b : {Behavior::Stream, Behavior::Dfa, Behavior::Lts, Behavior::Nda}) {
        for (int i = 0; i < 100; ++i) {
            FiniteCoalgebra c = random_system(rng, random_kind(rng, b), rng.between(1, 7));
            INFO(behavior_name(b) << " #" << i);
            CHECK(engine_relation(c) == naive_bisimulation(c));
        }
    }
}

TEST_CASE("weighted partitions agree with depth descriptions") {
    Rng rng(67);
    for (Behavior b : kAllBehaviors) {
        for (int i = 0; i < 100; ++i) {
            FiniteCoalgebra c = random_system(rng, random_kind(rng, b), rng.between(1, 7));
            auto desc = depth_descriptions(c, c.size() + 1);
            auto rel = engine_relation(c);
            for (StateId s = 0; s < c.size(); ++s)
                for (StateId t = 0; t < c.size(); ++t) CHECK(rel[s][t] == (desc[s] == desc[t]));
        }
    }
}

TEST_CASE("partition is canonical and at a fixpoint") {
    Rng rng(71);
    for (Behavior b : kAllBehaviors) {
        for (int i = 0; i < 50; ++i) {
            FiniteCoalgebra c = random_system(rng, random_kind(rng, b), rng.between(1, 8));
            Partition p = coarsest_bisimulation(c);
            CHECK(p.rounds <= c.size() + 1);
            // Blocks numbered by least member, members sorted.
            for (BlockId k = 0; k < p.size(); ++k) {
                CHECK(std::is_sorted(p.blocks[k].begin(), p.blocks[k].end()));
                if (k) CHECK(p.blocks[k - 1].front() < p.blocks[k].front());
                for (StateId s : p.blocks[k]) CHECK(p.block_of[s] == k);
            }
            // One more round would not split anything.
            for (const auto& block : p.blocks)
                for (StateId s : block) CHECK(block_signature(c, p.block_of, s) == block_signature(c, p.block_of, block[0]));
        }
    }
}

TEST_CASE("bisimilarity is an equivalence") {
    Rng rng(73);
    for (Behavior b : kAllBehaviors) {
        FunctorKind k = random_kind(rng, b);
        for (int i = 0; i < 40; ++i) {
            // Small systems over one state space make related triples likely.
            FiniteCoalgebra c = random_system(rng, k, 3);
            PointedCoalgebra x{c, 0}, y{c, 1}, z{c, 2};
            CHECK(bisimilar(x, x));
            CHECK(bisimilar(x, y) == bisimilar(y, x));
            if (bisimilar(x, y) && bisimilar(y, z)) CHECK(bisimilar(x, z));
        }
    }
}

TEST_CASE("inflated copies are bisimilar state by state") {
    Rng rng(79);
    for (Behavior b : kAllBehaviors) {
        for (int i = 0; i < 40; ++i) {
            FiniteCoalgebra c = random_system(rng, random_kind(rng, b), rng.between(1, 5));
            FiniteCoalgebra big = inflate(rng, c);
            REQUIRE(validate(big).empty());
            for (StateId s = 0; s < c.size(); ++s) {
                CHECK(bisimilar({c, s}, {big, s}));
                CHECK(bisimilar({c, s}, {big, static_cast<StateId>(s + c.size())}));
            }
        }
    }
}

TEST_CASE("minimize is idempotent and behaviour-preserving") {
    Rng rng(83);
    for (Behavior b : kAllBehaviors) {
        for (int i = 0; i < 60; ++i) {
            FiniteCoalgebra c = random_system(rng, random_kind(rng, b), rng.between(1, 6));
            PointedCoalgebra p{inflate(rng, c), static_cast<StateId>(rng.below(c.size()))};
            PointedCoalgebra m = minimize(p);
            CHECK(bisimilar(p, m));
            CHECK(minimize(m) == m);
            CHECK(isomorphic(m, minimize(reachable(p))));
            CHECK(m.system.size() <= reachable(c, p.root).system.size());
            CHECK(coarsest_bisimulation(m.system).size() == m.system.size());
        }
    }
}

TEST_CASE("a redundant lasso minimizes to two states") {
    FiniteCoalgebra c{FunctorKind::stream(), {"a", "b", "c", "d", "e", "f"}, {}};
    for (StateId i = 0; i < 6; ++i) c.obs.push_back(StreamStep<StateId>{Rational(i % 2 + 1), (i + 1) % 6});
    PointedCoalgebra m = minimize({c, 0});
    CHECK(m.system.size() == 2);
    CHECK(lasso_of(m) == Lasso::parse("| 1,2"));
}

TEST_CASE("nda with bisimilar branches keeps its accept bits") {
    auto c = parse_system(R"({"kind":"nda","alphabet":["a"],"states":["r","x","y","z"],
        "obs":[{"accept":false,"succ":{"a":["x","y"]}},{"accept":true,"succ":{"a":["z"]}},
               {"accept":true,"succ":{"a":["z"]}},{"accept":false,"succ":{}}]})").pointed();
    PointedCoalgebra m = minimize(c);
    CHECK(m.system.size() == 3);
    CHECK(bisimilar(c, m));
}

TEST_CASE("dfa bisimilarity matches word equality") {
    Rng rng(89);
    for (int i = 0; i < 100; ++i) {
        FunctorKind k = FunctorKind::dfa({"a", "b"});
        PointedCoalgebra p{random_system(rng, k, rng.between(1, 4)), 0}, q{random_system(rng, k, rng.between(1, 4)), 0};
        CHECK(bisimilar(p, q) == (accepted_words(p, p.system.size() + q.system.size()) ==
                                  accepted_words(q, p.system.size() + q.system.size())));
    }
}
