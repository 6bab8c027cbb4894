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

#include "ratfix/bisim.hh"

#include <map>
#include <tuple>

namespace ratfix {

namespace {

struct ObservationLess {
    bool operator()(const Observation& a, const Observation& b) const {
        if (a.index() != b.index()) return a.index() < b.index();
        return std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                const T& y = std::get<T>(b);
                if constexpr (std::is_same_v<T, StreamStep<StateId>>)
                    return std::tie(x.out, x.next) < std::tie(y.out, y.next);
                else if constexpr (std::is_same_v<T, DfaStep<StateId>>)
                    return std::tie(x.accept, x.next) < std::tie(y.accept, y.next);
                else if constexpr (std::is_same_v<T, LtsStep<StateId>>)
                    return x.moves < y.moves;
                else if constexpr (std::is_same_v<T, NdaStep<StateId>>)
                    return std::tie(x.accept, x.succ) < std::tie(y.accept, y.succ);
                else
                    return x.succ < y.succ;
            },
            a);
    }
};

struct KeyLess {
    bool operator()(const std::pair<BlockId, Observation>& a, const std::pair<BlockId, Observation>& b) const {
        if (a.first != b.first) return a.first < b.first;
        return ObservationLess{}(a.second, b.second);
    }
};

} // namespace

Observation block_signature(const FiniteCoalgebra& c, const std::vector<BlockId>& block_of, StateId s) {
    return map_targets(c.obs[s], [&](StateId t) -> StateId { return block_of[t]; }, c.kind.monoid);
}

Partition coarsest_bisimulation(const FiniteCoalgebra& c) {
    const std::size_t n = c.size();
    Partition p;
    p.block_of.assign(n, 0);
    std::size_t count = n == 0 ? 0 : 1;
    for (;;) {
        ++p.rounds;
        std::map<std::pair<BlockId, Observation>, BlockId, KeyLess> ids;
        std::vector<BlockId> next(n);
        for (StateId s = 0; s < n; ++s) {
            auto key = std::pair(p.block_of[s], block_signature(c, p.block_of, s));
            auto it = ids.try_emplace(std::move(key), static_cast<BlockId>(ids.size())).first;
            next[s] = it->second;
        }
        p.block_of = std::move(next);
        // Refinement only ever splits blocks, so an unchanged count is the fixpoint.
        if (ids.size() == count) break;
        count = ids.size();
    }
    p.blocks.assign(count, {});
    for (StateId s = 0; s < n; ++s) p.blocks[p.block_of[s]].push_back(s);
    return p;
}

bool bisimilar(const PointedCoalgebra& p, const PointedCoalgebra& q) {
    if (!(p.system.kind == q.system.kind))
        throw InputError("cannot compare " + p.system.kind.describe() + " with " + q.system.kind.describe());
    std::vector<FiniteCoalgebra> parts{reachable(p).system, reachable(q).system};
    DisjointUnion u = disjoint_union(p.system.kind, parts);
    Partition part = coarsest_bisimulation(u.system);
    return part.block_of[u.offsets[0]] == part.block_of[u.offsets[1]];
}

FiniteCoalgebra quotient(const FiniteCoalgebra& c, const Partition& partition) {
    FiniteCoalgebra q;
    q.kind = c.kind;
    for (const auto& block : partition.blocks) {
        StateId rep = block.front();
        q.names.push_back(c.names[rep]);
        q.obs.push_back(block_signature(c, partition.block_of, rep));
    }
    return q;
}

PointedCoalgebra minimize(const PointedCoalgebra& p) {
    PointedCoalgebra r = reachable(p);
    Partition part = coarsest_bisimulation(r.system);
    return reachable(quotient(r.system, part), part.block_of[r.root]);
}

} // namespace ratfix
