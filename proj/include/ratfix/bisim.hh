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

// Coarsest bisimulation by signature refinement, and minimization.

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ratfix/behaviors.hh"

namespace ratfix {

using BlockId = std::uint32_t;

struct Partition {
    std::vector<BlockId> block_of;
    /// Members in increasing order; blocks are numbered by their least member.
    std::vector<std::vector<StateId>> blocks;
    /// Refinement rounds until the fixpoint was confirmed.
    std::size_t rounds = 0;

    std::size_t size() const { return blocks.size(); }
};

/// Signature of a state under a partition: its observation with every
/// successor replaced by its block (weights into one block summed).
Observation block_signature(const FiniteCoalgebra& c, const std::vector<BlockId>& block_of, StateId s);

/// Largest bisimulation on `c`. Requires a valid system.
Partition coarsest_bisimulation(const FiniteCoalgebra& c);

/// Throws InputError on a kind mismatch.
bool bisimilar(const PointedCoalgebra& p, const PointedCoalgebra& q);

/// The system on blocks; block b is represented by its least member.
FiniteCoalgebra quotient(const FiniteCoalgebra& c, const Partition& partition);

/// Reachable part, quotiented, then renumbered breadth-first from the root.
PointedCoalgebra minimize(const PointedCoalgebra& p);

} // namespace ratfix
