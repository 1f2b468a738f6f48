// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Reference solvers used to benchmark the online algorithms: exact minimum
// cost covers at small scale, the classical offline greedy, and exact
// spanning/Steiner trees on metric instances.  All results are exact
// rationals; all solvers are deterministic.

#ifndef DYNCOVER_ORACLES_HPP_
#define DYNCOVER_ORACLES_HPP_

#include <cstddef>
#include <vector>

#include "dyncover/element_set.hpp"
#include "dyncover/rational.hpp"
#include "dyncover/submodular.hpp"

namespace dyncover {

struct OracleResult {
  Rat cost;
  ElementSet set;
};

// Minimum-cost S with f(S) = f(full ground set), by branch and bound over
// cost-ascending support elements with a greedy warm start.  Throws
// std::runtime_error("oracle cap exceeded") when the support has more than
// `cap` elements.
OracleResult brute_force_cover(const SubmodularFunction& f,
                               const std::vector<Rat>& costs,
                               std::size_t cap = 20);

// Same optimum by plain subset enumeration.  Deliberately implemented with
// none of the branch-and-bound machinery so the two can check each other.
OracleResult enumerate_cover(const SubmodularFunction& f,
                             const std::vector<Rat>& costs,
                             std::size_t cap = 16);

// Offline greedy: repeatedly add the element maximizing marginal value per
// unit cost (ties: lowest element id) until the full-set value is reached.
OracleResult offline_greedy(const SubmodularFunction& f,
                            const std::vector<Rat>& costs);

// Minimum spanning tree weight of the complete graph over `vertices`, with
// `dist[u][v]` giving exact pairwise distances.  Zero for fewer than two
// vertices.
Rat exact_mst_cost(const std::vector<std::vector<Rat>>& dist,
                   const std::vector<std::size_t>& vertices);

// Optimal Steiner tree weight connecting `terminals`, allowed to pass
// through any subset of `candidates`; exact via enumeration of candidate
// subsets.  Throws std::runtime_error("oracle cap exceeded") when terminals
// and candidates together exceed `cap` vertices.
Rat exact_steiner_cost(const std::vector<std::vector<Rat>>& dist,
                       const std::vector<std::size_t>& terminals,
                       const std::vector<std::size_t>& candidates,
                       std::size_t cap = 10);

}  // namespace dyncover

#endif  // DYNCOVER_ORACLES_HPP_
