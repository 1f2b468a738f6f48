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

#include "dyncover/oracles.hpp"

#include <algorithm>
#include <stdexcept>

namespace dyncover {

namespace {

void check_costs(const SubmodularFunction& f, const std::vector<Rat>& costs) {
  if (costs.size() != f.ground_size()) {
    throw std::invalid_argument("oracle: one cost per ground element");
  }
}

// Depth-first branch and bound.  Elements come ordered by ascending cost;
// at each node we either take the next element or skip it, pruning branches
// that already cost at least the incumbent or that cannot reach the target
// value even with every remaining element.
struct CoverSearch {
  const SubmodularFunction& f;
  const std::vector<Rat>& costs;
  const std::vector<ElementId>& order;
  Rat target;
  Rat best_cost;
  ElementSet best_set;
  // rest_sets[i] = all of order[i..] as a bitset, for the feasibility prune.
  std::vector<ElementSet> rest_sets;

  void run(ElementSet& chosen, const Rat& cost_so_far, std::size_t i) {
    if (cost_so_far >= best_cost) return;
    if (f.value(chosen) == target) {
      best_cost = cost_so_far;
      best_set = chosen;
      return;
    }
    if (i == order.size()) return;
    if (f.value(chosen | rest_sets[i]) != target) return;  // dead branch

    const ElementId u = order[i];
    chosen.set(u);
    run(chosen, cost_so_far + costs[u], i + 1);
    chosen.reset(u);
    run(chosen, cost_so_far, i + 1);
  }
};

std::vector<ElementId> cost_ascending_support(const SubmodularFunction& f,
                                              const std::vector<Rat>& costs) {
  std::vector<ElementId> order = to_vector(f.support());
  std::sort(order.begin(), order.end(), [&costs](ElementId a, ElementId b) {
    if (costs[a] != costs[b]) return costs[a] < costs[b];
    return a < b;
  });
  return order;
}

}  // namespace

OracleResult offline_greedy(const SubmodularFunction& f,
                            const std::vector<Rat>& costs) {
  check_costs(f, costs);
  const Rat target = f.total();
  ElementSet chosen(f.ground_size());
  Rat cost = 0;
  Rat covered = 0;
  const std::vector<ElementId> support = to_vector(f.support());
  while (covered != target) {
    ElementId best = ElementSet::npos;
    Rat best_marginal = 0;
    for (ElementId u : support) {
      if (chosen.test(u)) continue;
      Rat m = f.marginal(u, chosen);
      if (m <= 0) continue;
      // Compare m/c(u) against the incumbent density without division.
      if (best == ElementSet::npos ||
          m * costs[best] > best_marginal * costs[u]) {
        best = u;
        best_marginal = m;
      }
    }
    if (best == ElementSet::npos) {
      throw std::logic_error("greedy stalled below the full-set value");
    }
    chosen.set(best);
    cost += costs[best];
    covered += best_marginal;
  }
  return {cost, chosen};
}

OracleResult brute_force_cover(const SubmodularFunction& f,
                               const std::vector<Rat>& costs,
                               std::size_t cap) {
  check_costs(f, costs);
  if (f.total() == 0) return {Rat(0), ElementSet(f.ground_size())};
  const std::vector<ElementId> order = cost_ascending_support(f, costs);
  if (order.size() > cap) throw std::runtime_error("oracle cap exceeded");

  OracleResult warm = offline_greedy(f, costs);
  CoverSearch search{f, costs, order, f.total(), warm.cost, warm.set, {}};
  search.rest_sets.assign(order.size() + 1, ElementSet(f.ground_size()));
  for (std::size_t i = order.size(); i-- > 0;) {
    search.rest_sets[i] = search.rest_sets[i + 1];
    search.rest_sets[i].set(order[i]);
  }
  ElementSet chosen(f.ground_size());
  search.run(chosen, Rat(0), 0);
  return {search.best_cost, search.best_set};
}

OracleResult enumerate_cover(const SubmodularFunction& f,
                             const std::vector<Rat>& costs,
                             std::size_t cap) {
  check_costs(f, costs);
  if (f.total() == 0) return {Rat(0), ElementSet(f.ground_size())};
  const std::vector<ElementId> support = to_vector(f.support());
  if (support.size() > cap) throw std::runtime_error("oracle cap exceeded");

  const Rat target = f.total();
  bool found = false;
  OracleResult best{Rat(0), ElementSet(f.ground_size())};
  ElementSet chosen(f.ground_size());
  const std::size_t masks = std::size_t{1} << support.size();
  for (std::size_t mask = 0; mask < masks; ++mask) {
    chosen.reset();
    Rat cost = 0;
    for (std::size_t bit = 0; bit < support.size(); ++bit) {
      if (mask & (std::size_t{1} << bit)) {
        chosen.set(support[bit]);
        cost += costs[support[bit]];
      }
    }
    if (found && cost >= best.cost) continue;
    if (f.value(chosen) == target) {
      best = {cost, chosen};
      found = true;
    }
  }
  return best;
}

Rat exact_mst_cost(const std::vector<std::vector<Rat>>& dist,
                   const std::vector<std::size_t>& vertices) {
  const std::size_t k = vertices.size();
  if (k < 2) return Rat(0);
  // Prim's algorithm over the complete graph.
  std::vector<bool> in_tree(k, false);
  std::vector<Rat> reach(k);
  in_tree[0] = true;
  for (std::size_t j = 1; j < k; ++j) {
    reach[j] = dist[vertices[0]][vertices[j]];
  }
  Rat total = 0;
  for (std::size_t step = 1; step < k; ++step) {
    std::size_t pick = 0;
    for (std::size_t j = 1; j < k; ++j) {
      if (in_tree[j]) continue;
      if (pick == 0 || reach[j] < reach[pick]) pick = j;
    }
    total += reach[pick];
    in_tree[pick] = true;
    for (std::size_t j = 1; j < k; ++j) {
      if (in_tree[j]) continue;
      const Rat& d = dist[vertices[pick]][vertices[j]];
      if (d < reach[j]) reach[j] = d;
    }
  }
  return total;
}

Rat exact_steiner_cost(const std::vector<std::vector<Rat>>& dist,
                       const std::vector<std::size_t>& terminals,
                       const std::vector<std::size_t>& candidates,
                       std::size_t cap) {
  if (terminals.size() + candidates.size() > cap) {
    throw std::runtime_error("oracle cap exceeded");
  }
  if (terminals.size() < 2) return Rat(0);
  // Any tree on terminals plus a candidate subset X costs at least the MST
  // of that vertex set, so minimizing MST over subsets is exact here.
  Rat best = exact_mst_cost(dist, terminals);
  const std::size_t masks = std::size_t{1} << candidates.size();
  std::vector<std::size_t> vertices;
  for (std::size_t mask = 1; mask < masks; ++mask) {
    vertices = terminals;
    for (std::size_t bit = 0; bit < candidates.size(); ++bit) {
      if (mask & (std::size_t{1} << bit)) vertices.push_back(candidates[bit]);
    }
    Rat cost = exact_mst_cost(dist, vertices);
    if (cost < best) best = cost;
  }
  return best;
}

}  // namespace dyncover
