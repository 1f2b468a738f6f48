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

// Tests for the reference solvers.  The branch-and-bound cover solver is
// checked against plain enumeration on random instances, greedy against its
// classical guarantee, and the tree solvers against independent
// recomputations.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "dyncover/element_set.hpp"
#include "dyncover/oracles.hpp"
#include "dyncover/rational.hpp"
#include "dyncover/submodular.hpp"

using namespace dyncover;

namespace {

// Random unit-weight coverage instance over n elements and m items where
// every item is covered by someone (so full coverage is achievable).
CoverageFunction random_coverage(std::mt19937_64& rng, std::size_t n,
                                 std::size_t m) {
  std::vector<std::vector<std::size_t>> covers(n);
  for (std::size_t item = 0; item < m; ++item) {
    bool hit = false;
    for (std::size_t e = 0; e < n; ++e) {
      if (rng() % 3 == 0) {
        covers[e].push_back(item);
        hit = true;
      }
    }
    if (!hit) covers[rng() % n].push_back(item);
  }
  return CoverageFunction(n, m, covers);
}

std::vector<Rat> random_costs(std::mt19937_64& rng, std::size_t n) {
  std::vector<Rat> costs(n);
  for (auto& c : costs) c = Rat(1 + rng() % 9, 1 + rng() % 3);
  return costs;
}

// Kruskal's algorithm, as an independent check on the Prim-based solver.
Rat kruskal_mst(const std::vector<std::vector<Rat>>& dist,
                const std::vector<std::size_t>& vertices) {
  struct Edge {
    Rat w;
    std::size_t a, b;
  };
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      edges.push_back({dist[vertices[i]][vertices[j]], i, j});
    }
  }
  std::stable_sort(edges.begin(), edges.end(),
                   [](const Edge& x, const Edge& y) { return x.w < y.w; });
  std::vector<std::size_t> parent(vertices.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  const auto find = [&parent](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  Rat total = 0;
  for (const Edge& e : edges) {
    std::size_t ra = find(e.a), rb = find(e.b);
    if (ra != rb) {
      parent[ra] = rb;
      total += e.w;
    }
  }
  return total;
}

}  // namespace

TEST_CASE("exact cover solvers handle tiny instances by hand") {
  // Items {0,1,2}; element 0 covers all at cost 3, elements 1..3 cover one
  // item each at cost 1.
  CoverageFunction f(4, 3, {{0, 1, 2}, {0}, {1}, {2}});
  std::vector<Rat> costs{Rat(3), Rat(1), Rat(1), Rat(1)};

  OracleResult bb = brute_force_cover(f, costs);
  OracleResult en = enumerate_cover(f, costs);
  CHECK(bb.cost == Rat(3));
  CHECK(en.cost == Rat(3));
  CHECK(f.value(bb.set) == f.total());

  // Make the bundle cheaper and it becomes the unique optimum.
  costs[0] = Rat(5, 2);
  CHECK(brute_force_cover(f, costs).cost == Rat(5, 2));
  CHECK(brute_force_cover(f, costs).set == make_set(4, {0}));
}

TEST_CASE("zero function is covered by the empty set") {
  SumFunction zero(5, {});
  std::vector<Rat> costs(5, Rat(1));
  CHECK(brute_force_cover(zero, costs).cost == Rat(0));
  CHECK(enumerate_cover(zero, costs).cost == Rat(0));
  CHECK(offline_greedy(zero, costs).cost == Rat(0));
}

TEST_CASE("branch and bound agrees with enumeration on random instances") {
  std::mt19937_64 rng(2026);
  for (int round = 0; round < 60; ++round) {
    const std::size_t n = 4 + rng() % 7;  // 4..10 elements
    const std::size_t m = 3 + rng() % 8;  // 3..10 items
    CoverageFunction f = random_coverage(rng, n, m);
    std::vector<Rat> costs = random_costs(rng, n);
    OracleResult bb = brute_force_cover(f, costs);
    OracleResult en = enumerate_cover(f, costs);
    CAPTURE(round);
    CHECK(bb.cost == en.cost);
    CHECK(f.value(bb.set) == f.total());
    CHECK(f.value(en.set) == f.total());
  }
}

TEST_CASE("greedy is sandwiched between optimum and its guarantee") {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 40; ++round) {
    const std::size_t n = 4 + rng() % 6;
    const std::size_t m = 3 + rng() % 7;
    CoverageFunction f = random_coverage(rng, n, m);
    std::vector<Rat> costs = random_costs(rng, n);
    OracleResult opt = brute_force_cover(f, costs);
    OracleResult greedy = offline_greedy(f, costs);
    CAPTURE(round);
    CHECK(greedy.cost >= opt.cost);
    CHECK(f.value(greedy.set) == f.total());
    // Unit-weight coverage: smallest positive marginal is 1, largest
    // singleton value is fmax.
    const double fmax = to_double(bounds_of(f).fmax);
    CHECK(to_double(greedy.cost) <=
          (1.0 + std::log(fmax)) * to_double(opt.cost) + 1e-9);
  }
}

TEST_CASE("greedy ties break toward the lowest element id") {
  // Elements 1 and 2 are identical; greedy must pick 1 first.
  CoverageFunction f(3, 2, {{0}, {1}, {1}});
  std::vector<Rat> costs{Rat(1), Rat(1), Rat(1)};
  OracleResult greedy = offline_greedy(f, costs);
  CHECK(greedy.set == make_set(3, {0, 1}));
}

TEST_CASE("greedy can lose a factor approaching its guarantee") {
  // Two rows of 15 items each are the optimum; four nested column blocks of
  // sizes 16, 8, 4, 2 bait the greedy into picking all four.
  const std::size_t rows = 2, blocks = 4;
  std::vector<std::vector<std::size_t>> covers(rows + blocks);
  // Items 0..29: row 0 covers evens, row 1 covers odds.
  for (std::size_t item = 0; item < 30; ++item) {
    covers[item % 2].push_back(item);
  }
  // Block k covers the first 2^(5-k)/... explicitly: 16, 8, 4, 2 items.
  std::size_t start = 0;
  for (std::size_t k = 0; k < blocks; ++k) {
    const std::size_t width = std::size_t{16} >> k;
    for (std::size_t item = start; item < start + width; ++item) {
      covers[rows + k].push_back(item);
    }
    start += width;
  }
  CoverageFunction f(rows + blocks, 30, covers);
  std::vector<Rat> costs(rows + blocks, Rat(1));

  OracleResult opt = brute_force_cover(f, costs);
  OracleResult greedy = offline_greedy(f, costs);
  CHECK(opt.cost == Rat(2));
  CHECK(greedy.cost >= Rat(4));  // strictly worse than the optimum
}

TEST_CASE("oracle caps raise the advertised error") {
  std::vector<std::vector<std::size_t>> covers(17);
  for (std::size_t i = 0; i < 17; ++i) covers[i] = {i};
  CoverageFunction f(17, 17, covers);
  std::vector<Rat> costs(17, Rat(1));
  CHECK_THROWS_WITH_AS(enumerate_cover(f, costs, 16), "oracle cap exceeded",
                       std::runtime_error);
  CHECK(brute_force_cover(f, costs, 20).cost == Rat(17));
}

TEST_CASE("prim and kruskal agree on random metrics") {
  std::mt19937_64 rng(511);
  for (int round = 0; round < 30; ++round) {
    const std::size_t k = 2 + rng() % 7;
    // Integer grid points under the L1 metric (triangle inequality holds).
    std::vector<std::pair<long, long>> pts(k);
    for (auto& p : pts) {
      p = {static_cast<long>(rng() % 50), static_cast<long>(rng() % 50)};
    }
    std::vector<std::vector<Rat>> dist(k, std::vector<Rat>(k, Rat(0)));
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        dist[i][j] = Rat(std::labs(pts[i].first - pts[j].first) +
                         std::labs(pts[i].second - pts[j].second));
      }
    }
    std::vector<std::size_t> vertices(k);
    std::iota(vertices.begin(), vertices.end(), std::size_t{0});
    CAPTURE(round);
    CHECK(exact_mst_cost(dist, vertices) == kruskal_mst(dist, vertices));
  }
}

TEST_CASE("steiner solver uses a hub exactly when it pays") {
  // Three terminals pairwise at distance 2, one hub at distance 1 from each.
  std::vector<std::vector<Rat>> dist{
      {Rat(0), Rat(2), Rat(2), Rat(1)},
      {Rat(2), Rat(0), Rat(2), Rat(1)},
      {Rat(2), Rat(2), Rat(0), Rat(1)},
      {Rat(1), Rat(1), Rat(1), Rat(0)},
  };
  CHECK(exact_mst_cost(dist, {0, 1, 2}) == Rat(4));
  CHECK(exact_steiner_cost(dist, {0, 1, 2}, {3}) == Rat(3));

  // Make the hub expensive to reach and it is ignored.
  for (std::size_t t = 0; t < 3; ++t) dist[t][3] = dist[3][t] = Rat(5);
  CHECK(exact_steiner_cost(dist, {0, 1, 2}, {3}) == Rat(4));

  CHECK(exact_steiner_cost(dist, {0}, {3}) == Rat(0));
  CHECK_THROWS_WITH_AS(
      exact_steiner_cost(dist, {0, 1, 2}, {3}, /*cap=*/3),
      "oracle cap exceeded", std::runtime_error);
}
