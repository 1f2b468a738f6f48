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

// Randomized cover maintenance for functions that each depend on few
// elements ("juntas").  Every live function owns a responsibility set; a
// probe samples an element from the function's uncovered influencers with
// probability proportional to inverse cost, and departures re-probe the
// functions they uncover in arrival order.  Expected solution cost is within
// a factor r of the optimum when every function depends on at most r
// elements, and total probes never exceed the sum of function totals divided
// by the declared minimum marginal.

#ifndef DYNCOVER_RJUNTA_HPP_
#define DYNCOVER_RJUNTA_HPP_

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "dyncover/element_set.hpp"
#include "dyncover/rational.hpp"
#include "dyncover/submodular.hpp"

namespace dyncover {

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Seed derivation and weighted sampling
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

// Derives an independent child seed from a base seed and a stream index
// (splitmix64 finalizer), so one user-facing seed can drive many independent
// generators reproducibly.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream);

// Samples one candidate with probability (1/cost[u]) / sum_v 1/cost[v],
// by exact-rational inverse CDF on a 2^-64 uniform grid (each probability is
// realized to within 2^-64 of the exact value).  `candidates` must be
// nonempty and every referenced cost positive.
ElementId sample_inverse_cost(const std::vector<ElementId>& candidates,
                              const std::vector<Rat>& costs,
                              std::mt19937_64& rng);

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Junta cover state
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

// The randomized maintenance state: the solution, one responsibility set per
// live function, the arrival order used for departure-time re-probing, and
// one seeded random stream for the whole run.
//
// Invariants (checked by verify()):
//   - the solution is exactly the union of the responsibility sets,
//   - each responsibility set lies inside its function's influencer set,
//   - every live function is covered: g(solution) == g(everything).
class JuntaCoverState {
 public:
  // `costs` fixes the ground size; every cost must be positive.  `fmin` is
  // the declared lower bound on positive marginals (the probe budget's
  // denominator); observing a smaller positive marginal fails the run.
  JuntaCoverState(std::vector<Rat> costs, std::uint64_t seed, Rat fmin = 1);

  // A function joins.  It must be explicitly junta-typed (so its influencer
  // set is declared, not inferred), over the right ground set, with a fresh
  // id.  Probes it until covered.  Returns the number of elements added.
  std::size_t on_arrival(FunctionId id, const FunctionPtr& fn);

  // A function leaves: its responsibility set is removed from the solution,
  // and any functions this uncovers are re-probed in arrival order.
  // Returns |solution_before symmetric-difference solution_after|.
  std::size_t on_departure(FunctionId id);

  // One probe of a live, uncovered function (exposed for distribution
  // tests): samples an uncovered influencer with positive marginal,
  // inverse-cost weighted, and assigns it.  Returns the sampled element.
  ElementId probe(FunctionId id);

  // True when g(solution) == g(everything) for the given live function.
  bool covered(FunctionId id) const;

  const ElementSet& solution() const { return solution_; }
  Rat solution_cost() const;
  std::size_t ground_size() const { return costs_.size(); }
  std::size_t live_count() const { return live_.size(); }
  const std::vector<FunctionId>& arrival_order() const {
    return arrival_order_;
  }
  const ElementSet& responsibility(FunctionId id) const;
  const FunctionPtr& function(FunctionId id) const;

  // Probe accounting: probes never exceed probe_budget() (exact rational
  // comparison), where the budget is the sum of arrived totals over fmin.
  std::uint64_t total_probes() const { return probes_; }
  Rat probe_budget() const { return sum_arrived_totals_ / fmin_; }
  const Rat& sum_arrived_totals() const { return sum_arrived_totals_; }

  // Recourse accounting: total elements added plus removed so far.
  std::uint64_t total_recourse() const { return recourse_; }

  // Checks the class invariants; throws std::logic_error on violation.
  void verify() const;

 private:
  struct LiveFunction {
    FunctionPtr fn;
    ElementSet assigned;  // the responsibility set U, always inside solution
  };

  // Uncovered influencers with positive marginal gain, in ascending order.
  std::vector<ElementId> probe_candidates(const LiveFunction& live) const;

  std::vector<Rat> costs_;
  Rat fmin_;
  ElementSet solution_;
  std::map<FunctionId, LiveFunction> live_;
  std::vector<FunctionId> arrival_order_;  // live ids, oldest first
  std::mt19937_64 rng_;
  std::uint64_t probes_ = 0;
  std::uint64_t recourse_ = 0;
  Rat sum_arrived_totals_ = 0;
  std::set<FunctionId> seen_ids_;  // ids must be fresh across the run
};

}  // namespace dyncover

#endif  // DYNCOVER_RJUNTA_HPP_
