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

// Randomized junta cover: inverse-cost probing, responsibility tracking,
// and arrival-order re-probing on departures.

#include "dyncover/rjunta.hpp"

#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace dyncover {

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Seed derivation and weighted sampling
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined state: the standard mixer for
  // deriving well-separated streams from sequential inputs.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ElementId sample_inverse_cost(const std::vector<ElementId>& candidates,
                              const std::vector<Rat>& costs,
                              std::mt19937_64& rng) {
  if (candidates.empty()) {
    throw std::logic_error("inverse-cost sampling: no candidates");
  }
  Rat total = 0;
  for (ElementId u : candidates) {
    if (costs.at(u) <= 0) {
      throw std::invalid_argument("inverse-cost sampling: nonpositive cost");
    }
    total += Rat(1) / costs[u];
  }
  // Inverse CDF at the exact rational point total * draw / 2^64.
  static const Rat kTwo64 =
      Rat(std::numeric_limits<std::uint64_t>::max()) + 1;
  const Rat target = total * Rat(rng()) / kTwo64;
  Rat prefix = 0;
  for (ElementId u : candidates) {
    prefix += Rat(1) / costs[u];
    if (prefix > target) return u;
  }
  return candidates.back();
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Junta cover state
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

JuntaCoverState::JuntaCoverState(std::vector<Rat> costs, std::uint64_t seed,
                                 Rat fmin)
    : costs_(std::move(costs)),
      fmin_(std::move(fmin)),
      solution_(costs_.size()),
      rng_(seed) {
  if (fmin_ <= 0) {
    throw std::invalid_argument("junta cover: fmin must be positive");
  }
  for (const Rat& c : costs_) {
    if (c <= 0) {
      throw std::invalid_argument("junta cover: costs must be positive");
    }
  }
}

bool JuntaCoverState::covered(FunctionId id) const {
  const LiveFunction& live = live_.at(id);
  // The junta evaluates through its own variables only, so this value query
  // costs time proportional to the influencer count, not the ground size.
  return live.fn->value(solution_) == live.fn->total();
}

std::vector<ElementId> JuntaCoverState::probe_candidates(
    const LiveFunction& live) const {
  std::vector<ElementId> out;
  const ElementSet& influencers = live.fn->support();
  for (ElementId u = influencers.find_first(); u != ElementSet::npos;
       u = influencers.find_next(u)) {
    if (solution_.test(u)) continue;
    if (live.fn->marginal(u, solution_) > 0) out.push_back(u);
  }
  return out;
}

ElementId JuntaCoverState::probe(FunctionId id) {
  auto it = live_.find(id);
  if (it == live_.end()) {
    throw std::invalid_argument("junta cover: probe of a non-live function");
  }
  LiveFunction& live = it->second;
  if (covered(id)) {
    throw std::invalid_argument("junta cover: probe of a covered function");
  }
  const std::vector<ElementId> candidates = probe_candidates(live);
  if (candidates.empty()) {
    // For a monotone submodular function an uncovered state always admits a
    // positive-marginal influencer, so this indicates a malformed table.
    throw std::runtime_error(
        "junta cover: function " + std::to_string(id) +
        " is uncovered but no remaining influencer can raise it");
  }
  const ElementId u = sample_inverse_cost(candidates, costs_, rng_);
  const Rat gain = live.fn->marginal(u, solution_);
  if (gain < fmin_) {
    throw std::runtime_error(
        "declared minimum marginal violated: observed " + to_string(gain) +
        " below " + to_string(fmin_));
  }
  solution_.set(u);
  live.assigned.set(u);
  ++probes_;
  return u;
}

std::size_t JuntaCoverState::on_arrival(FunctionId id, const FunctionPtr& fn) {
  if (!fn) {
    throw std::invalid_argument("junta cover: arrival without a function");
  }
  if (fn->ground_size() != costs_.size()) {
    throw std::invalid_argument("junta cover: ground size mismatch");
  }
  if (fn->kind() != FunctionKind::kJunta) {
    throw std::invalid_argument(
        "junta cover: functions must be explicitly junta-typed");
  }
  if (!seen_ids_.insert(id).second) {
    throw std::invalid_argument("junta cover: function id " +
                                std::to_string(id) + " was already used");
  }
  live_.emplace(id, LiveFunction{fn, ElementSet(costs_.size())});
  arrival_order_.push_back(id);
  sum_arrived_totals_ += fn->total();
  std::size_t added = 0;
  while (!covered(id)) {
    probe(id);
    ++added;
  }
  recourse_ += added;
  return added;
}

std::size_t JuntaCoverState::on_departure(FunctionId id) {
  auto it = live_.find(id);
  if (it == live_.end()) {
    throw std::invalid_argument("junta cover: departure of id " +
                                std::to_string(id) + " which is not live");
  }
  const ElementSet before = solution_;
  solution_ -= it->second.assigned;
  live_.erase(it);
  for (auto order = arrival_order_.begin(); order != arrival_order_.end();
       ++order) {
    if (*order == id) {
      arrival_order_.erase(order);
      break;
    }
  }
  // Probes only grow the solution, so one pass in arrival order settles
  // every function the removal uncovered.
  for (FunctionId live_id : arrival_order_) {
    while (!covered(live_id)) probe(live_id);
  }
  const std::size_t delta = (before ^ solution_).count();
  recourse_ += delta;
  return delta;
}

Rat JuntaCoverState::solution_cost() const {
  Rat cost = 0;
  for (ElementId u = solution_.find_first(); u != ElementSet::npos;
       u = solution_.find_next(u)) {
    cost += costs_[u];
  }
  return cost;
}

const ElementSet& JuntaCoverState::responsibility(FunctionId id) const {
  return live_.at(id).assigned;
}

const FunctionPtr& JuntaCoverState::function(FunctionId id) const {
  return live_.at(id).fn;
}

void JuntaCoverState::verify() const {
  ElementSet owned(costs_.size());
  for (const auto& [id, live] : live_) {
    if (!(live.assigned - live.fn->support()).none()) {
      throw std::logic_error(
          "junta cover: responsibility escapes the influencer set");
    }
    if (!(live.assigned - solution_).none()) {
      throw std::logic_error(
          "junta cover: responsibility escapes the solution");
    }
    if (live.fn->value(solution_) != live.fn->total()) {
      throw std::logic_error("junta cover: live function uncovered");
    }
    owned |= live.assigned;
  }
  if (owned != solution_) {
    throw std::logic_error(
        "junta cover: solution is not the union of responsibilities");
  }
  if (arrival_order_.size() != live_.size()) {
    throw std::logic_error("junta cover: arrival order out of sync");
  }
}

}  // namespace dyncover
