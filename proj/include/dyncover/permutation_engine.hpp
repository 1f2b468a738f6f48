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

// The permutation local-search engine.  It maintains an ordering pi of the
// live elements together with each element's filtered marginal value (its
// contribution given everything placed earlier, normalized per mode), and
// restores stability by adjacent swaps followed by long-range jump moves
// that must beat every jumped value by a factor gamma.  The solution at any
// moment is the set of elements with positive value.  All values and move
// legality checks are exact rationals.

#ifndef DYNCOVER_PERMUTATION_ENGINE_HPP_
#define DYNCOVER_PERMUTATION_ENGINE_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dyncover/element_set.hpp"
#include "dyncover/rational.hpp"
#include "dyncover/submodular.hpp"

namespace dyncover {

// How an element's value at its position is normalized.
enum class MffMode {
  kUnitCost,        // marginal value given the prefix
  kCostRatio,       // marginal value per unit cost
  kMutualAffinity,  // cost-scaled overlap with the cost-ascending order
};

// A jump move: `element` leaves `from_pos`, re-enters at `to_pos` earlier in
// the order, with value `new_mff` that is at least gamma times every value it
// jumped over.
struct GammaMove {
  ElementId element = 0;
  std::size_t from_pos = 0;
  std::size_t to_pos = 0;
  Rat new_mff;
};

// One atomic engine mutation, reported to the observer after it applies.
enum class EngineOpKind { kSwap, kGammaMove };

struct EngineOp {
  EngineOpKind kind;
  // kSwap: the pair (swap_pos - 1, swap_pos) exchanged places.
  std::size_t swap_pos = 0;
  // kGammaMove: the applied move.
  GammaMove move;
};

using MoveObserver = std::function<void(const EngineOp&)>;

struct StabilizeStats {
  std::size_t swaps = 0;
  std::size_t gamma_moves = 0;
};

// Numeric view of the engine state, sufficient to evaluate any potential.
struct EngineSnapshot {
  MffMode mode = MffMode::kUnitCost;
  std::vector<double> mff;   // by position
  std::vector<double> cost;  // cost of the element at each position
  std::vector<double> raw;   // unnormalized marginal value at each position
};

class PermutationEngine {
 public:
  // `fn` may be null to start with the zero objective.  `costs[id]` must be
  // positive for every element id < costs.size(); all of them start live, in
  // id order.
  PermutationEngine(MffMode mode, Rat gamma, std::vector<Rat> costs,
                    FunctionPtr fn = nullptr);

  MffMode mode() const { return mode_; }
  const Rat& gamma() const { return gamma_; }

  // Width of element bitsets: one bit per ever-allocated element id.
  std::size_t universe_size() const { return costs_.size(); }
  std::size_t live_count() const { return pi_.size(); }
  bool is_live(ElementId id) const {
    return id < pos_.size() && pos_[id] != kNoPosition;
  }

  const std::vector<ElementId>& permutation() const { return pi_; }
  const std::vector<ElementId>& cost_order() const { return psi_; }
  std::size_t position_of(ElementId id) const;
  const Rat& mff_at(std::size_t pos) const { return mff_.at(pos); }
  const Rat& cost(ElementId id) const { return costs_.at(id); }
  Rat min_live_cost() const;

  // f(pi_pos | earlier elements): the unnormalized marginal at a position.
  Rat raw_marginal_at(std::size_t pos) const;

  // Elements with positive value, and their total cost.
  ElementSet solution() const;
  Rat solution_cost() const;

  EngineSnapshot snapshot() const;

  // Replaces the objective (same ordering) and recomputes every value.  The
  // function's ground size must equal universe_size().
  void set_function(FunctionPtr fn);

  // Runs adjacent swaps to a fixpoint, then alternates jump moves with
  // re-sorting until neither applies.  The observer (optional) fires after
  // each atomic move.  Throws std::runtime_error("non-termination
  // suspected") if the move cap is exceeded.
  StabilizeStats stabilize(const MoveObserver& observer = {});

  // Performs exactly one atomic move — the same one stabilize() would do
  // next (leftmost improving swap while any exists, otherwise the first
  // legal jump move) — so callers may interleave their own bookkeeping
  // between moves.  Returns the move, or nothing when already stable.
  std::optional<EngineOp> step_once(const MoveObserver& observer = {});

  // The value the element at `from_pos` would take if it were moved to the
  // earlier position `to_pos` with everything else fixed — the quantity jump
  // legality is measured against.
  Rat value_if_moved(std::size_t from_pos, std::size_t to_pos) const;

  // Next jump move under the current ordering, if any: movers are scanned
  // from the tail, target positions from the head, first legal wins.  The
  // mover's value at the new position must be positive and at least gamma
  // times every value in positions [to_pos, from_pos).
  std::optional<GammaMove> find_gamma_move() const;
  void apply_gamma_move(const GammaMove& move,
                        const MoveObserver& observer = {});

  // Dynamic element population (tree instantiations).  New ids may extend
  // the universe; ids are never reused.  `at_pos` defaults to the tail.
  void add_element(ElementId id, Rat cost);
  void add_element_at(ElementId id, Rat cost, std::size_t at_pos);
  void remove_element(ElementId id);
  // Moves a live element to `to_pos` (contents in between shift over).
  void move_element(ElementId id, std::size_t to_pos);

  // Upper bound on atomic moves per stabilize() call; also settable through
  // the DYNCOVER_MOVE_CAP environment variable (the larger wins at
  // construction, explicit calls override).
  void set_move_cap(std::uint64_t cap) { move_cap_ = cap; }
  std::uint64_t move_cap() const { return move_cap_; }

 private:
  static constexpr std::size_t kNoPosition = static_cast<std::size_t>(-1);

  // Throws std::logic_error when element edits left the values stale.
  void require_fresh() const;
  void recompute_range(std::size_t first, std::size_t last);  // inclusive
  Rat mff_of(ElementId id, const ElementSet& prefix,
             Rat raw_marginal) const;
  Rat affinity_value(ElementId id, const ElementSet& pi_prefix) const;
  ElementSet prefix_set(std::size_t count) const;  // first `count` elements
  bool try_swap_at(std::size_t pos);  // applies when strictly improving
  StabilizeStats swap_pass(const MoveObserver& observer, std::uint64_t* ops);

  MffMode mode_;
  Rat gamma_;
  std::vector<Rat> costs_;   // by element id; entries persist after removal
  std::vector<std::size_t> pos_;  // element id -> position or kNoPosition
  std::vector<ElementId> pi_;
  std::vector<ElementId> psi_;        // live ids by (cost, id) ascending
  std::vector<Rat> mff_;              // by position
  std::vector<Rat> prefix_value_;     // prefix_value_[i] = f(pi_0..pi_i)
  FunctionPtr fn_;
  std::uint64_t move_cap_;
};

}  // namespace dyncover

#endif  // DYNCOVER_PERMUTATION_ENGINE_HPP_
