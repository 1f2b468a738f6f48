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

// The fully-dynamic driver: applies function insert/delete events to an
// active set, restabilizes the permutation engine after each one, and
// records solutions, recourse (both the true symmetric difference and the
// pay-two-upfront accounting the analysis bounds), potential audits, and
// optional per-step optimum comparisons.

#ifndef DYNCOVER_DYNAMIC_COVER_HPP_
#define DYNCOVER_DYNAMIC_COVER_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "dyncover/element_set.hpp"
#include "dyncover/permutation_engine.hpp"
#include "dyncover/potentials.hpp"
#include "dyncover/rational.hpp"
#include "dyncover/submodular.hpp"

namespace dyncover {

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Events and configuration
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

enum class EventKind { kInsert, kDelete };

// One timestep: a function joins or leaves the active collection.
struct Event {
  std::int64_t seq = 0;
  EventKind kind = EventKind::kInsert;
  FunctionId id = 0;
  FunctionPtr fn;  // present for inserts, ignored for deletes
};

// Which optimum oracle runs after every event.
enum class OracleKind {
  kNone,    // no optimum column
  kGreedy,  // density-greedy cover: an upper bound on the optimum
  kBrute,   // exact branch-and-bound optimum (small instances only)
};

struct RunConfig {
  MffMode mode = MffMode::kUnitCost;
  Rat gamma = rat_e2();
  // Declared lower bound on every positive marginal the run will observe;
  // the run fails if an observed positive marginal undercuts it.
  Rat fmin = 1;
  // Declared upper bound on marginals (needed by the rescaled-entropy
  // potential).  Zero lets run_trace derive a sound bound from the trace.
  Rat fmax = 0;
  // Potentials to audit.  Empty selects the defaults for the mode: the
  // Tsallis family for unit costs, power-law plus rescaled entropy for cost
  // ratios (the power law is skipped when the cost spread cannot fund a
  // positive per-move decrease), and the sqrt family for mutual affinity.
  std::vector<PotentialKind> potentials;
  OracleKind oracle = OracleKind::kNone;
};

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Records
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

// Everything recorded about one applied event.
struct StepRecord {
  std::int64_t seq = 0;
  EventKind kind = EventKind::kInsert;
  FunctionId id = 0;
  Rat gt_value = 0;  // inserted function's total value; 0 for deletes

  ElementSet solution;
  Rat solution_cost = 0;
  bool feasible = false;  // f(solution) == f(everything), checked exactly

  std::size_t step_recourse = 0;        // |previous solution XOR new solution|
  std::size_t cumulative_recourse = 0;  // running sum of the above
  std::size_t upfront_recourse = 0;     // running pay-2-per-activation counter
  std::size_t swaps = 0;
  std::size_t gamma_moves = 0;

  std::vector<double> phi;  // value per enabled potential, after stabilizing
  std::size_t audits = 0;
  std::size_t audit_failures = 0;
  bool scaling_ok = true;  // declared extremes dominated all snapshots

  // Optimum comparison (filled when an oracle is enabled and f is not
  // identically zero).
  bool opt_exact = false;  // true for the branch-and-bound oracle
  Rat opt_cost = 0;
  Rat fmax_t = 0;                    // largest singleton value of f this step
  double competitive_constant = 0;   // assembled multiplier on the optimum
  bool competitive_ok = true;        // cost <= constant * optimum (exact opt)
};

// Whole-run roll-up.
struct RunResult {
  std::vector<StepRecord> steps;

  // Column order for StepRecord::phi and the arrays below.
  std::vector<PotentialKind> potentials;
  // Closed-form move budget per potential: insert_bound(sum_gt)/decrease.
  std::vector<double> move_budget;
  // Twice the move budget: the upfront-accounting recourse bound.
  std::vector<double> recourse_budget;
  // Budget identity per potential: moves * decrease <= granted budget.
  std::vector<bool> budget_ok;
  // Failed audits kept for diagnostics (empty on a clean run).
  std::vector<AuditRecord> failed_audits;

  Rat sum_gt = 0;  // total value of all inserted functions
  std::size_t total_recourse = 0;
  std::size_t upfront_recourse = 0;
  std::size_t total_swaps = 0;
  std::size_t total_gamma_moves = 0;

  bool all_audits_pass = true;
  bool all_feasible = true;
  bool all_competitive_ok = true;
  bool scaling_ok = true;

  // True when every audit, feasibility check, and (exact-oracle)
  // competitive check passed and all declared extremes held.
  bool clean() const {
    return all_audits_pass && all_feasible && all_competitive_ok && scaling_ok;
  }
};

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Runner
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

// Applies events one at a time.  Invalid events throw std::invalid_argument
// and leave all state untouched; an observed positive marginal below the
// declared minimum throws std::runtime_error naming the offending value.
// The element universe (ids and costs) is fixed at construction.
class DynamicCoverRunner {
 public:
  // `config.fmax` must be positive if any enabled potential needs it; the
  // run_trace helper below derives one from a whole trace.
  DynamicCoverRunner(RunConfig config, std::vector<Rat> costs);

  // Applies one event: validates it, updates the active set and the engine,
  // restabilizes while auditing every atomic move, and appends a record.
  const StepRecord& step(const Event& ev);

  // Finalizes the roll-up over all steps so far.
  RunResult result() const;

  const RunConfig& config() const { return config_; }
  const PermutationEngine& engine() const { return engine_; }
  const ActiveSet& active() const { return active_; }
  const std::vector<PotentialAuditor>& auditors() const { return auditors_; }

 private:
  void audit_pair(const EngineSnapshot& before, const EngineSnapshot& after,
                  AuditEventKind kind, double gt, StepRecord& rec);
  void validate_marginals() const;
  void note_activations(const ElementSet& before, const ElementSet& after);
  void fill_oracle_block(StepRecord& rec);

  RunConfig config_;
  std::vector<Rat> costs_;
  PermutationEngine engine_;
  ActiveSet active_;
  FunctionPtr current_fn_;  // sum of the live functions

  std::vector<PotentialAuditor> auditors_;
  std::vector<BudgetLedger> ledgers_;

  std::vector<StepRecord> steps_;
  std::vector<AuditRecord> failed_audits_;
  std::set<FunctionId> used_ids_;
  ElementSet last_solution_;
  Rat sum_gt_ = 0;
  std::size_t cumulative_recourse_ = 0;
  std::size_t upfront_recourse_ = 0;
  bool scaling_ok_ = true;
};

// Convenience loop: derives a declared-maximum bound from the trace when the
// config leaves it at zero (the largest over elements of the summed
// singleton values of every inserted function), then applies all events.
RunResult run_trace(RunConfig config, std::vector<Rat> costs,
                    const std::vector<Event>& events);

}  // namespace dyncover

#endif  // DYNCOVER_DYNAMIC_COVER_HPP_
