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

// Experiment harness: runs one trace under a selected maintenance strategy,
// producing one metrics row per event, a JSON summary, and a clean/failed
// verdict that drives the command-line exit status.

#ifndef DYNCOVER_HARNESS_HPP_
#define DYNCOVER_HARNESS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dyncover/dynamic_cover.hpp"
#include "dyncover/rational.hpp"
#include "dyncover/trace.hpp"

namespace dyncover {

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Options
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

// Which maintenance strategy consumes the trace.
enum class HarnessMode {
  kUnit,      // permutation maintenance, unit-cost marginals
  kCost,      // permutation maintenance, cost-ratio marginals
  kAffinity,  // permutation maintenance, mutual-affinity marginals
  kRJunta,    // randomized probing for low-arity functions
  kCombiner,  // arity-bucketed router over probing children
  kMst,       // dynamic spanning tree over a metric trace
  kSteiner,   // dynamic Steiner tree over a metric trace
};

// Parses the mode tokens used in trace headers and on the command line:
// unit | cost | affinity | rjunta | combiner | mst | steiner.
HarnessMode parse_harness_mode(const std::string& token);
std::string harness_mode_name(HarnessMode mode);

struct HarnessOptions {
  // Strategy override; unset means "use the trace header's default mode".
  std::optional<HarnessMode> mode;
  Rat gamma = rat_e2();
  // Potential families to audit: tsallis | h | sqrt | shannon | all.
  // "all" enables every family applicable to the selected mode.
  std::string audit = "all";
  OracleKind oracle = OracleKind::kNone;
  std::uint64_t seed = 0;  // randomized strategies only
  // Declared extremes; zero means "take the trace header's declaration".
  Rat fmin = 0;
  Rat fmax = 0;
};

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Results
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

// One metrics row per applied event.
struct MetricsRow {
  std::int64_t seq = 0;
  std::string event;         // insert | delete | arrive | depart
  double solution_cost = 0;
  bool has_opt = false;      // optimum column populated this row
  double opt_cost = 0;
  double ratio = 0;          // solution_cost / opt_cost when has_opt
  std::size_t step_recourse = 0;
  std::size_t cumulative_recourse = 0;
  double gain = 0;           // inserted function's total value; 0 otherwise
  std::vector<double> phi;   // one value per audited potential
  bool audits_ok = true;     // every audit row this event passed
  bool feasible = true;      // solution covers all live demand, exactly
};

struct HarnessResult {
  HarnessMode mode = HarnessMode::kUnit;
  std::vector<std::string> phi_names;  // column labels for MetricsRow::phi
  std::vector<MetricsRow> rows;

  // Roll-ups (fields apply where meaningful for the mode; others stay 0).
  double sum_gt = 0;                  // total value of inserted functions
  std::size_t total_recourse = 0;
  std::size_t upfront_recourse = 0;   // permutation modes
  std::size_t total_swaps = 0;
  std::size_t total_gamma_moves = 0;
  std::vector<double> move_budget;    // per potential / tree auditor
  std::vector<double> recourse_budget;
  std::vector<bool> budget_ok;
  std::size_t audits = 0;
  std::size_t audit_failures = 0;
  std::uint64_t probes = 0;           // rjunta
  double probe_budget = 0;            // rjunta
  std::uint64_t child_recourse = 0;   // combiner
  std::uint64_t union_recourse = 0;   // combiner

  // Human-readable notes for every failed check (empty on a clean run).
  std::vector<std::string> failures;
  // True iff no audit or invariant failed; drives the CLI exit status.
  bool ok = true;

  // The JSON summary text (pretty-printed object).
  std::string summary;
};

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Entry points
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

// Validates the trace and runs it to completion under the selected strategy.
// Throws std::invalid_argument for structural problems (bad trace, mode /
// trace-kind mismatch, non-junta functions in rjunta mode) and
// std::runtime_error when an observed marginal undercuts the declared
// minimum.  Check failures (audits, feasibility, budgets) do not throw;
// they are recorded in `failures` and clear `ok`.
HarnessResult run_harness(const TraceFile& trace, const HarnessOptions& opts);

// Renders the per-event metrics table as CSV (header row included).
std::string metrics_csv(const HarnessResult& result);

// Aggregates the metrics into plottable (x, y) series — cumulative recourse
// against total inserted value, and cost ratio against time — as a JSON
// object of arrays.
std::string plot_series(const HarnessResult& result);

}  // namespace dyncover

#endif  // DYNCOVER_HARNESS_HPP_
