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

// Potential functions that certify bounded recourse.  Each potential maps an
// engine snapshot to a nonnegative real and comes with event bounds: function
// insertion may raise it by at most a budget proportional to the newcomer's
// total value, deletions/swaps/cleanups never raise it, and every jump move
// lowers it by a fixed positive amount.  Auditors check those bounds on
// before/after snapshot pairs; a ledger accumulates the budget identity that
// turns per-event bounds into a whole-run recourse certificate.

#ifndef DYNCOVER_POTENTIALS_HPP_
#define DYNCOVER_POTENTIALS_HPP_

#include <cstdint>
#include <string>

#include "dyncover/permutation_engine.hpp"

namespace dyncover {

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Potential families
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

// The four supported potential families.  Each is compatible with exactly the
// value-normalization modes listed next to it.
enum class PotentialKind {
  kTsallis,    // sum of mff^alpha, alpha = 1/ln(gamma); unit-cost mode
  kPowerLawH,  // sum of c * h(mff), h(x) = x^(1-delta)/(1-delta); cost-ratio
  kSqrt,       // sum of c * sqrt(mff); mutual-affinity mode
  kShannon,    // sum of k~ * ln(c~ / k~) in rescaled units; cost-ratio
};

// Lower-case stable name used in CSV output and CLI flags.
std::string potential_name(PotentialKind kind);

// Declared run-wide extremes the bounds are expressed in.  All five must be
// positive, with fmin <= fmax and cmin <= cmax.  `fmin`/`fmax` bound every
// positive marginal value observed during the run; `cmin`/`cmax` bound the
// element costs.
struct PotentialParams {
  double gamma = 0.0;
  double fmin = 0.0;
  double fmax = 0.0;
  double cmin = 0.0;
  double cmax = 0.0;
  // Optional power-law exponent override, used by the tree instantiations
  // (which tie it to the metric's aspect ratio).  Zero selects the default
  // 1 / (ln(cmax/cmin) + 1); any other value must lie in (0, 1) and still
  // yield a positive per-move decrease.
  double power_delta = 0.0;
};

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Audit records
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

// The atomic events a potential is audited across.
enum class AuditEventKind {
  kInsert,     // a function joined the active set (bound: insertion budget)
  kDelete,     // a function left the active set (bound: 0)
  kSwap,       // one adjacent transposition during sorting (bound: 0)
  kGammaMove,  // one long-range jump (bound: -per-move decrease)
  kCleanup,    // a structural replacement that must not pay (bound: 0)
};

// Lower-case stable name used in CSV output.
std::string audit_event_name(AuditEventKind kind);

// Relative slack applied at the bound: an audit passes when the observed
// change is at most bound + tol * max(1, |phi before|, |phi after|).
inline constexpr double kAuditTolerance = 1e-9;

// Outcome of checking one event against one potential's bound.
struct AuditRecord {
  PotentialKind potential = PotentialKind::kTsallis;
  AuditEventKind event = AuditEventKind::kInsert;
  double phi_before = 0.0;
  double phi_after = 0.0;
  double bound = 0.0;  // allowed upper limit on phi_after - phi_before
  bool pass = false;
  // True when the declared extremes really dominated the observed snapshot
  // values (costs within [cmin, cmax], positive marginals within
  // [fmin, fmax]).  A false flag means the declared parameters were too
  // small for this run and the bound is not trustworthy.
  bool scaling_ok = true;
};

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Auditor
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

// Evaluates one potential family and checks its event bounds.  Construction
// validates the parameters for the family (jump-factor thresholds, positive
// per-move decrease, and for the power law a numeric grid check of the
// shape properties the proofs rest on); invalid parameters throw.
class PotentialAuditor {
 public:
  PotentialAuditor(PotentialKind kind, const PotentialParams& params);

  PotentialKind kind() const { return kind_; }
  const PotentialParams& params() const { return params_; }

  // Derived constants.  `alpha` is meaningful for the Tsallis family,
  // `delta`/`eps_gamma` for the power law; the others return 0.
  double alpha() const { return alpha_; }
  double delta() const { return delta_; }
  double eps_gamma() const { return eps_gamma_; }

  // Whether this family's bounds apply to snapshots from the given mode.
  static bool compatible(PotentialKind kind, MffMode mode);

  // The potential value of a snapshot; nonnegative whenever the declared
  // extremes dominate the snapshot.  Throws on an incompatible mode.
  double evaluate(const EngineSnapshot& snapshot) const;

  // Allowed potential increase when a function of total value `gt_value`
  // joins the active set.  Linear in `gt_value`.
  double insert_bound(double gt_value) const;

  // Guaranteed potential decrease per jump move (a positive number).
  double move_decrease() const;

  // Largest number of jump moves the budget identity admits for a run whose
  // inserted functions total `sum_gt`: insert_bound(sum_gt)/move_decrease().
  double max_gamma_moves(double sum_gt) const;

  // Whole-run changes-to-solution bound: each jump move adds at most one
  // element, and each addition prepays one eventual removal, so recourse is
  // at most twice the move budget.
  double upfront_recourse_bound(double sum_gt) const;

  // Checks one event: evaluates both snapshots, picks the bound for the
  // event kind (using `gt_value` for insertions), and applies the tolerance
  // rule.  Also verifies the declared extremes against both snapshots.
  AuditRecord audit_event(const EngineSnapshot& before,
                          const EngineSnapshot& after, AuditEventKind event,
                          double gt_value = 0.0) const;

 private:
  void validate() const;

  PotentialKind kind_;
  PotentialParams params_;
  double alpha_ = 0.0;
  double delta_ = 0.0;
  double eps_gamma_ = 0.0;
};

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Budget ledger
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

// Accumulates the two sides of the budget identity over a run: the total
// insertion budget granted and the number of jump moves spent.  Because the
// potential starts at zero and never goes negative, moves * per-move
// decrease can never exceed the granted budget.
struct BudgetLedger {
  double insertion_budget = 0.0;
  std::uint64_t gamma_moves = 0;

  void add_insertion(double bound) { insertion_budget += bound; }
  void add_gamma_moves(std::uint64_t count) { gamma_moves += count; }

  // moves * decrease <= budget, up to the audit tolerance.
  bool respected(double per_move_decrease) const;
};

}  // namespace dyncover

#endif  // DYNCOVER_POTENTIALS_HPP_
