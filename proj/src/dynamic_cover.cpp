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

// Event application, recourse accounting, audit wiring, and per-step
// optimum comparisons for the fully-dynamic driver.

#include "dyncover/dynamic_cover.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>

#include "dyncover/oracles.hpp"

namespace dyncover {

namespace {

// Exact cost extremes of the element universe, as doubles for the
// potential-parameter block.
std::pair<double, double> cost_extremes(const std::vector<Rat>& costs) {
  Rat lo = costs.front(), hi = costs.front();
  for (const Rat& c : costs) {
    if (c < lo) lo = c;
    if (c > hi) hi = c;
  }
  return {to_double(lo), to_double(hi)};
}

// Default potential families for a mode.  The power law is included only
// when its per-move decrease is positive for the given spread; the caller
// can still request it explicitly and take the construction error.
std::vector<PotentialKind> default_potentials(MffMode mode,
                                              const PotentialParams& params) {
  switch (mode) {
    case MffMode::kUnitCost:
      return {PotentialKind::kTsallis};
    case MffMode::kCostRatio: {
      std::vector<PotentialKind> kinds;
      try {
        PotentialAuditor(PotentialKind::kPowerLawH, params);
        kinds.push_back(PotentialKind::kPowerLawH);
      } catch (const std::invalid_argument&) {
        // Not enough cost spread: skip the power law, keep the entropy.
      }
      kinds.push_back(PotentialKind::kShannon);
      return kinds;
    }
    case MffMode::kMutualAffinity:
      return {PotentialKind::kSqrt};
  }
  return {};
}

}  // namespace

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Construction
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

DynamicCoverRunner::DynamicCoverRunner(RunConfig config, std::vector<Rat> costs)
    : config_(std::move(config)),
      costs_(std::move(costs)),
      engine_(config_.mode, config_.gamma, costs_, nullptr),
      active_(costs_.size()),
      last_solution_(costs_.size()) {
  if (!(config_.fmin > 0)) {
    throw std::invalid_argument("run config: declared fmin must be positive");
  }
  if (!(config_.fmax >= config_.fmin)) {
    throw std::invalid_argument(
        "run config: declared fmax must be at least fmin (run_trace can "
        "derive one from a whole trace)");
  }
  PotentialParams params;
  params.gamma = to_double(config_.gamma);
  params.fmin = to_double(config_.fmin);
  params.fmax = to_double(config_.fmax);
  auto [cmin, cmax] = cost_extremes(costs_);
  params.cmin = cmin;
  params.cmax = cmax;

  std::vector<PotentialKind> kinds =
      config_.potentials.empty() ? default_potentials(config_.mode, params)
                                 : config_.potentials;
  for (PotentialKind kind : kinds) {
    if (!PotentialAuditor::compatible(kind, config_.mode)) {
      throw std::invalid_argument("run config: potential '" +
                                  potential_name(kind) +
                                  "' does not fit the selected mode");
    }
    auditors_.emplace_back(kind, params);
  }
  ledgers_.resize(auditors_.size());
  current_fn_ = active_.as_sum();
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Internals
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

void DynamicCoverRunner::audit_pair(const EngineSnapshot& before,
                                    const EngineSnapshot& after,
                                    AuditEventKind kind, double gt,
                                    StepRecord& rec) {
  for (std::size_t a = 0; a < auditors_.size(); ++a) {
    AuditRecord audit = auditors_[a].audit_event(before, after, kind, gt);
    ++rec.audits;
    if (!audit.pass) {
      ++rec.audit_failures;
      failed_audits_.push_back(audit);
    }
    if (!audit.scaling_ok) {
      rec.scaling_ok = false;
      scaling_ok_ = false;
    }
    if (kind == AuditEventKind::kInsert) {
      ledgers_[a].add_insertion(auditors_[a].insert_bound(gt));
    } else if (kind == AuditEventKind::kGammaMove) {
      ledgers_[a].add_gamma_moves(1);
    }
  }
}

// Every positive marginal the engine can see must respect the declaration.
void DynamicCoverRunner::validate_marginals() const {
  for (std::size_t i = 0; i < engine_.live_count(); ++i) {
    const Rat m = engine_.raw_marginal_at(i);
    if (m > 0 && m < config_.fmin) {
      throw std::runtime_error(
          "declared minimum marginal violated: observed " + to_string(m) +
          " below " + to_string(config_.fmin));
    }
  }
}

// The analysis pays recourse 2 the moment an element's value turns positive;
// that prepays its eventual departure.
void DynamicCoverRunner::note_activations(const ElementSet& before,
                                          const ElementSet& after) {
  const std::size_t joined = (after & ~before).count();
  upfront_recourse_ += 2 * joined;
}

void DynamicCoverRunner::fill_oracle_block(StepRecord& rec) {
  if (config_.oracle == OracleKind::kNone) return;
  if (current_fn_->total() == 0) {
    // Nothing to cover: the optimum is the empty set.
    rec.opt_exact = true;
    rec.opt_cost = 0;
    rec.competitive_ok = rec.solution_cost == 0;
    return;
  }
  if (config_.oracle == OracleKind::kBrute) {
    rec.opt_exact = true;
    rec.opt_cost = brute_force_cover(*current_fn_, costs_).cost;
  } else {
    rec.opt_exact = false;
    rec.opt_cost = offline_greedy(*current_fn_, costs_).cost;
  }

  // Largest singleton value of the current objective (an exact bound on
  // every marginal this step, by submodularity).
  const ElementSet empty = empty_set(current_fn_->ground_size());
  Rat fmax_t = 0;
  for (ElementId u = 0; u < current_fn_->ground_size(); ++u) {
    const Rat s = current_fn_->marginal(u, empty);
    if (s > fmax_t) fmax_t = s;
  }
  rec.fmax_t = fmax_t;

  const double gamma = to_double(config_.gamma);
  const double fmin = to_double(config_.fmin);
  if (config_.mode == MffMode::kMutualAffinity) {
    // Assembled level bound: stable solutions cost at most gamma^2 times the
    // optimum per occupied value level, plus sqrt(gamma) times the optimum
    // for the band of levels above (f_total)^2 / (fmin * opt^2).
    const double opt = to_double(rec.opt_cost);
    const double total = to_double(current_fn_->total());
    const double hi = total * total / (fmin * opt * opt);
    std::set<long> levels;
    const EngineSnapshot snap = engine_.snapshot();
    for (double v : snap.mff) {
      if (v > 0.0 && v < hi) {
        levels.insert(static_cast<long>(
            std::floor(std::log(v) / std::log(gamma))));
      }
    }
    rec.competitive_constant =
        gamma * gamma * static_cast<double>(levels.size()) +
        std::sqrt(gamma);
  } else {
    // Stable solutions shadow a density-greedy run within a factor of
    // 1/gamma, so the classic harmonic bound applies with a gamma factor.
    const double ratio = to_double(rec.fmax_t) / fmin;
    rec.competitive_constant = gamma * (std::log(ratio) + 1.0);
  }
  if (rec.opt_exact) {
    rec.competitive_ok =
        to_double(rec.solution_cost) <=
        rec.competitive_constant * to_double(rec.opt_cost);
  }
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Event application
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

const StepRecord& DynamicCoverRunner::step(const Event& ev) {
  // Validate fully before touching any state.
  if (ev.kind == EventKind::kInsert) {
    if (!ev.fn) {
      throw std::invalid_argument("insert event carries no function");
    }
    if (ev.fn->ground_size() != costs_.size()) {
      throw std::invalid_argument(
          "insert event: function ground size mismatch");
    }
    if (used_ids_.count(ev.id) != 0) {
      throw std::invalid_argument("insert event: id is not fresh");
    }
    // Positive singleton values are marginals; check the declaration now so
    // a bad function is rejected before it mutates anything.
    const ElementSet empty = empty_set(costs_.size());
    for (ElementId u = 0; u < costs_.size(); ++u) {
      const Rat s = ev.fn->marginal(u, empty);
      if (s > 0 && s < config_.fmin) {
        throw std::runtime_error(
            "declared minimum marginal violated: inserted function has "
            "singleton value " +
            to_string(s) + " below " + to_string(config_.fmin));
      }
    }
  } else {
    if (!active_.contains(ev.id)) {
      throw std::invalid_argument("delete event: id is not live");
    }
  }

  StepRecord rec;
  rec.seq = ev.seq;
  rec.kind = ev.kind;
  rec.id = ev.id;

  const ElementSet before_solution = last_solution_;
  EngineSnapshot before = engine_.snapshot();

  double gt = 0.0;
  if (ev.kind == EventKind::kInsert) {
    rec.gt_value = ev.fn->total();
    gt = to_double(rec.gt_value);
    sum_gt_ += rec.gt_value;
    used_ids_.insert(ev.id);
    active_.insert(ev.id, ev.fn);
  } else {
    active_.erase(ev.id);
  }
  current_fn_ = active_.as_sum();
  engine_.set_function(current_fn_);

  // The objective changed under a fixed ordering: audit the jump in the
  // potentials, then account for any elements whose value turned positive.
  EngineSnapshot cached = engine_.snapshot();
  audit_pair(before, cached,
             ev.kind == EventKind::kInsert ? AuditEventKind::kInsert
                                           : AuditEventKind::kDelete,
             gt, rec);
  ElementSet cached_solution = engine_.solution();
  note_activations(before_solution, cached_solution);
  validate_marginals();

  // Restabilize, auditing every atomic move.
  StabilizeStats stats = engine_.stabilize([&](const EngineOp& op) {
    EngineSnapshot now = engine_.snapshot();
    audit_pair(cached, now,
               op.kind == EngineOpKind::kSwap ? AuditEventKind::kSwap
                                              : AuditEventKind::kGammaMove,
               0.0, rec);
    ElementSet now_solution = engine_.solution();
    note_activations(cached_solution, now_solution);
    cached = std::move(now);
    cached_solution = std::move(now_solution);
  });
  rec.swaps = stats.swaps;
  rec.gamma_moves = stats.gamma_moves;
  validate_marginals();

  // Record the settled state.
  rec.solution = engine_.solution();
  rec.solution_cost = engine_.solution_cost();
  rec.feasible = current_fn_->value(rec.solution) == current_fn_->total();
  rec.step_recourse = (rec.solution ^ before_solution).count();
  cumulative_recourse_ += rec.step_recourse;
  rec.cumulative_recourse = cumulative_recourse_;
  rec.upfront_recourse = upfront_recourse_;
  if (cumulative_recourse_ > upfront_recourse_) {
    throw std::logic_error(
        "recourse accounting: true recourse exceeded the upfront counter");
  }

  const EngineSnapshot settled = engine_.snapshot();
  for (const PotentialAuditor& auditor : auditors_) {
    rec.phi.push_back(auditor.evaluate(settled));
  }

  fill_oracle_block(rec);

  last_solution_ = rec.solution;
  steps_.push_back(std::move(rec));
  return steps_.back();
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Roll-up
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

RunResult DynamicCoverRunner::result() const {
  RunResult out;
  out.steps = steps_;
  out.failed_audits = failed_audits_;
  out.sum_gt = sum_gt_;
  out.total_recourse = cumulative_recourse_;
  out.upfront_recourse = upfront_recourse_;
  out.scaling_ok = scaling_ok_;

  const double sum_gt = to_double(sum_gt_);
  for (std::size_t a = 0; a < auditors_.size(); ++a) {
    out.potentials.push_back(auditors_[a].kind());
    out.move_budget.push_back(auditors_[a].max_gamma_moves(sum_gt));
    out.recourse_budget.push_back(auditors_[a].upfront_recourse_bound(sum_gt));
    out.budget_ok.push_back(
        ledgers_[a].respected(auditors_[a].move_decrease()));
  }
  for (const StepRecord& rec : steps_) {
    out.total_swaps += rec.swaps;
    out.total_gamma_moves += rec.gamma_moves;
    if (rec.audit_failures > 0) out.all_audits_pass = false;
    if (!rec.feasible) out.all_feasible = false;
    if (!rec.competitive_ok) out.all_competitive_ok = false;
  }
  return out;
}

RunResult run_trace(RunConfig config, std::vector<Rat> costs,
                    const std::vector<Event>& events) {
  if (config.fmax == 0) {
    // Sound declared maximum: no marginal of any partial sum can exceed an
    // element's summed singleton values over every function in the trace.
    std::vector<Rat> singleton_sum(costs.size(), Rat(0));
    const ElementSet empty = empty_set(costs.size());
    for (const Event& ev : events) {
      if (ev.kind != EventKind::kInsert || !ev.fn) continue;
      for (ElementId u = 0; u < costs.size(); ++u) {
        singleton_sum[u] += ev.fn->marginal(u, empty);
      }
    }
    Rat fmax = config.fmin;
    for (const Rat& s : singleton_sum) {
      if (s > fmax) fmax = s;
    }
    config.fmax = fmax;
  }
  DynamicCoverRunner runner(std::move(config), std::move(costs));
  for (const Event& ev : events) runner.step(ev);
  return runner.result();
}

}  // namespace dyncover
