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

// Experiment harness implementation: strategy dispatch, metrics rows, CSV
// and JSON rendering, and the clean/failed verdict.

#include "dyncover/harness.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "dyncover/combiner.hpp"
#include "dyncover/oracles.hpp"
#include "dyncover/rjunta.hpp"
#include "dyncover/trees.hpp"

namespace dyncover {
namespace {

using Json = nlohmann::ordered_json;

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Shared helpers
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

const char* oracle_name(OracleKind kind) {
  switch (kind) {
    case OracleKind::kNone:
      return "none";
    case OracleKind::kGreedy:
      return "greedy";
    case OracleKind::kBrute:
      return "brute";
  }
  throw std::logic_error("unknown oracle kind");
}

std::vector<Rat> trace_costs(const TraceFile& trace) {
  if (!trace.header.costs.empty()) return trace.header.costs;
  return std::vector<Rat>(trace.header.ground_size, Rat(1));
}

Rat pick(const Rat& override_value, const Rat& declared) {
  return override_value != 0 ? override_value : declared;
}

// Maps the --audit token to an explicit potential list; empty means "all
// families applicable to the mode" (the runner's documented default).
std::vector<PotentialKind> audit_selection(const std::string& token) {
  if (token == "all") return {};
  if (token == "tsallis") return {PotentialKind::kTsallis};
  if (token == "h") return {PotentialKind::kPowerLawH};
  if (token == "sqrt") return {PotentialKind::kSqrt};
  if (token == "shannon") return {PotentialKind::kShannon};
  throw std::invalid_argument(
      "unknown audit selection '" + token +
      "' (expected tsallis, h, sqrt, shannon, or all)");
}

// Fills the summary skeleton common to every strategy; callers add their
// strategy-specific block before serializing.
Json base_summary(const HarnessResult& result, const HarnessOptions& opts) {
  Json j;
  j["mode"] = harness_mode_name(result.mode);
  j["gamma"] = to_string(opts.gamma);
  j["oracle"] = oracle_name(opts.oracle);
  j["events"] = result.rows.size();
  j["sum_gt"] = result.sum_gt;
  j["total_recourse"] = result.total_recourse;
  j["audits"] = result.audits;
  j["audit_failures"] = result.audit_failures;
  j["ok"] = result.ok;
  j["failures"] = result.failures;
  return j;
}

void finish(HarnessResult& result, Json summary) {
  summary["ok"] = result.ok;
  summary["failures"] = result.failures;
  result.summary = summary.dump(2);
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Permutation strategies (unit / cost / affinity)
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

MffMode mff_mode(HarnessMode mode) {
  switch (mode) {
    case HarnessMode::kUnit:
      return MffMode::kUnitCost;
    case HarnessMode::kCost:
      return MffMode::kCostRatio;
    case HarnessMode::kAffinity:
      return MffMode::kMutualAffinity;
    default:
      throw std::logic_error("not a permutation mode");
  }
}

std::vector<Event> cover_events(const TraceFile& trace) {
  std::vector<Event> events;
  events.reserve(trace.events.size());
  for (const TraceEvent& te : trace.events) {
    Event ev;
    ev.seq = te.seq;
    ev.id = te.id;
    if (te.kind == TraceEventKind::kInsert) {
      ev.kind = EventKind::kInsert;
      ev.fn = build_function(*te.fn, trace.header.ground_size);
    } else {
      ev.kind = EventKind::kDelete;
    }
    events.push_back(std::move(ev));
  }
  return events;
}

HarnessResult run_permutation(const TraceFile& trace,
                              const HarnessOptions& opts, HarnessMode mode) {
  RunConfig config;
  config.mode = mff_mode(mode);
  config.gamma = opts.gamma;
  config.fmin = pick(opts.fmin, trace.header.fmin);
  config.fmax = pick(opts.fmax, trace.header.fmax);
  config.potentials = audit_selection(opts.audit);
  config.oracle = opts.oracle;

  const RunResult run = run_trace(config, trace_costs(trace),
                                  cover_events(trace));

  HarnessResult result;
  result.mode = mode;
  for (PotentialKind kind : run.potentials) {
    result.phi_names.push_back(potential_name(kind));
  }
  for (const StepRecord& step : run.steps) {
    MetricsRow row;
    row.seq = step.seq;
    row.event = step.kind == EventKind::kInsert ? "insert" : "delete";
    row.solution_cost = to_double(step.solution_cost);
    if (config.oracle != OracleKind::kNone && step.opt_cost > 0) {
      row.has_opt = true;
      row.opt_cost = to_double(step.opt_cost);
      row.ratio = to_double(step.solution_cost / step.opt_cost);
    }
    row.step_recourse = step.step_recourse;
    row.cumulative_recourse = step.cumulative_recourse;
    row.gain = to_double(step.gt_value);
    row.phi = step.phi;
    row.audits_ok = step.audit_failures == 0 && step.scaling_ok;
    row.feasible = step.feasible;
    if (!row.feasible) {
      result.failures.push_back("event " + std::to_string(step.seq) +
                                ": solution does not cover the live demand");
    }
    result.rows.push_back(std::move(row));
  }

  result.sum_gt = to_double(run.sum_gt);
  result.total_recourse = run.total_recourse;
  result.upfront_recourse = run.upfront_recourse;
  result.total_swaps = run.total_swaps;
  result.total_gamma_moves = run.total_gamma_moves;
  result.move_budget = run.move_budget;
  result.recourse_budget = run.recourse_budget;
  result.budget_ok = run.budget_ok;
  for (const StepRecord& step : run.steps) {
    result.audits += step.audits;
    result.audit_failures += step.audit_failures;
  }
  for (const AuditRecord& bad : run.failed_audits) {
    result.failures.push_back("audit failure: potential " +
                              potential_name(bad.potential) + " on a " +
                              audit_event_name(bad.event) + " step");
  }
  if (!run.scaling_ok) {
    result.failures.push_back(
        "declared value extremes were undercut by an observed snapshot");
  }
  for (std::size_t i = 0; i < run.budget_ok.size(); ++i) {
    if (!run.budget_ok[i]) {
      result.failures.push_back("move budget exceeded for potential " +
                                potential_name(run.potentials[i]));
    }
  }
  if (!run.all_competitive_ok) {
    result.failures.push_back(
        "solution cost exceeded the guaranteed multiple of the exact optimum");
  }
  result.ok = run.clean();

  Json summary = base_summary(result, opts);
  summary["upfront_recourse"] = run.upfront_recourse;
  summary["swaps"] = run.total_swaps;
  summary["gamma_moves"] = run.total_gamma_moves;
  Json potentials = Json::array();
  for (std::size_t i = 0; i < run.potentials.size(); ++i) {
    Json p;
    p["name"] = potential_name(run.potentials[i]);
    p["move_budget"] = run.move_budget[i];
    p["recourse_budget"] = run.recourse_budget[i];
    p["budget_ok"] = static_cast<bool>(run.budget_ok[i]);
    potentials.push_back(p);
  }
  summary["potentials"] = potentials;
  summary["all_feasible"] = run.all_feasible;
  summary["scaling_ok"] = run.scaling_ok;
  summary["all_competitive_ok"] = run.all_competitive_ok;
  finish(result, std::move(summary));
  return result;
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Randomized probing strategy
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

// The optimum of the currently live demand, when an oracle is requested.
struct LiveOptimum {
  bool has = false;
  Rat cost = 0;
};

LiveOptimum live_optimum(OracleKind oracle,
                         const std::map<FunctionId, FunctionPtr>& live,
                         const std::vector<Rat>& costs) {
  LiveOptimum out;
  if (oracle == OracleKind::kNone || live.empty()) return out;
  std::vector<FunctionPtr> parts;
  parts.reserve(live.size());
  for (const auto& [id, fn] : live) parts.push_back(fn);
  const SumFunction sum(costs.size(), std::move(parts));
  if (sum.value(full_set(costs.size())) == 0) return out;
  const OracleResult opt = oracle == OracleKind::kBrute
                               ? brute_force_cover(sum, costs)
                               : offline_greedy(sum, costs);
  out.has = opt.cost > 0;
  out.cost = opt.cost;
  return out;
}

HarnessResult run_probing(const TraceFile& trace, const HarnessOptions& opts) {
  // Every inserted function must declare its influencer set explicitly.
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    const TraceEvent& te = trace.events[i];
    if (te.kind == TraceEventKind::kInsert && te.fn->kind != "junta") {
      throw std::invalid_argument(
          "event " + std::to_string(i + 1) + ": probing mode requires " +
          "explicitly declared low-arity functions, got kind '" +
          te.fn->kind + "'");
    }
  }
  const std::vector<Rat> costs = trace_costs(trace);
  const Rat fmin = pick(opts.fmin, trace.header.fmin);
  JuntaCoverState state(costs, opts.seed, fmin);

  HarnessResult result;
  result.mode = HarnessMode::kRJunta;
  std::map<FunctionId, FunctionPtr> live;
  double sum_gt = 0;
  for (const TraceEvent& te : trace.events) {
    MetricsRow row;
    row.seq = te.seq;
    if (te.kind == TraceEventKind::kInsert) {
      const FunctionPtr fn = build_function(*te.fn, costs.size());
      row.event = "insert";
      row.gain = to_double(fn->value(full_set(costs.size())));
      sum_gt += row.gain;
      row.step_recourse = state.on_arrival(te.id, fn);
      live.emplace(te.id, fn);
    } else {
      row.event = "delete";
      row.step_recourse = state.on_departure(te.id);
      live.erase(te.id);
    }
    try {
      state.verify();
    } catch (const std::logic_error& e) {
      result.failures.push_back("event " + std::to_string(te.seq) +
                                ": invariant violation: " + e.what());
      result.ok = false;
    }
    row.cumulative_recourse =
        static_cast<std::size_t>(state.total_recourse());
    row.solution_cost = to_double(state.solution_cost());
    row.feasible = true;
    for (const auto& [id, fn] : live) {
      if (!state.covered(id)) row.feasible = false;
    }
    if (!row.feasible) {
      result.failures.push_back("event " + std::to_string(te.seq) +
                                ": a live function is uncovered");
      result.ok = false;
    }
    const LiveOptimum opt = live_optimum(opts.oracle, live, costs);
    if (opt.has) {
      row.has_opt = true;
      row.opt_cost = to_double(opt.cost);
      row.ratio = row.solution_cost / row.opt_cost;
    }
    result.rows.push_back(std::move(row));
  }

  result.sum_gt = sum_gt;
  result.total_recourse = static_cast<std::size_t>(state.total_recourse());
  result.probes = state.total_probes();
  result.probe_budget = to_double(state.probe_budget());
  const bool probes_ok =
      Rat(static_cast<long long>(state.total_probes())) <=
      state.probe_budget();
  result.budget_ok = {probes_ok};
  result.move_budget = {result.probe_budget};
  result.recourse_budget = {};
  if (!probes_ok) {
    result.failures.push_back("probe count exceeded the value budget");
    result.ok = false;
  }

  Json summary = base_summary(result, opts);
  summary["seed"] = opts.seed;
  summary["probes"] = result.probes;
  summary["probe_budget"] = result.probe_budget;
  summary["probes_ok"] = probes_ok;
  summary["solution_cost"] =
      result.rows.empty() ? 0.0 : result.rows.back().solution_cost;
  finish(result, std::move(summary));
  return result;
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Bucketed-router strategy
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

HarnessResult run_router(const TraceFile& trace, const HarnessOptions& opts) {
  CombinerConfig config;
  config.fmin = pick(opts.fmin, trace.header.fmin);
  config.fmax = pick(opts.fmax, trace.header.fmax);
  config.seed = opts.seed;
  config.general.gamma = opts.gamma;
  config.general.oracle = OracleKind::kNone;
  BucketRouter router(config, trace_costs(trace));

  HarnessResult result;
  result.mode = HarnessMode::kCombiner;
  std::map<FunctionId, FunctionPtr> live;
  const std::vector<Rat> costs = trace_costs(trace);
  double sum_gt = 0;
  for (const TraceEvent& te : trace.events) {
    Event ev;
    ev.seq = te.seq;
    ev.id = te.id;
    if (te.kind == TraceEventKind::kInsert) {
      ev.kind = EventKind::kInsert;
      ev.fn = build_function(*te.fn, costs.size());
    } else {
      ev.kind = EventKind::kDelete;
    }
    const RouteRecord& rec = router.route(ev);

    MetricsRow row;
    row.seq = te.seq;
    row.event = te.kind == TraceEventKind::kInsert ? "insert" : "delete";
    if (te.kind == TraceEventKind::kInsert) {
      row.gain = to_double(ev.fn->value(full_set(costs.size())));
      sum_gt += row.gain;
      live.emplace(te.id, ev.fn);
    } else {
      live.erase(te.id);
    }
    row.solution_cost = to_double(rec.solution_cost);
    row.step_recourse = rec.union_recourse;
    row.cumulative_recourse =
        static_cast<std::size_t>(router.total_union_recourse());
    row.feasible = rec.feasible;
    if (!row.feasible) {
      result.failures.push_back("event " + std::to_string(te.seq) +
                                ": union misses part of the live demand");
      result.ok = false;
    }
    const LiveOptimum opt = live_optimum(opts.oracle, live, costs);
    if (opt.has) {
      row.has_opt = true;
      row.opt_cost = to_double(opt.cost);
      row.ratio = row.solution_cost / row.opt_cost;
    }
    result.rows.push_back(std::move(row));
  }

  result.sum_gt = sum_gt;
  result.total_recourse =
      static_cast<std::size_t>(router.total_union_recourse());
  result.union_recourse = router.total_union_recourse();
  result.child_recourse = router.total_child_recourse();
  const bool recourse_ok =
      router.total_union_recourse() <= router.total_child_recourse();
  result.budget_ok = {recourse_ok};
  if (!recourse_ok) {
    result.failures.push_back(
        "union recourse exceeded the children's combined recourse");
    result.ok = false;
  }

  Json summary = base_summary(result, opts);
  summary["seed"] = opts.seed;
  summary["buckets"] = router.bucket_count();
  summary["union_recourse"] = result.union_recourse;
  summary["child_recourse"] = result.child_recourse;
  summary["union_within_children"] = recourse_ok;
  finish(result, std::move(summary));
  return result;
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Metric tree strategies
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

const char* exponent_name(TreeAuditExponent exponent) {
  switch (exponent) {
    case TreeAuditExponent::kAspectVariant:
      return "aspect";
    case TreeAuditExponent::kGeneric:
      return "generic";
    case TreeAuditExponent::kNone:
      return "none";
  }
  throw std::logic_error("unknown exponent kind");
}

HarnessResult run_tree(const TraceFile& trace, const HarnessOptions& opts,
                       HarnessMode mode) {
  const MetricInstance metric = trace_metric(trace);
  SteinerTreeRunner::Options tree_opts;
  tree_opts.gamma = opts.gamma;
  SteinerTreeRunner runner(metric, tree_opts);

  HarnessResult result;
  result.mode = mode;
  if (runner.audited()) result.phi_names = {"powerlaw_h"};

  std::set<std::size_t> terminals;
  std::vector<std::vector<Rat>> matrix(metric.size());
  for (std::size_t i = 0; i < metric.size(); ++i) {
    matrix[i].resize(metric.size());
    for (std::size_t j = 0; j < metric.size(); ++j) {
      matrix[i][j] = metric.distance(i, j);
    }
  }

  for (const TraceEvent& te : trace.events) {
    const std::size_t point = static_cast<std::size_t>(te.id);
    if (te.kind == TraceEventKind::kArrive) {
      runner.arrive(point);
      terminals.insert(point);
    } else {
      runner.depart(point);
      terminals.erase(point);
    }
    const TreeStepRecord& rec = runner.records().back();

    MetricsRow row;
    row.seq = te.seq;
    row.event = te.kind == TraceEventKind::kArrive ? "arrive" : "depart";
    row.solution_cost = to_double(rec.tree_cost);
    row.step_recourse = rec.step_recourse;
    row.cumulative_recourse = rec.cumulative_recourse;
    row.gain = rec.gt;
    if (runner.audited()) row.phi = {rec.phi};
    row.audits_ok = rec.audit_failures == 0;
    row.feasible = rec.spanning;
    if (rec.audit_failures > 0) {
      result.failures.push_back("event " + std::to_string(te.seq) + ": " +
                                std::to_string(rec.audit_failures) +
                                " audit rows failed");
      result.ok = false;
    }
    if (!rec.spanning) {
      result.failures.push_back("event " + std::to_string(te.seq) +
                                ": maintained edges do not span the live set");
      result.ok = false;
    }
    try {
      runner.verify_tree();
    } catch (const std::logic_error& e) {
      result.failures.push_back("event " + std::to_string(te.seq) +
                                ": invariant violation: " + e.what());
      result.ok = false;
    }

    // Optimum column: spanning optima are exact and cheap; Steiner optima
    // are exact only under the expensive oracle, with the spanning tree over
    // the terminals standing in as a sound upper bound otherwise.
    if (opts.oracle != OracleKind::kNone && terminals.size() >= 2) {
      const std::vector<std::size_t> term_list(terminals.begin(),
                                               terminals.end());
      Rat opt = 0;
      if (mode == HarnessMode::kMst) {
        opt = exact_mst_cost(matrix, term_list);
      } else if (opts.oracle == OracleKind::kBrute) {
        std::vector<std::size_t> candidates;
        for (std::size_t p = 0; p < metric.size(); ++p) {
          if (terminals.count(p) == 0) candidates.push_back(p);
        }
        opt = exact_steiner_cost(matrix, term_list, candidates);
      } else {
        opt = exact_mst_cost(matrix, term_list);
      }
      if (opt > 0) {
        row.has_opt = true;
        row.opt_cost = to_double(opt);
        row.ratio = row.solution_cost / row.opt_cost;
      }
    }
    result.rows.push_back(std::move(row));
  }

  result.sum_gt = runner.sum_gt();
  result.total_recourse = runner.cumulative_recourse();
  result.total_swaps = static_cast<std::size_t>(runner.total_swaps());
  result.total_gamma_moves =
      static_cast<std::size_t>(runner.total_gamma_moves());
  result.audit_failures = runner.audit_failures();
  for (const TreeStepRecord& rec : runner.records()) {
    result.audits += rec.audits;
  }
  if (runner.audited()) {
    const double budget = runner.move_budget();
    result.move_budget = {budget};
    result.recourse_budget = {2.0 * budget};
    const bool moves_ok =
        static_cast<double>(runner.total_gamma_moves()) <= budget;
    const bool ledger_ok =
        runner.ledger().respected(runner.auditor().move_decrease());
    result.budget_ok = {moves_ok && ledger_ok};
    if (!moves_ok || !ledger_ok) {
      result.failures.push_back("jump moves exceeded the insertion budget");
      result.ok = false;
    }
  }

  Json summary = base_summary(result, opts);
  summary["aspect_ratio"] = to_double(metric.aspect_ratio());
  summary["audit_exponent"] = exponent_name(runner.audit_exponent());
  summary["swaps"] = runner.total_swaps();
  summary["gamma_moves"] = runner.total_gamma_moves();
  summary["cleanup_steps"] = runner.total_cleanup_steps();
  summary["live_vertices"] = runner.live_count();
  summary["terminals"] = runner.terminal_count();
  summary["tree_cost"] = to_double(runner.tree_cost());
  if (runner.audited()) {
    summary["move_budget"] = runner.move_budget();
    summary["recourse_budget"] = 2.0 * runner.move_budget();
  }
  finish(result, std::move(summary));
  return result;
}

}  // namespace

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Public entry points
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

HarnessMode parse_harness_mode(const std::string& token) {
  if (token == "unit") return HarnessMode::kUnit;
  if (token == "cost") return HarnessMode::kCost;
  if (token == "affinity") return HarnessMode::kAffinity;
  if (token == "rjunta") return HarnessMode::kRJunta;
  if (token == "combiner") return HarnessMode::kCombiner;
  if (token == "mst") return HarnessMode::kMst;
  if (token == "steiner") return HarnessMode::kSteiner;
  throw std::invalid_argument("unknown mode '" + token + "'");
}

std::string harness_mode_name(HarnessMode mode) {
  switch (mode) {
    case HarnessMode::kUnit:
      return "unit";
    case HarnessMode::kCost:
      return "cost";
    case HarnessMode::kAffinity:
      return "affinity";
    case HarnessMode::kRJunta:
      return "rjunta";
    case HarnessMode::kCombiner:
      return "combiner";
    case HarnessMode::kMst:
      return "mst";
    case HarnessMode::kSteiner:
      return "steiner";
  }
  throw std::logic_error("unknown mode");
}

HarnessResult run_harness(const TraceFile& trace, const HarnessOptions& opts) {
  validate_trace(trace);
  const HarnessMode mode =
      opts.mode.has_value() ? *opts.mode
                            : parse_harness_mode(trace.header.mode);
  const bool metric_mode =
      mode == HarnessMode::kMst || mode == HarnessMode::kSteiner;
  const bool metric_trace = trace.header.trace_kind == "metric";
  if (metric_mode != metric_trace) {
    throw std::invalid_argument("mode '" + harness_mode_name(mode) +
                                "' cannot run a " + trace.header.trace_kind +
                                " trace");
  }
  switch (mode) {
    case HarnessMode::kUnit:
    case HarnessMode::kCost:
    case HarnessMode::kAffinity:
      return run_permutation(trace, opts, mode);
    case HarnessMode::kRJunta:
      return run_probing(trace, opts);
    case HarnessMode::kCombiner:
      return run_router(trace, opts);
    case HarnessMode::kMst:
    case HarnessMode::kSteiner:
      return run_tree(trace, opts, mode);
  }
  throw std::logic_error("unknown mode");
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Rendering
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

std::string metrics_csv(const HarnessResult& result) {
  std::ostringstream out;
  out << std::setprecision(12);
  out << "t,event,cost,opt,ratio,step_recourse,cumulative_recourse,gain";
  for (const std::string& name : result.phi_names) out << ",phi_" << name;
  out << ",audits_ok,feasible\n";
  for (const MetricsRow& row : result.rows) {
    out << row.seq << ',' << row.event << ',' << row.solution_cost << ',';
    if (row.has_opt) {
      out << row.opt_cost << ',' << row.ratio;
    } else {
      out << ',';
    }
    out << ',' << row.step_recourse << ',' << row.cumulative_recourse << ','
        << row.gain;
    for (double phi : row.phi) out << ',' << phi;
    // Rows audited by an absent family print blanks to keep columns aligned.
    for (std::size_t i = row.phi.size(); i < result.phi_names.size(); ++i) {
      out << ',';
    }
    out << ',' << (row.audits_ok ? 1 : 0) << ',' << (row.feasible ? 1 : 0)
        << '\n';
  }
  return out.str();
}

std::string plot_series(const HarnessResult& result) {
  Json recourse = Json::array();
  Json ratio = Json::array();
  double gain_so_far = 0;
  for (const MetricsRow& row : result.rows) {
    gain_so_far += row.gain;
    recourse.push_back(
        Json::array({gain_so_far,
                     static_cast<double>(row.cumulative_recourse)}));
    if (row.has_opt) {
      ratio.push_back(
          Json::array({static_cast<double>(row.seq), row.ratio}));
    }
  }
  Json j;
  j["recourse_vs_total_value"] = recourse;
  j["ratio_vs_time"] = ratio;
  return j.dump(2);
}

}  // namespace dyncover
