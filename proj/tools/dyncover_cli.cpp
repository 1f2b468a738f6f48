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

// Command-line front end: `run` executes a trace and writes metrics CSV plus
// a JSON summary, `gen` emits seeded traces, `plot-data` aggregates a run
// into plottable series, and `verify` checks a standalone function
// description structurally.  Exit codes: 0 clean, 1 at least one audit or
// invariant failure, 2 usage or input errors (malformed traces report their
// line number).  The environment variable DYNCOVER_MOVE_CAP overrides the
// local-search circuit breaker.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dyncover/harness.hpp"
#include "dyncover/trace.hpp"

namespace {

using namespace dyncover;

// Flags shared by `run` and `plot-data`.
struct RunFlags {
  std::string trace_path;
  std::string mode;
  std::string gamma = "e2";
  std::string audit = "all";
  std::string oracle = "none";
  std::uint64_t seed = 0;
  std::string fmin = "0";
  std::string fmax = "0";
  std::string out;
  std::string summary_out;
};

void add_run_flags(CLI::App* cmd, RunFlags* flags) {
  cmd->add_option("--trace", flags->trace_path, "trace file (JSON lines)")
      ->required();
  cmd->add_option("--mode", flags->mode,
                  "unit|cost|affinity|rjunta|combiner|mst|steiner "
                  "(default: the trace header's mode)");
  cmd->add_option("--gamma", flags->gamma,
                  "trade-off parameter: e, e2, or a decimal (default e2)");
  cmd->add_option("--audit", flags->audit,
                  "potential families: tsallis|h|sqrt|shannon|all");
  cmd->add_option("--oracle", flags->oracle,
                  "optimum column: none|greedy|brute");
  cmd->add_option("--seed", flags->seed, "seed for randomized strategies");
  cmd->add_option("--fmin", flags->fmin,
                  "declared positive-marginal minimum (0: from the header)");
  cmd->add_option("--fmax", flags->fmax,
                  "declared marginal maximum (0: from the header)");
}

OracleKind parse_oracle(const std::string& token) {
  if (token == "none") return OracleKind::kNone;
  if (token == "greedy") return OracleKind::kGreedy;
  if (token == "brute") return OracleKind::kBrute;
  throw std::invalid_argument("unknown oracle '" + token +
                              "' (expected none, greedy, or brute)");
}

HarnessOptions options_from(const RunFlags& flags) {
  HarnessOptions opts;
  if (!flags.mode.empty()) opts.mode = parse_harness_mode(flags.mode);
  opts.gamma = parse_gamma(flags.gamma);
  opts.audit = flags.audit;
  opts.oracle = parse_oracle(flags.oracle);
  opts.seed = flags.seed;
  opts.fmin = parse_rational(flags.fmin);
  opts.fmax = parse_rational(flags.fmax);
  return opts;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write output file: " + path);
  out << text;
}

int do_run(const RunFlags& flags) {
  const TraceFile trace = load_trace(flags.trace_path);
  const HarnessResult result = run_harness(trace, options_from(flags));
  write_output(metrics_csv(result), flags.out);
  write_output(result.summary + "\n", flags.summary_out);
  if (!result.ok) {
    for (const std::string& failure : result.failures) {
      std::cerr << "FAIL: " << failure << "\n";
    }
  }
  return result.ok ? 0 : 1;
}

int do_plot_data(const RunFlags& flags) {
  const TraceFile trace = load_trace(flags.trace_path);
  const HarnessResult result = run_harness(trace, options_from(flags));
  write_output(plot_series(result) + "\n", flags.out);
  return result.ok ? 0 : 1;
}

// Parameters for `gen`; unset numbers fall back to each family's defaults.
struct GenFlags {
  std::string kind;
  std::uint64_t seed = 0;
  std::string out;
  std::size_t n = 0;
  std::size_t ops = 0;
  std::size_t arity = 3;
  std::size_t batch = 1;
  std::size_t edges = 0;
  std::size_t items = 0;
  std::size_t max_weight = 3;
  std::size_t grid = 16;
  double depart_prob = -1;
  bool cost_spread = false;
};

TraceFile generate(const GenFlags& flags) {
  if (flags.kind == "hvc") {
    HvcParams params;
    if (flags.n) params.elements = flags.n;
    if (flags.ops) params.ops = flags.ops;
    params.arity = flags.arity;
    params.batch = flags.batch;
    params.pool = flags.edges;
    if (flags.depart_prob >= 0) params.depart_prob = flags.depart_prob;
    return gen_hvc(params, flags.seed);
  }
  if (flags.kind == "coverage") {
    CoverageParams params;
    if (flags.n) params.elements = flags.n;
    if (flags.ops) params.ops = flags.ops;
    if (flags.items) params.items = flags.items;
    params.max_weight = flags.max_weight;
    if (flags.depart_prob >= 0) params.depart_prob = flags.depart_prob;
    params.cost_spread = flags.cost_spread;
    return gen_coverage(params, flags.seed);
  }
  if (flags.kind == "junta") {
    JuntaParams params;
    if (flags.n) params.elements = flags.n;
    if (flags.ops) params.ops = flags.ops;
    params.arity = flags.arity;
    if (flags.depart_prob >= 0) params.depart_prob = flags.depart_prob;
    return gen_junta(params, flags.seed);
  }
  if (flags.kind == "metric-mst" || flags.kind == "metric-steiner") {
    MetricParams params;
    if (flags.n) params.points = flags.n;
    if (flags.ops) params.ops = flags.ops;
    params.grid = flags.grid;
    if (flags.depart_prob >= 0) params.depart_prob = flags.depart_prob;
    return flags.kind == "metric-mst" ? gen_metric_mst(params, flags.seed)
                                      : gen_metric_steiner(params, flags.seed);
  }
  throw std::invalid_argument(
      "unknown generator kind '" + flags.kind +
      "' (expected hvc, coverage, junta, metric-mst, or metric-steiner)");
}

int do_gen(const GenFlags& flags) {
  const TraceFile trace = generate(flags);
  validate_trace(trace);
  write_output(serialize_trace(trace), flags.out);
  return 0;
}

// Flags for `verify`.
struct VerifyFlags {
  std::string fn_path;
  std::size_t cap = 12;
};

int do_verify(const VerifyFlags& flags) {
  std::ifstream in(flags.fn_path);
  if (!in) {
    throw std::runtime_error("cannot open function file: " + flags.fn_path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const auto [ground, spec] = parse_function_file(buffer.str());
  const FunctionPtr fn = build_function(spec, ground);
  const bool submodular = verify_submodular(*fn, flags.cap);
  const bool three_increasing = verify_3increasing(*fn, flags.cap);
  std::cout << "kind: " << spec.kind << "\n"
            << "ground: " << ground << "\n"
            << "submodular: " << (submodular ? "pass" : "fail") << "\n"
            << "3-increasing: " << (three_increasing ? "pass" : "fail")
            << "\n";
  // Monotone submodularity is the baseline contract; the third-derivative
  // verdict is informative (it gates only the affinity-mode guarantees).
  return submodular ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Fully-dynamic submodular cover: run traces, generate instances, "
      "aggregate plot data, verify function descriptions"};
  app.require_subcommand(1);

  RunFlags run_flags;
  CLI::App* run = app.add_subcommand(
      "run", "execute a trace; write metrics CSV and a JSON summary");
  add_run_flags(run, &run_flags);
  run->add_option("--out", run_flags.out,
                  "metrics CSV path (default: stdout)");
  run->add_option("--summary-out", run_flags.summary_out,
                  "summary JSON path (default: stdout)");

  RunFlags plot_flags;
  CLI::App* plot = app.add_subcommand(
      "plot-data", "execute a trace; write aggregated (x, y) series");
  add_run_flags(plot, &plot_flags);
  plot->add_option("--out", plot_flags.out,
                   "series JSON path (default: stdout)");

  GenFlags gen_flags;
  CLI::App* gen =
      app.add_subcommand("gen", "generate a seeded trace deterministically");
  gen->add_option("--kind", gen_flags.kind,
                  "hvc|coverage|junta|metric-mst|metric-steiner")
      ->required();
  gen->add_option("--seed", gen_flags.seed, "generator seed");
  gen->add_option("--out", gen_flags.out, "trace path (default: stdout)");
  gen->add_option("--n", gen_flags.n, "ground elements / metric points");
  gen->add_option("--ops", gen_flags.ops, "number of events");
  gen->add_option("--arity", gen_flags.arity, "max hyperedge/junta arity");
  gen->add_option("--batch", gen_flags.batch,
                  "edges per arrival (hvc; 1 = single indicators)");
  gen->add_option("--edges", gen_flags.edges,
                  "hvc hyperedge pool size (0 = fresh random edges)");
  gen->add_option("--items", gen_flags.items, "items per coverage function");
  gen->add_option("--max-weight", gen_flags.max_weight,
                  "max integer item weight (coverage)");
  gen->add_option("--grid", gen_flags.grid, "metric lattice side length");
  gen->add_option("--depart-prob", gen_flags.depart_prob,
                  "departure probability per step");
  gen->add_flag("--cost-spread", gen_flags.cost_spread,
                "draw power-of-two element costs (coverage)");

  VerifyFlags verify_flags;
  CLI::App* verify = app.add_subcommand(
      "verify", "run structural verifiers on a function file");
  verify->add_option("--fn", verify_flags.fn_path, "function JSON file")
      ->required();
  verify->add_option("--cap", verify_flags.cap,
                     "max relevant elements before refusing (default 12)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return do_run(run_flags);
    if (plot->parsed()) return do_plot_data(plot_flags);
    if (gen->parsed()) return do_gen(gen_flags);
    if (verify->parsed()) return do_verify(verify_flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;  // unreachable: a subcommand is required
}
