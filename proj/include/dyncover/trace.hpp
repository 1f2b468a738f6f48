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

// Trace file format (JSON lines) and seeded trace generators.  A trace is a
// header line followed by one event per line: function inserts/deletes for
// cover runs, or point arrivals/departures for metric tree runs.  All
// numeric values round-trip exactly (rationals serialize as strings).

#ifndef DYNCOVER_TRACE_HPP_
#define DYNCOVER_TRACE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dyncover/rational.hpp"
#include "dyncover/submodular.hpp"
#include "dyncover/trees.hpp"

namespace dyncover {

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Function descriptions
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

// A serializable description of one submodular function.  `kind` selects
// which of the field groups below is meaningful:
//   "coverage" — item_weights + covers (covers[e] lists item ids of e)
//   "matroid"  — vertices + edges (edges[e] are the endpoints of element e)
//   "junta"    — variables + table (2^|variables| entries, table[0] = 0)
//   "modular"  — weights (element e alone is worth weights[e])
struct FunctionSpec {
  std::string kind;
  std::vector<Rat> item_weights;
  std::vector<std::vector<std::size_t>> covers;
  std::size_t vertices = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<ElementId> variables;
  std::vector<Rat> table;
  std::vector<Rat> weights;

  bool operator==(const FunctionSpec&) const = default;
};

// Instantiates the described function over the given ground-set size.
// Malformed descriptions throw std::invalid_argument.
FunctionPtr build_function(const FunctionSpec& spec, std::size_t ground_size);

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Trace structure
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

enum class TraceEventKind { kInsert, kDelete, kArrive, kDepart };

struct TraceEvent {
  std::int64_t seq = 0;
  TraceEventKind kind = TraceEventKind::kInsert;
  // Function id for insert/delete, metric point id for arrive/depart.
  std::uint64_t id = 0;
  std::optional<FunctionSpec> fn;  // insert only
  // Arrivals may carry the point's distances to every trace point (when the
  // header has no explicit matrix) or its coordinates (Euclidean input,
  // rounded to denominator 2^40 at load and re-verified exactly).
  std::vector<Rat> row;
  std::vector<Rat> coordinates;

  bool operator==(const TraceEvent&) const = default;
};

struct TraceHeader {
  std::string trace_kind = "cover";  // "cover" | "metric"
  std::string mode = "unit";         // default run mode for the harness
  std::size_t ground_size = 0;       // cover traces
  std::vector<Rat> costs;            // cover traces; empty means unit costs
  Rat fmin = 1;                      // declared value extremes
  Rat fmax = 1;
  std::vector<std::vector<Rat>> metric;  // metric traces: explicit matrix
  Rat aspect = 0;                        // recorded aspect ratio (0 = unset)

  bool operator==(const TraceHeader&) const = default;
};

struct TraceFile {
  TraceHeader header;
  std::vector<TraceEvent> events;

  bool operator==(const TraceFile&) const = default;
};

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Serialization
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

// JSON-lines text: header on the first line, one event per following line.
// parse(serialize(trace)) == trace for every well-formed trace.
std::string serialize_trace(const TraceFile& trace);

// Parses JSON-lines text.  Errors carry 1-based line numbers:
// "trace parse error at line N: ...".
TraceFile parse_trace(const std::string& text);

TraceFile load_trace(const std::string& path);
void save_trace(const TraceFile& trace, const std::string& path);

// Structural validation: event kinds match the trace kind, inserts carry
// well-formed functions over the header's ground set with fresh ids, deletes
// target live ids, arrivals/departures reference consistent points.  Throws
// std::invalid_argument naming the offending event.
void validate_trace(const TraceFile& trace);

// Standalone function files (used by the structural verifiers): one JSON
// object holding a "ground" count plus the same fields as an event's "fn".
std::pair<std::size_t, FunctionSpec> parse_function_file(
    const std::string& text);
std::string serialize_function(std::size_t ground_size,
                               const FunctionSpec& spec);

// Assembles the metric a metric trace describes — from the header matrix,
// per-arrival distance rows, or per-arrival coordinates (Euclidean, rounded
// to denominator 2^40) — and validates it exactly (symmetry, positivity,
// triangle inequality).
MetricInstance trace_metric(const TraceFile& trace);

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Seeded generators
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

// Hypergraph vertex cover churn: arrivals are indicator functions of random
// hyperedges (arity <= `arity`), emitted as explicit juntas; `batch` > 1
// emits coverage functions worth `batch` per arrival instead ("a batch of
// edges at once").  Departures hit the most recent live function (LIFO) with
// probability `depart_prob`.  A positive `pool` pregenerates that many
// hyperedges and draws arrivals from the pool with replacement, so the same
// edge can churn in and out repeatedly (fresh ids each time).
struct HvcParams {
  std::size_t elements = 10;
  std::size_t ops = 40;
  std::size_t arity = 3;
  std::size_t batch = 1;
  std::size_t pool = 0;
  double depart_prob = 0.35;
};
TraceFile gen_hvc(const HvcParams& params, std::uint64_t seed);

// Random weighted coverage functions (integer item weights, so values are
// integers and fmin = 1).  `cost_spread` draws element costs as powers of
// two up to 512; otherwise costs are unit.
struct CoverageParams {
  std::size_t elements = 8;
  std::size_t items = 4;
  std::size_t ops = 30;
  std::size_t max_weight = 3;
  double depart_prob = 0.3;
  bool cost_spread = false;
};
TraceFile gen_coverage(const CoverageParams& params, std::uint64_t seed);

// Random low-arity juntas: each arrival tabulates a random small coverage
// function on at most `arity` variables (so every table is monotone
// submodular and integer-valued).
struct JuntaParams {
  std::size_t elements = 10;
  std::size_t arity = 3;
  std::size_t ops = 40;
  double depart_prob = 0.3;
};
TraceFile gen_junta(const JuntaParams& params, std::uint64_t seed);

// Metric traces over distinct random lattice points under the Manhattan
// metric (distances are exact integers).  The header records the full
// matrix and the aspect ratio.  `mst` emits arrivals only; `steiner` mixes
// departures in (each point arrives at most once).
struct MetricParams {
  std::size_t points = 6;
  std::size_t grid = 16;       // coordinates drawn from [0, grid]^2
  std::size_t ops = 0;         // steiner only; 0 means 2 * points
  double depart_prob = 0.3;    // steiner only
};
TraceFile gen_metric_mst(const MetricParams& params, std::uint64_t seed);
TraceFile gen_metric_steiner(const MetricParams& params, std::uint64_t seed);

}  // namespace dyncover

#endif  // DYNCOVER_TRACE_HPP_
