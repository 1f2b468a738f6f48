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

// Trace serialization, validation, metric assembly, and seeded generators.

#include "dyncover/trace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace dyncover {
namespace {

using Json = nlohmann::ordered_json;

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// JSON helpers
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

Json rat_json(const Rat& value) { return Json(to_string(value)); }

Rat json_rat(const Json& j, const char* field) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<std::int64_t>());
  throw std::invalid_argument(std::string("field '") + field +
                              "' must be a rational string or integer");
}

Json rat_array(const std::vector<Rat>& values) {
  Json out = Json::array();
  for (const Rat& v : values) out.push_back(rat_json(v));
  return out;
}

std::vector<Rat> json_rat_array(const Json& j, const char* field) {
  if (!j.is_array()) {
    throw std::invalid_argument(std::string("field '") + field +
                                "' must be an array");
  }
  std::vector<Rat> out;
  out.reserve(j.size());
  for (const Json& item : j) out.push_back(json_rat(item, field));
  return out;
}

std::vector<std::size_t> json_index_array(const Json& j, const char* field) {
  if (!j.is_array()) {
    throw std::invalid_argument(std::string("field '") + field +
                                "' must be an array");
  }
  std::vector<std::size_t> out;
  out.reserve(j.size());
  for (const Json& item : j) {
    if (!item.is_number_unsigned() && !item.is_number_integer()) {
      throw std::invalid_argument(std::string("field '") + field +
                                  "' must hold non-negative integers");
    }
    const std::int64_t raw = item.get<std::int64_t>();
    if (raw < 0) {
      throw std::invalid_argument(std::string("field '") + field +
                                  "' must hold non-negative integers");
    }
    out.push_back(static_cast<std::size_t>(raw));
  }
  return out;
}

const Json& require_field(const Json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end()) {
    throw std::invalid_argument(std::string("missing field '") + field + "'");
  }
  return *it;
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Function spec <-> JSON
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

Json function_json(const FunctionSpec& spec) {
  Json j;
  j["kind"] = spec.kind;
  if (spec.kind == "coverage") {
    j["items"] = rat_array(spec.item_weights);
    Json covers = Json::array();
    for (const auto& list : spec.covers) covers.push_back(list);
    j["covers"] = covers;
  } else if (spec.kind == "matroid") {
    j["vertices"] = spec.vertices;
    Json edges = Json::array();
    for (const auto& [u, v] : spec.edges) edges.push_back(Json::array({u, v}));
    j["edges"] = edges;
  } else if (spec.kind == "junta") {
    j["vars"] = spec.variables;
    j["table"] = rat_array(spec.table);
  } else if (spec.kind == "modular") {
    j["weights"] = rat_array(spec.weights);
  } else {
    throw std::invalid_argument("unknown function kind '" + spec.kind + "'");
  }
  return j;
}

FunctionSpec json_function(const Json& j) {
  if (!j.is_object()) {
    throw std::invalid_argument("field 'fn' must be an object");
  }
  FunctionSpec spec;
  const Json& kind = require_field(j, "kind");
  if (!kind.is_string()) {
    throw std::invalid_argument("field 'kind' must be a string");
  }
  spec.kind = kind.get<std::string>();
  if (spec.kind == "coverage") {
    spec.item_weights = json_rat_array(require_field(j, "items"), "items");
    const Json& covers = require_field(j, "covers");
    if (!covers.is_array()) {
      throw std::invalid_argument("field 'covers' must be an array");
    }
    for (const Json& list : covers) {
      spec.covers.push_back(json_index_array(list, "covers"));
    }
  } else if (spec.kind == "matroid") {
    const Json& vertices = require_field(j, "vertices");
    if (!vertices.is_number_unsigned()) {
      throw std::invalid_argument("field 'vertices' must be a count");
    }
    spec.vertices = vertices.get<std::size_t>();
    const Json& edges = require_field(j, "edges");
    if (!edges.is_array()) {
      throw std::invalid_argument("field 'edges' must be an array");
    }
    for (const Json& pair : edges) {
      auto endpoints = json_index_array(pair, "edges");
      if (endpoints.size() != 2) {
        throw std::invalid_argument("each edge needs exactly two endpoints");
      }
      spec.edges.emplace_back(endpoints[0], endpoints[1]);
    }
  } else if (spec.kind == "junta") {
    spec.variables = json_index_array(require_field(j, "vars"), "vars");
    spec.table = json_rat_array(require_field(j, "table"), "table");
  } else if (spec.kind == "modular") {
    spec.weights = json_rat_array(require_field(j, "weights"), "weights");
  } else {
    throw std::invalid_argument("unknown function kind '" + spec.kind + "'");
  }
  return spec;
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Event <-> JSON
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

const char* kind_name(TraceEventKind kind) {
  switch (kind) {
    case TraceEventKind::kInsert:
      return "insert";
    case TraceEventKind::kDelete:
      return "delete";
    case TraceEventKind::kArrive:
      return "arrive";
    case TraceEventKind::kDepart:
      return "depart";
  }
  throw std::logic_error("unreachable event kind");
}

TraceEventKind parse_kind(const std::string& name) {
  if (name == "insert") return TraceEventKind::kInsert;
  if (name == "delete") return TraceEventKind::kDelete;
  if (name == "arrive") return TraceEventKind::kArrive;
  if (name == "depart") return TraceEventKind::kDepart;
  throw std::invalid_argument("unknown event op '" + name + "'");
}

bool metric_kind(TraceEventKind kind) {
  return kind == TraceEventKind::kArrive || kind == TraceEventKind::kDepart;
}

Json event_json(const TraceEvent& event) {
  Json j;
  j["t"] = event.seq;
  j["op"] = kind_name(event.kind);
  j[metric_kind(event.kind) ? "point" : "id"] = event.id;
  if (event.fn.has_value()) j["fn"] = function_json(*event.fn);
  if (!event.row.empty()) j["row"] = rat_array(event.row);
  if (!event.coordinates.empty()) j["xy"] = rat_array(event.coordinates);
  return j;
}

TraceEvent json_event(const Json& j) {
  TraceEvent event;
  const Json& seq = require_field(j, "t");
  if (!seq.is_number_integer() && !seq.is_number_unsigned()) {
    throw std::invalid_argument("field 't' must be an integer");
  }
  event.seq = seq.get<std::int64_t>();
  const Json& op = require_field(j, "op");
  if (!op.is_string()) {
    throw std::invalid_argument("field 'op' must be a string");
  }
  event.kind = parse_kind(op.get<std::string>());
  const char* id_field = metric_kind(event.kind) ? "point" : "id";
  const Json& id = require_field(j, id_field);
  if (!id.is_number_unsigned()) {
    throw std::invalid_argument(std::string("field '") + id_field +
                                "' must be a non-negative integer");
  }
  event.id = id.get<std::uint64_t>();
  if (auto it = j.find("fn"); it != j.end()) event.fn = json_function(*it);
  if (auto it = j.find("row"); it != j.end()) {
    event.row = json_rat_array(*it, "row");
  }
  if (auto it = j.find("xy"); it != j.end()) {
    event.coordinates = json_rat_array(*it, "xy");
  }
  return event;
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Header <-> JSON
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

Json header_json(const TraceHeader& header) {
  Json j;
  j["trace"] = header.trace_kind;
  j["mode"] = header.mode;
  if (header.trace_kind == "cover") {
    j["ground"] = header.ground_size;
    if (!header.costs.empty()) j["costs"] = rat_array(header.costs);
  }
  j["fmin"] = rat_json(header.fmin);
  j["fmax"] = rat_json(header.fmax);
  if (!header.metric.empty()) {
    Json rows = Json::array();
    for (const auto& row : header.metric) rows.push_back(rat_array(row));
    j["metric"] = rows;
  }
  if (header.aspect != 0) j["aspect"] = rat_json(header.aspect);
  return j;
}

TraceHeader json_header(const Json& j) {
  TraceHeader header;
  const Json& trace_kind = require_field(j, "trace");
  if (!trace_kind.is_string()) {
    throw std::invalid_argument("field 'trace' must be a string");
  }
  header.trace_kind = trace_kind.get<std::string>();
  if (header.trace_kind != "cover" && header.trace_kind != "metric") {
    throw std::invalid_argument("field 'trace' must be 'cover' or 'metric'");
  }
  const Json& mode = require_field(j, "mode");
  if (!mode.is_string()) {
    throw std::invalid_argument("field 'mode' must be a string");
  }
  header.mode = mode.get<std::string>();
  if (header.trace_kind == "cover") {
    const Json& ground = require_field(j, "ground");
    if (!ground.is_number_unsigned()) {
      throw std::invalid_argument("field 'ground' must be a count");
    }
    header.ground_size = ground.get<std::size_t>();
    if (auto it = j.find("costs"); it != j.end()) {
      header.costs = json_rat_array(*it, "costs");
    }
  }
  header.fmin = json_rat(require_field(j, "fmin"), "fmin");
  header.fmax = json_rat(require_field(j, "fmax"), "fmax");
  if (auto it = j.find("metric"); it != j.end()) {
    if (!it->is_array()) {
      throw std::invalid_argument("field 'metric' must be an array of rows");
    }
    for (const Json& row : *it) {
      header.metric.push_back(json_rat_array(row, "metric"));
    }
  }
  if (auto it = j.find("aspect"); it != j.end()) {
    header.aspect = json_rat(*it, "aspect");
  }
  return header;
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Generator helpers
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

// Draws a nonempty ascending subset of {0..n-1} with at most `max_size`
// members.
std::vector<ElementId> random_subset(std::mt19937_64& rng, std::size_t n,
                                     std::size_t max_size) {
  std::uniform_int_distribution<std::size_t> size_dist(
      1, std::min(max_size, n));
  const std::size_t want = size_dist(rng);
  std::set<ElementId> chosen;
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  while (chosen.size() < want) chosen.insert(pick(rng));
  return {chosen.begin(), chosen.end()};
}

bool flip(std::mt19937_64& rng, double probability) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < probability;
}

// Tabulates a coverage function restricted to masks over `arity` variables:
// table[mask] = total weight of items covered by the variables in `mask`.
// The result is monotone, submodular, integer-valued, and table[0] == 0.
std::vector<Rat> tabulate_coverage(const std::vector<Rat>& item_weights,
                                   const std::vector<std::uint32_t>& item_vars,
                                   std::size_t arity) {
  std::vector<Rat> table(std::size_t{1} << arity, Rat(0));
  for (std::size_t mask = 1; mask < table.size(); ++mask) {
    Rat total = 0;
    for (std::size_t item = 0; item < item_weights.size(); ++item) {
      if ((item_vars[item] & mask) != 0) total += item_weights[item];
    }
    table[mask] = total;
  }
  return table;
}

// Tracks the largest singleton value of the live sum across a generated
// run.  The header must declare a bound on every positive marginal the run
// observes, marginals are taken of the SUM of the live functions, and by
// submodularity the largest live-sum singleton dominates them all.
class DeclaredMaxTracker {
 public:
  explicit DeclaredMaxTracker(std::size_t ground)
      : singleton_sum_(ground, Rat(0)) {}

  void insert(std::uint64_t id, const FunctionPtr& fn) {
    live_.emplace(id, fn);
    for (std::size_t e = 0; e < singleton_sum_.size(); ++e) {
      ElementSet s(singleton_sum_.size());
      s.set(e);
      singleton_sum_[e] += fn->value(s);
      peak_ = std::max(peak_, singleton_sum_[e]);
    }
  }

  void erase(std::uint64_t id) {
    const FunctionPtr fn = live_.at(id);
    live_.erase(id);
    for (std::size_t e = 0; e < singleton_sum_.size(); ++e) {
      ElementSet s(singleton_sum_.size());
      s.set(e);
      singleton_sum_[e] -= fn->value(s);
    }
  }

  // Never below 1 so that fmin = 1 always stays dominated.
  const Rat& peak() const { return peak_; }

 private:
  std::vector<Rat> singleton_sum_;
  std::map<std::uint64_t, FunctionPtr> live_;
  Rat peak_ = 1;
};

struct LatticePoints {
  std::vector<std::pair<std::int64_t, std::int64_t>> points;
  std::vector<std::vector<Rat>> matrix;  // Manhattan distances (integers)
  Rat aspect;
};

LatticePoints random_lattice(std::mt19937_64& rng, std::size_t count,
                             std::size_t grid) {
  LatticePoints out;
  std::set<std::pair<std::int64_t, std::int64_t>> seen;
  std::uniform_int_distribution<std::int64_t> coord(
      0, static_cast<std::int64_t>(grid));
  while (out.points.size() < count) {
    std::pair<std::int64_t, std::int64_t> p{coord(rng), coord(rng)};
    if (seen.insert(p).second) out.points.push_back(p);
  }
  const std::size_t n = out.points.size();
  out.matrix.assign(n, std::vector<Rat>(n, Rat(0)));
  Rat lo = 0;
  Rat hi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::int64_t d =
          std::abs(out.points[i].first - out.points[j].first) +
          std::abs(out.points[i].second - out.points[j].second);
      out.matrix[i][j] = out.matrix[j][i] = Rat(d);
      if (lo == 0 || out.matrix[i][j] < lo) lo = out.matrix[i][j];
      if (out.matrix[i][j] > hi) hi = out.matrix[i][j];
    }
  }
  out.aspect = lo == 0 ? Rat(1) : hi / lo;
  return out;
}

}  // namespace

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Function instantiation
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

FunctionPtr build_function(const FunctionSpec& spec, std::size_t ground_size) {
  if (spec.kind == "coverage") {
    if (spec.covers.size() != ground_size) {
      throw std::invalid_argument(
          "coverage function needs one cover list per ground element");
    }
    for (const auto& list : spec.covers) {
      for (std::size_t item : list) {
        if (item >= spec.item_weights.size()) {
          throw std::invalid_argument("cover list references unknown item");
        }
      }
    }
    return std::make_shared<CoverageFunction>(
        ground_size, spec.item_weights.size(), spec.covers, spec.item_weights);
  }
  if (spec.kind == "matroid") {
    if (spec.edges.size() != ground_size) {
      throw std::invalid_argument(
          "matroid rank function needs one edge per ground element");
    }
    return std::make_shared<GraphicMatroidRank>(spec.vertices, spec.edges);
  }
  if (spec.kind == "junta") {
    for (ElementId v : spec.variables) {
      if (v >= ground_size) {
        throw std::invalid_argument("junta variable outside the ground set");
      }
    }
    return std::make_shared<JuntaFunction>(ground_size, spec.variables,
                                           spec.table);
  }
  if (spec.kind == "modular") {
    if (spec.weights.size() != ground_size) {
      throw std::invalid_argument(
          "modular function needs one weight per ground element");
    }
    return CoverageFunction::modular(spec.weights);
  }
  throw std::invalid_argument("unknown function kind '" + spec.kind + "'");
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Serialization
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

std::string serialize_trace(const TraceFile& trace) {
  std::ostringstream out;
  out << header_json(trace.header).dump() << '\n';
  for (const TraceEvent& event : trace.events) {
    out << event_json(event).dump() << '\n';
  }
  return out.str();
}

TraceFile parse_trace(const std::string& text) {
  TraceFile trace;
  std::istringstream in(text);
  std::string line;
  std::size_t line_number = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const Json j = Json::parse(line);
      if (!j.is_object()) {
        throw std::invalid_argument("each line must be a JSON object");
      }
      if (!have_header) {
        trace.header = json_header(j);
        have_header = true;
      } else {
        trace.events.push_back(json_event(j));
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("trace parse error at line " +
                               std::to_string(line_number) + ": " + e.what());
    }
  }
  if (!have_header) {
    throw std::runtime_error("trace parse error at line 1: missing header");
  }
  return trace;
}

TraceFile load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_trace(buffer.str());
}

void save_trace(const TraceFile& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace file: " + path);
  out << serialize_trace(trace);
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Validation
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

void validate_trace(const TraceFile& trace) {
  const bool metric = trace.header.trace_kind == "metric";
  if (!metric) {
    if (trace.header.ground_size == 0) {
      throw std::invalid_argument("cover trace needs a positive ground size");
    }
    if (!trace.header.costs.empty() &&
        trace.header.costs.size() != trace.header.ground_size) {
      throw std::invalid_argument(
          "cost vector length must match the ground size");
    }
    for (const Rat& c : trace.header.costs) {
      if (c <= 0) throw std::invalid_argument("element costs must be positive");
    }
  }
  if (trace.header.fmin <= 0 || trace.header.fmax < trace.header.fmin) {
    throw std::invalid_argument(
        "declared value extremes need 0 < fmin <= fmax");
  }
  std::set<std::uint64_t> live;
  std::set<std::uint64_t> used;
  std::set<std::uint64_t> present;
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    const TraceEvent& event = trace.events[i];
    const std::string where = "event " + std::to_string(i + 1);
    if (metric != metric_kind(event.kind)) {
      throw std::invalid_argument(where + ": op '" + kind_name(event.kind) +
                                  "' not valid in a " +
                                  trace.header.trace_kind + " trace");
    }
    switch (event.kind) {
      case TraceEventKind::kInsert: {
        if (!event.fn.has_value()) {
          throw std::invalid_argument(where + ": insert carries no function");
        }
        if (!used.insert(event.id).second) {
          throw std::invalid_argument(where + ": function id " +
                                      std::to_string(event.id) + " reused");
        }
        try {
          build_function(*event.fn, trace.header.ground_size);
        } catch (const std::exception& e) {
          throw std::invalid_argument(where + ": " + e.what());
        }
        live.insert(event.id);
        break;
      }
      case TraceEventKind::kDelete:
        if (live.erase(event.id) == 0) {
          throw std::invalid_argument(where + ": delete of id " +
                                      std::to_string(event.id) +
                                      " which is not live");
        }
        break;
      case TraceEventKind::kArrive:
        if (!present.insert(event.id).second) {
          throw std::invalid_argument(where + ": point " +
                                      std::to_string(event.id) +
                                      " is already present");
        }
        if (!event.row.empty() && !event.coordinates.empty()) {
          throw std::invalid_argument(
              where + ": arrival carries both a distance row and coordinates");
        }
        break;
      case TraceEventKind::kDepart:
        if (present.erase(event.id) == 0) {
          throw std::invalid_argument(where + ": departure of point " +
                                      std::to_string(event.id) +
                                      " which is not present");
        }
        break;
    }
  }
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Standalone function files
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

std::pair<std::size_t, FunctionSpec> parse_function_file(
    const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("function parse error: ") + e.what());
  }
  if (!j.is_object()) {
    throw std::invalid_argument("function file must hold one JSON object");
  }
  const Json& ground = require_field(j, "ground");
  if (!ground.is_number_unsigned()) {
    throw std::invalid_argument("field 'ground' must be a count");
  }
  return {ground.get<std::size_t>(), json_function(j)};
}

std::string serialize_function(std::size_t ground_size,
                               const FunctionSpec& spec) {
  Json j = function_json(spec);
  Json out;
  out["ground"] = ground_size;
  for (auto& [key, value] : j.items()) out[key] = value;
  return out.dump() + "\n";
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Metric assembly
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

MetricInstance trace_metric(const TraceFile& trace) {
  if (trace.header.trace_kind != "metric") {
    throw std::invalid_argument("not a metric trace");
  }
  std::uint64_t max_point = 0;
  bool any_point = false;
  for (const TraceEvent& event : trace.events) {
    if (metric_kind(event.kind)) {
      max_point = std::max(max_point, event.id);
      any_point = true;
    }
  }
  if (!any_point) throw std::invalid_argument("metric trace has no points");
  const std::size_t n = static_cast<std::size_t>(max_point) + 1;

  if (!trace.header.metric.empty()) {
    if (trace.header.metric.size() < n) {
      throw std::invalid_argument("header metric smaller than the point range");
    }
    return MetricInstance(trace.header.metric);
  }

  // No header matrix: assemble from per-arrival rows or coordinates.
  std::map<std::uint64_t, std::vector<Rat>> rows;
  std::map<std::uint64_t, std::vector<Rat>> coords;
  for (const TraceEvent& event : trace.events) {
    if (event.kind != TraceEventKind::kArrive) continue;
    if (!event.row.empty()) {
      auto [it, fresh] = rows.emplace(event.id, event.row);
      if (!fresh && it->second != event.row) {
        throw std::invalid_argument("point " + std::to_string(event.id) +
                                    " arrives with conflicting distance rows");
      }
    }
    if (!event.coordinates.empty()) {
      auto [it, fresh] = coords.emplace(event.id, event.coordinates);
      if (!fresh && it->second != event.coordinates) {
        throw std::invalid_argument("point " + std::to_string(event.id) +
                                    " arrives with conflicting coordinates");
      }
    }
  }
  if (!rows.empty() && !coords.empty()) {
    throw std::invalid_argument(
        "trace mixes distance rows with coordinates; use one form");
  }

  std::vector<std::vector<Rat>> matrix(n, std::vector<Rat>(n, Rat(0)));
  if (!rows.empty()) {
    if (rows.size() != n) {
      throw std::invalid_argument(
          "every point needs a distance row when the header has no matrix");
    }
    for (const auto& [point, row] : rows) {
      if (row.size() != n) {
        throw std::invalid_argument("distance row for point " +
                                    std::to_string(point) +
                                    " has the wrong length");
      }
      matrix[point] = row;
    }
    return MetricInstance(matrix);
  }

  if (coords.size() != n) {
    throw std::invalid_argument(
        "every point needs coordinates when the header has no matrix");
  }
  const std::size_t dim = coords.begin()->second.size();
  for (const auto& [point, xy] : coords) {
    if (xy.size() != dim || dim == 0) {
      throw std::invalid_argument("coordinates for point " +
                                  std::to_string(point) +
                                  " have inconsistent dimension");
    }
  }
  // Euclidean distances are irrational in general; round to denominator 2^40
  // and re-verify the rounded matrix exactly (the instance constructor
  // rechecks symmetry, positivity, and all triangles).
  const Rat denom = Rat(std::int64_t{1} << 40);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      Rat sq = 0;
      for (std::size_t d = 0; d < dim; ++d) {
        const Rat diff = coords.at(i)[d] - coords.at(j)[d];
        sq += diff * diff;
      }
      const double root = std::sqrt(to_double(sq));
      const Rat rounded =
          Rat(static_cast<std::int64_t>(std::llround(root * (1LL << 40)))) /
          denom;
      if (rounded <= 0) {
        throw std::invalid_argument(
            "points " + std::to_string(i) + " and " + std::to_string(j) +
            " are too close: rounded distance is zero");
      }
      matrix[i][j] = matrix[j][i] = rounded;
    }
  }
  return MetricInstance(matrix);
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Generators
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

TraceFile gen_hvc(const HvcParams& params, std::uint64_t seed) {
  if (params.elements == 0 || params.arity == 0 || params.batch == 0) {
    throw std::invalid_argument("hvc generator needs positive sizes");
  }
  std::mt19937_64 rng(seed);
  TraceFile trace;
  trace.header.trace_kind = "cover";
  trace.header.mode = "unit";
  trace.header.ground_size = params.elements;
  trace.header.fmin = 1;
  trace.header.fmax = 1;

  // Optional pregenerated hyperedge pool, drawn from with replacement.
  std::vector<std::vector<ElementId>> pool;
  for (std::size_t i = 0; i < params.pool; ++i) {
    pool.push_back(random_subset(rng, params.elements, params.arity));
  }
  auto draw_edge = [&]() {
    if (pool.empty()) return random_subset(rng, params.elements, params.arity);
    std::uniform_int_distribution<std::size_t> which(0, pool.size() - 1);
    return pool[which(rng)];
  };

  std::vector<std::uint64_t> live;  // LIFO stack of live function ids
  DeclaredMaxTracker tracker(params.elements);
  std::uint64_t next_id = 0;
  for (std::size_t t = 1; t <= params.ops; ++t) {
    TraceEvent event;
    event.seq = static_cast<std::int64_t>(t);
    if (!live.empty() && flip(rng, params.depart_prob)) {
      event.kind = TraceEventKind::kDelete;
      event.id = live.back();
      live.pop_back();
      tracker.erase(event.id);
    } else {
      event.kind = TraceEventKind::kInsert;
      event.id = next_id++;
      FunctionSpec spec;
      if (params.batch == 1) {
        // Indicator of one random hyperedge, emitted as an explicit junta.
        const auto edge = draw_edge();
        spec.kind = "junta";
        spec.variables = edge;
        spec.table.assign(std::size_t{1} << edge.size(), Rat(1));
        spec.table[0] = 0;
      } else {
        // A batch of hyperedges as one coverage function worth `batch`.
        spec.kind = "coverage";
        spec.covers.assign(params.elements, {});
        for (std::size_t item = 0; item < params.batch; ++item) {
          spec.item_weights.push_back(1);
          for (ElementId e : draw_edge()) spec.covers[e].push_back(item);
        }
      }
      tracker.insert(event.id, build_function(spec, params.elements));
      event.fn = std::move(spec);
      live.push_back(event.id);
    }
    trace.events.push_back(std::move(event));
  }
  trace.header.fmax = tracker.peak();
  return trace;
}

TraceFile gen_coverage(const CoverageParams& params, std::uint64_t seed) {
  if (params.elements == 0 || params.items == 0 || params.max_weight == 0) {
    throw std::invalid_argument("coverage generator needs positive sizes");
  }
  std::mt19937_64 rng(seed);
  TraceFile trace;
  trace.header.trace_kind = "cover";
  trace.header.mode = params.cost_spread ? "cost" : "unit";
  trace.header.ground_size = params.elements;
  trace.header.fmin = 1;
  trace.header.fmax = 1;
  if (params.cost_spread) {
    std::uniform_int_distribution<int> exponent(0, 9);
    for (std::size_t e = 0; e < params.elements; ++e) {
      trace.header.costs.push_back(Rat(std::int64_t{1} << exponent(rng)));
    }
  }

  std::uniform_int_distribution<std::size_t> weight(1, params.max_weight);
  std::uniform_int_distribution<std::size_t> pick(0, params.elements - 1);
  std::vector<std::uint64_t> live;
  DeclaredMaxTracker tracker(params.elements);
  std::uint64_t next_id = 0;
  for (std::size_t t = 1; t <= params.ops; ++t) {
    TraceEvent event;
    event.seq = static_cast<std::int64_t>(t);
    if (!live.empty() && flip(rng, params.depart_prob)) {
      std::uniform_int_distribution<std::size_t> which(0, live.size() - 1);
      const std::size_t at = which(rng);
      event.kind = TraceEventKind::kDelete;
      event.id = live[at];
      live.erase(live.begin() + static_cast<std::ptrdiff_t>(at));
      tracker.erase(event.id);
    } else {
      event.kind = TraceEventKind::kInsert;
      event.id = next_id++;
      FunctionSpec spec;
      spec.kind = "coverage";
      spec.covers.assign(params.elements, {});
      for (std::size_t item = 0; item < params.items; ++item) {
        const Rat w = Rat(static_cast<std::int64_t>(weight(rng)));
        spec.item_weights.push_back(w);
        spec.covers[pick(rng)].push_back(item);  // guaranteed covered once
        for (std::size_t e = 0; e < params.elements; ++e) {
          if (flip(rng, 0.3) &&
              (spec.covers[e].empty() || spec.covers[e].back() != item)) {
            spec.covers[e].push_back(item);
          }
        }
      }
      tracker.insert(event.id, build_function(spec, params.elements));
      event.fn = std::move(spec);
      live.push_back(event.id);
    }
    trace.events.push_back(std::move(event));
  }
  trace.header.fmax = tracker.peak();
  return trace;
}

TraceFile gen_junta(const JuntaParams& params, std::uint64_t seed) {
  if (params.elements == 0 || params.arity == 0) {
    throw std::invalid_argument("junta generator needs positive sizes");
  }
  std::mt19937_64 rng(seed);
  TraceFile trace;
  trace.header.trace_kind = "cover";
  trace.header.mode = "rjunta";
  trace.header.ground_size = params.elements;
  trace.header.fmin = 1;
  trace.header.fmax = 1;

  std::vector<std::uint64_t> live;
  DeclaredMaxTracker tracker(params.elements);
  std::uint64_t next_id = 0;
  for (std::size_t t = 1; t <= params.ops; ++t) {
    TraceEvent event;
    event.seq = static_cast<std::int64_t>(t);
    if (!live.empty() && flip(rng, params.depart_prob)) {
      std::uniform_int_distribution<std::size_t> which(0, live.size() - 1);
      const std::size_t at = which(rng);
      event.kind = TraceEventKind::kDelete;
      event.id = live[at];
      live.erase(live.begin() + static_cast<std::ptrdiff_t>(at));
      tracker.erase(event.id);
    } else {
      event.kind = TraceEventKind::kInsert;
      event.id = next_id++;
      const auto vars = random_subset(rng, params.elements, params.arity);
      // Tabulate a random small coverage function over the chosen variables,
      // which keeps every table monotone, submodular, and integer-valued.
      std::uniform_int_distribution<std::size_t> item_count(1, 3);
      std::uniform_int_distribution<std::int64_t> item_weight(1, 2);
      std::uniform_int_distribution<std::uint32_t> var_mask(
          1, static_cast<std::uint32_t>((std::size_t{1} << vars.size()) - 1));
      const std::size_t items = item_count(rng);
      std::vector<Rat> item_weights;
      std::vector<std::uint32_t> item_vars;
      for (std::size_t item = 0; item < items; ++item) {
        item_weights.push_back(Rat(item_weight(rng)));
        item_vars.push_back(var_mask(rng));
      }
      FunctionSpec spec;
      spec.kind = "junta";
      spec.variables = vars;
      spec.table = tabulate_coverage(item_weights, item_vars, vars.size());
      tracker.insert(event.id, build_function(spec, params.elements));
      event.fn = std::move(spec);
      live.push_back(event.id);
    }
    trace.events.push_back(std::move(event));
  }
  trace.header.fmax = tracker.peak();
  return trace;
}

TraceFile gen_metric_mst(const MetricParams& params, std::uint64_t seed) {
  if (params.points < 2) {
    throw std::invalid_argument("metric generator needs at least two points");
  }
  std::mt19937_64 rng(seed);
  const LatticePoints lattice = random_lattice(rng, params.points, params.grid);
  TraceFile trace;
  trace.header.trace_kind = "metric";
  trace.header.mode = "mst";
  trace.header.fmin = 1;
  trace.header.fmax = 1;
  trace.header.metric = lattice.matrix;
  trace.header.aspect = lattice.aspect;
  for (std::size_t p = 0; p < params.points; ++p) {
    TraceEvent event;
    event.seq = static_cast<std::int64_t>(p + 1);
    event.kind = TraceEventKind::kArrive;
    event.id = p;
    trace.events.push_back(event);
  }
  return trace;
}

TraceFile gen_metric_steiner(const MetricParams& params, std::uint64_t seed) {
  if (params.points < 2) {
    throw std::invalid_argument("metric generator needs at least two points");
  }
  std::mt19937_64 rng(seed);
  const LatticePoints lattice = random_lattice(rng, params.points, params.grid);
  TraceFile trace;
  trace.header.trace_kind = "metric";
  trace.header.mode = "steiner";
  trace.header.fmin = 1;
  trace.header.fmax = 1;
  trace.header.metric = lattice.matrix;
  trace.header.aspect = lattice.aspect;

  const std::size_t ops = params.ops == 0 ? 2 * params.points : params.ops;
  std::vector<std::uint64_t> present;  // currently-arrived points
  std::uint64_t next_point = 0;
  std::int64_t seq = 0;
  for (std::size_t t = 0; t < ops; ++t) {
    TraceEvent event;
    event.seq = ++seq;
    // Depart only once at least three terminals exist, so the trace
    // exercises interior (potential helper) departures; each point arrives
    // at most once over the whole trace.
    if (present.size() >= 3 && flip(rng, params.depart_prob)) {
      std::uniform_int_distribution<std::size_t> which(0, present.size() - 1);
      const std::size_t at = which(rng);
      event.kind = TraceEventKind::kDepart;
      event.id = present[at];
      present.erase(present.begin() + static_cast<std::ptrdiff_t>(at));
    } else if (next_point < params.points) {
      event.kind = TraceEventKind::kArrive;
      event.id = next_point++;
      present.push_back(event.id);
    } else if (!present.empty()) {
      std::uniform_int_distribution<std::size_t> which(0, present.size() - 1);
      const std::size_t at = which(rng);
      event.kind = TraceEventKind::kDepart;
      event.id = present[at];
      present.erase(present.begin() + static_cast<std::ptrdiff_t>(at));
    } else {
      break;  // everything arrived and departed
    }
    trace.events.push_back(event);
  }
  return trace;
}

}  // namespace dyncover
