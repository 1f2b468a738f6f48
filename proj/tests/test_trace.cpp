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

// Tests for the trace format: exact round-trips for every generator,
// line-numbered parse errors, function instantiation per kind, structural
// validation, metric assembly from matrices/rows/coordinates, and the
// generators' structural contracts.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dyncover/rational.hpp"
#include "dyncover/submodular.hpp"
#include "dyncover/trace.hpp"

using namespace dyncover;

namespace {

// Every generated trace must round-trip exactly and validate.
void check_round_trip(const TraceFile& trace) {
  validate_trace(trace);
  const std::string text = serialize_trace(trace);
  const TraceFile back = parse_trace(text);
  CHECK(back == trace);
  CHECK(serialize_trace(back) == text);
}

// Independently recomputes the bound a cover trace must declare as fmax:
// the largest singleton value of the live sum at any point of the replay
// (never below 1).  Positive marginals of the live sum are dominated by its
// singletons, so this is the smallest honest declaration.
Rat declared_peak(const TraceFile& trace) {
  const std::size_t n = trace.header.ground_size;
  std::map<std::uint64_t, FunctionPtr> live;
  Rat peak = 1;
  for (const TraceEvent& event : trace.events) {
    if (event.kind == TraceEventKind::kInsert) {
      live.emplace(event.id, build_function(*event.fn, n));
    } else {
      live.erase(event.id);
    }
    for (std::size_t e = 0; e < n; ++e) {
      ElementSet s(n);
      s.set(e);
      Rat singleton = 0;
      for (const auto& [id, fn] : live) singleton += fn->value(s);
      peak = std::max(peak, singleton);
    }
  }
  return peak;
}

}  // namespace

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Round trips
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

TEST_CASE("every generator round-trips exactly through text") {
  for (std::uint64_t seed : {1u, 7u, 42u}) {
    check_round_trip(gen_hvc(HvcParams{}, seed));
    check_round_trip(gen_hvc(HvcParams{.elements = 6, .batch = 3}, seed));
    check_round_trip(gen_coverage(CoverageParams{}, seed));
    check_round_trip(
        gen_coverage(CoverageParams{.cost_spread = true}, seed));
    check_round_trip(gen_junta(JuntaParams{}, seed));
    check_round_trip(gen_metric_mst(MetricParams{}, seed));
    check_round_trip(gen_metric_steiner(MetricParams{}, seed));
  }
}

TEST_CASE("generators are deterministic per seed") {
  CHECK(gen_hvc(HvcParams{}, 9) == gen_hvc(HvcParams{}, 9));
  CHECK(gen_coverage(CoverageParams{}, 9) == gen_coverage(CoverageParams{}, 9));
  CHECK(gen_junta(JuntaParams{}, 9) == gen_junta(JuntaParams{}, 9));
  CHECK(gen_metric_steiner(MetricParams{}, 9) ==
        gen_metric_steiner(MetricParams{}, 9));
  CHECK_FALSE(gen_hvc(HvcParams{}, 9) == gen_hvc(HvcParams{}, 10));
}

TEST_CASE("rationals survive serialization exactly") {
  TraceFile trace;
  trace.header.trace_kind = "cover";
  trace.header.mode = "cost";
  trace.header.ground_size = 2;
  trace.header.costs = {Rat(1) / 3, Rat(7) / 2};
  trace.header.fmin = Rat(1) / 1000;
  trace.header.fmax = Rat(999999999999LL);
  TraceEvent insert;
  insert.seq = 1;
  insert.kind = TraceEventKind::kInsert;
  insert.id = 0;
  FunctionSpec spec;
  spec.kind = "modular";
  spec.weights = {Rat(22) / 7, Rat(355) / 113};
  insert.fn = spec;
  trace.events.push_back(insert);
  check_round_trip(trace);
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Parse errors
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

TEST_CASE("parse errors carry line numbers") {
  const std::string good = serialize_trace(gen_hvc(HvcParams{.ops = 4}, 3));

  SUBCASE("malformed JSON names its line") {
    std::string text = good;
    // Corrupt the third line.
    std::size_t pos = 0;
    for (int i = 0; i < 2; ++i) pos = text.find('\n', pos) + 1;
    text.insert(pos, "{not json");
    try {
      parse_trace(text);
      FAIL("expected a parse error");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }

  SUBCASE("empty input reports a missing header") {
    CHECK_THROWS_WITH_AS(parse_trace(""),
                         "trace parse error at line 1: missing header",
                         std::runtime_error);
  }

  SUBCASE("unknown op is rejected with its line") {
    const std::string text =
        "{\"trace\":\"cover\",\"mode\":\"unit\",\"ground\":3,"
        "\"fmin\":\"1\",\"fmax\":\"1\"}\n"
        "{\"t\":1,\"op\":\"explode\",\"id\":0}\n";
    try {
      parse_trace(text);
      FAIL("expected a parse error");
    } catch (const std::runtime_error& e) {
      const std::string what = e.what();
      CHECK(what.find("line 2") != std::string::npos);
      CHECK(what.find("explode") != std::string::npos);
    }
  }

  SUBCASE("missing fields are named") {
    const std::string text =
        "{\"trace\":\"cover\",\"mode\":\"unit\",\"fmin\":\"1\","
        "\"fmax\":\"1\"}\n";
    try {
      parse_trace(text);
      FAIL("expected a parse error");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find("'ground'") != std::string::npos);
    }
  }

  SUBCASE("blank lines do not shift line numbering") {
    std::string text = good;
    text.insert(0, "\n\n");
    const TraceFile back = parse_trace(text);
    CHECK(back == parse_trace(good));
  }
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Function instantiation
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

TEST_CASE("build_function instantiates each kind") {
  SUBCASE("coverage") {
    FunctionSpec spec;
    spec.kind = "coverage";
    spec.item_weights = {Rat(2), Rat(5)};
    spec.covers = {{0}, {0, 1}, {}};
    const FunctionPtr f = build_function(spec, 3);
    CHECK(f->value(full_set(3)) == Rat(7));
    ElementSet only_first(3);
    only_first.set(0);
    CHECK(f->value(only_first) == Rat(2));
  }

  SUBCASE("matroid") {
    FunctionSpec spec;
    spec.kind = "matroid";
    spec.vertices = 3;
    spec.edges = {{0, 1}, {1, 2}, {0, 2}};
    const FunctionPtr f = build_function(spec, 3);
    CHECK(f->value(full_set(3)) == Rat(2));  // triangle has rank 2
  }

  SUBCASE("junta") {
    FunctionSpec spec;
    spec.kind = "junta";
    spec.variables = {1, 3};
    spec.table = {Rat(0), Rat(1), Rat(1), Rat(1)};
    const FunctionPtr f = build_function(spec, 5);
    ElementSet s(5);
    s.set(3);
    CHECK(f->value(s) == Rat(1));
    ElementSet t(5);
    t.set(0);
    t.set(2);
    CHECK(f->value(t) == Rat(0));
  }

  SUBCASE("modular") {
    FunctionSpec spec;
    spec.kind = "modular";
    spec.weights = {Rat(1), Rat(4)};
    const FunctionPtr f = build_function(spec, 2);
    CHECK(f->value(full_set(2)) == Rat(5));
  }

  SUBCASE("malformed descriptions are rejected") {
    FunctionSpec spec;
    spec.kind = "nonsense";
    CHECK_THROWS_AS(build_function(spec, 3), std::invalid_argument);

    spec.kind = "coverage";
    spec.covers = {{0}};  // wrong length for ground size 3
    spec.item_weights = {Rat(1)};
    CHECK_THROWS_AS(build_function(spec, 3), std::invalid_argument);

    FunctionSpec junta;
    junta.kind = "junta";
    junta.variables = {7};  // outside ground set of size 3
    junta.table = {Rat(0), Rat(1)};
    CHECK_THROWS_AS(build_function(junta, 3), std::invalid_argument);

    FunctionSpec cov;
    cov.kind = "coverage";
    cov.item_weights = {Rat(1)};
    cov.covers = {{0}, {5}, {}};  // item 5 does not exist
    CHECK_THROWS_AS(build_function(cov, 3), std::invalid_argument);
  }
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Structural validation
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

TEST_CASE("validate_trace rejects inconsistent traces") {
  TraceFile base = gen_hvc(HvcParams{.ops = 6, .depart_prob = 0.0}, 5);
  validate_trace(base);

  SUBCASE("delete of an id that is not live") {
    TraceFile bad = base;
    TraceEvent event;
    event.seq = 99;
    event.kind = TraceEventKind::kDelete;
    event.id = 999;
    bad.events.push_back(event);
    CHECK_THROWS_AS(validate_trace(bad), std::invalid_argument);
  }

  SUBCASE("function ids are never reused") {
    TraceFile bad = base;
    TraceEvent del;
    del.seq = 98;
    del.kind = TraceEventKind::kDelete;
    del.id = bad.events.front().id;
    bad.events.push_back(del);
    TraceEvent again = bad.events.front();
    again.seq = 99;
    bad.events.push_back(again);
    CHECK_THROWS_AS(validate_trace(bad), std::invalid_argument);
  }

  SUBCASE("insert without a function") {
    TraceFile bad = base;
    bad.events.front().fn.reset();
    CHECK_THROWS_AS(validate_trace(bad), std::invalid_argument);
  }

  SUBCASE("metric ops are rejected in cover traces and vice versa") {
    TraceFile bad = base;
    TraceEvent arrive;
    arrive.seq = 99;
    arrive.kind = TraceEventKind::kArrive;
    arrive.id = 0;
    bad.events.push_back(arrive);
    CHECK_THROWS_AS(validate_trace(bad), std::invalid_argument);

    TraceFile metric = gen_metric_mst(MetricParams{.points = 3}, 1);
    TraceEvent insert;
    insert.seq = 99;
    insert.kind = TraceEventKind::kInsert;
    insert.id = 0;
    FunctionSpec spec;
    spec.kind = "modular";
    spec.weights = {Rat(1)};
    insert.fn = spec;
    metric.events.push_back(insert);
    CHECK_THROWS_AS(validate_trace(metric), std::invalid_argument);
  }

  SUBCASE("double arrival and absent departure") {
    TraceFile metric = gen_metric_mst(MetricParams{.points = 3}, 1);
    TraceEvent again = metric.events.front();
    again.seq = 99;
    metric.events.push_back(again);
    CHECK_THROWS_AS(validate_trace(metric), std::invalid_argument);

    TraceFile metric2 = gen_metric_mst(MetricParams{.points = 3}, 1);
    TraceEvent depart;
    depart.seq = 99;
    depart.kind = TraceEventKind::kDepart;
    depart.id = 77;
    metric2.events.push_back(depart);
    CHECK_THROWS_AS(validate_trace(metric2), std::invalid_argument);
  }

  SUBCASE("header shape errors") {
    TraceFile bad = base;
    bad.header.costs = {Rat(1)};  // wrong length
    CHECK_THROWS_AS(validate_trace(bad), std::invalid_argument);

    TraceFile bad2 = base;
    bad2.header.fmin = 0;
    CHECK_THROWS_AS(validate_trace(bad2), std::invalid_argument);

    TraceFile bad3 = base;
    bad3.header.fmax = bad3.header.fmin / 2;
    CHECK_THROWS_AS(validate_trace(bad3), std::invalid_argument);
  }
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Metric assembly
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

TEST_CASE("trace_metric builds instances from all three sources") {
  SUBCASE("header matrix") {
    const TraceFile trace = gen_metric_mst(MetricParams{.points = 4}, 11);
    const MetricInstance metric = trace_metric(trace);
    REQUIRE(metric.size() >= 4);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        CHECK(metric.distance(i, j) == trace.header.metric[i][j]);
      }
    }
  }

  SUBCASE("per-arrival distance rows") {
    TraceFile trace;
    trace.header.trace_kind = "metric";
    trace.header.mode = "mst";
    const std::vector<std::vector<Rat>> d = {
        {Rat(0), Rat(1), Rat(2)},
        {Rat(1), Rat(0), Rat(1)},
        {Rat(2), Rat(1), Rat(0)},
    };
    for (std::size_t p = 0; p < 3; ++p) {
      TraceEvent event;
      event.seq = static_cast<std::int64_t>(p + 1);
      event.kind = TraceEventKind::kArrive;
      event.id = p;
      event.row = d[p];
      trace.events.push_back(event);
    }
    validate_trace(trace);
    check_round_trip(trace);
    const MetricInstance metric = trace_metric(trace);
    CHECK(metric.distance(0, 2) == Rat(2));
    CHECK(metric.aspect_ratio() == Rat(2));
  }

  SUBCASE("coordinates round to denominator 2^40") {
    TraceFile trace;
    trace.header.trace_kind = "metric";
    trace.header.mode = "mst";
    const std::vector<std::vector<Rat>> xy = {
        {Rat(0), Rat(0)}, {Rat(3), Rat(0)}, {Rat(3), Rat(4)}};
    for (std::size_t p = 0; p < 3; ++p) {
      TraceEvent event;
      event.seq = static_cast<std::int64_t>(p + 1);
      event.kind = TraceEventKind::kArrive;
      event.id = p;
      event.coordinates = xy[p];
      trace.events.push_back(event);
    }
    check_round_trip(trace);
    const MetricInstance metric = trace_metric(trace);
    // The 3-4-5 right triangle has integer distances, which the rounding
    // must reproduce exactly.
    CHECK(metric.distance(0, 1) == Rat(3));
    CHECK(metric.distance(1, 2) == Rat(4));
    CHECK(metric.distance(0, 2) == Rat(5));

    // An irrational distance lands within 2^-40 of the true value.
    TraceFile diag = trace;
    diag.events.resize(2);
    diag.events[1].coordinates = {Rat(1), Rat(1)};
    const MetricInstance m2 = trace_metric(diag);
    const double err =
        std::abs(to_double(m2.distance(0, 1)) - std::sqrt(2.0));
    CHECK(err <= 1.0 / 1099511627776.0);  // 2^-40
  }

  SUBCASE("coordinate pairs too close to separate are rejected") {
    TraceFile trace;
    trace.header.trace_kind = "metric";
    trace.header.mode = "mst";
    const Rat tiny = Rat(1) / (Rat(std::int64_t{1} << 45));
    for (std::size_t p = 0; p < 2; ++p) {
      TraceEvent event;
      event.seq = static_cast<std::int64_t>(p + 1);
      event.kind = TraceEventKind::kArrive;
      event.id = p;
      event.coordinates = {p == 0 ? Rat(0) : tiny, Rat(0)};
      trace.events.push_back(event);
    }
    CHECK_THROWS_AS(trace_metric(trace), std::invalid_argument);
  }

  SUBCASE("conflicting and mixed point data are rejected") {
    TraceFile trace;
    trace.header.trace_kind = "metric";
    trace.header.mode = "steiner";
    TraceEvent a0;
    a0.seq = 1;
    a0.kind = TraceEventKind::kArrive;
    a0.id = 0;
    a0.row = {Rat(0), Rat(1)};
    TraceEvent a1 = a0;
    a1.seq = 2;
    a1.id = 1;
    a1.row = {Rat(1), Rat(0)};
    TraceEvent d0;
    d0.seq = 3;
    d0.kind = TraceEventKind::kDepart;
    d0.id = 0;
    TraceEvent a0again = a0;
    a0again.seq = 4;
    a0again.row = {Rat(0), Rat(2)};  // contradicts the first arrival
    trace.events = {a0, a1, d0, a0again};
    CHECK_THROWS_AS(trace_metric(trace), std::invalid_argument);

    trace.events[3].row.clear();
    trace.events[3].coordinates = {Rat(0), Rat(0)};
    CHECK_THROWS_AS(trace_metric(trace), std::invalid_argument);
  }
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Generator contracts
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

TEST_CASE("hypergraph generator emits indicator juntas with LIFO departures") {
  for (std::uint64_t seed : {2u, 13u, 77u}) {
    const TraceFile trace = gen_hvc(HvcParams{.elements = 9, .ops = 50}, seed);
    CHECK(trace.header.fmax == declared_peak(trace));
    std::vector<std::uint64_t> stack;
    bool saw_delete = false;
    for (const TraceEvent& event : trace.events) {
      if (event.kind == TraceEventKind::kInsert) {
        REQUIRE(event.fn.has_value());
        CHECK(event.fn->kind == "junta");
        CHECK(event.fn->variables.size() <= 3);
        CHECK(event.fn->table.front() == Rat(0));
        for (std::size_t m = 1; m < event.fn->table.size(); ++m) {
          CHECK(event.fn->table[m] == Rat(1));  // indicator of the hyperedge
        }
        stack.push_back(event.id);
      } else {
        REQUIRE(event.kind == TraceEventKind::kDelete);
        REQUIRE_FALSE(stack.empty());
        CHECK(event.id == stack.back());  // most recent live insert
        stack.pop_back();
        saw_delete = true;
      }
    }
    CHECK(saw_delete);
  }
}

TEST_CASE("batched hypergraph arrivals are worth exactly the batch size") {
  const std::size_t batch = 4;
  const TraceFile trace =
      gen_hvc(HvcParams{.elements = 7, .ops = 30, .batch = batch}, 21);
  CHECK(trace.header.fmax == declared_peak(trace));
  std::size_t inserts = 0;
  for (const TraceEvent& event : trace.events) {
    if (event.kind != TraceEventKind::kInsert) continue;
    ++inserts;
    REQUIRE(event.fn.has_value());
    CHECK(event.fn->kind == "coverage");
    const FunctionPtr f = build_function(*event.fn, 7);
    CHECK(f->value(full_set(7)) == Rat(batch));
  }
  CHECK(inserts > 0);
}

TEST_CASE("junta generator stays within its arity and declared extremes") {
  for (std::uint64_t seed : {3u, 31u}) {
    const TraceFile trace =
        gen_junta(JuntaParams{.elements = 10, .arity = 3, .ops = 40}, seed);
    CHECK(trace.header.mode == "rjunta");
    for (const TraceEvent& event : trace.events) {
      if (event.kind != TraceEventKind::kInsert) continue;
      REQUIRE(event.fn.has_value());
      CHECK(event.fn->kind == "junta");
      CHECK(event.fn->variables.size() <= 3);
      CHECK(event.fn->table.front() == Rat(0));
      // Tables are monotone under mask inclusion.
      const auto& table = event.fn->table;
      for (std::size_t m = 0; m < table.size(); ++m) {
        for (std::size_t b = 0; (std::size_t{1} << b) < table.size(); ++b) {
          const std::size_t with = m | (std::size_t{1} << b);
          CHECK(table[m] <= table[with]);
        }
      }
    }
    CHECK(trace.header.fmax == declared_peak(trace));
    CHECK(trace.header.fmin == Rat(1));
  }
}

TEST_CASE("coverage generator declares matching extremes and costs") {
  const TraceFile trace =
      gen_coverage(CoverageParams{.cost_spread = true}, 17);
  CHECK(trace.header.mode == "cost");
  REQUIRE(trace.header.costs.size() == trace.header.ground_size);
  Rat cmin = trace.header.costs.front();
  Rat cmax = cmin;
  for (const Rat& c : trace.header.costs) {
    cmin = std::min(cmin, c);
    cmax = std::max(cmax, c);
  }
  CHECK(cmax / cmin <= Rat(1000));  // bounded cost spread
  CHECK(trace.header.fmax == declared_peak(trace));
}

TEST_CASE("steiner generator records the aspect ratio and arrival discipline") {
  for (std::uint64_t seed : {5u, 23u}) {
    const TraceFile trace =
        gen_metric_steiner(MetricParams{.points = 7, .ops = 18}, seed);
    const MetricInstance metric = trace_metric(trace);
    CHECK(trace.header.aspect == metric.aspect_ratio());
    std::set<std::uint64_t> arrived;
    std::size_t departures = 0;
    for (const TraceEvent& event : trace.events) {
      if (event.kind == TraceEventKind::kArrive) {
        CHECK(arrived.insert(event.id).second);  // at most one arrival each
      } else {
        ++departures;
      }
    }
    CHECK(departures > 0);
    validate_trace(trace);
  }
}
