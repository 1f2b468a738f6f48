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

// Tests for the recourse potentials: evaluation formulas against hand
// arithmetic and an independent recomputation, construction validation per
// family, per-event bound dispatch with the tolerance rule, the budget
// identity, and end-to-end audits over real engine dynamics in all four
// mode/potential pairings.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>
#include <vector>

#include "dyncover/element_set.hpp"
#include "dyncover/permutation_engine.hpp"
#include "dyncover/potentials.hpp"
#include "dyncover/rational.hpp"
#include "dyncover/submodular.hpp"

using namespace dyncover;

namespace {

constexpr double kE = 2.718281828459045235;

std::shared_ptr<CoverageFunction> cover(std::size_t n, std::size_t items,
                                        std::vector<std::vector<std::size_t>> c) {
  return std::make_shared<CoverageFunction>(n, items, std::move(c));
}

// A snapshot in unit-cost mode, where raw values equal the shown values.
EngineSnapshot unit_snapshot(std::vector<double> mff) {
  EngineSnapshot s;
  s.mode = MffMode::kUnitCost;
  s.cost.assign(mff.size(), 1.0);
  s.raw = mff;
  s.mff = std::move(mff);
  return s;
}

EngineSnapshot ratio_snapshot(std::vector<double> raw,
                              std::vector<double> cost) {
  EngineSnapshot s;
  s.mode = MffMode::kCostRatio;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    s.mff.push_back(raw[i] / cost[i]);
  }
  s.raw = std::move(raw);
  s.cost = std::move(cost);
  return s;
}

// Second implementation of the power-law potential, written independently:
// extended precision, explicit exp/log, and reversed accumulation order.
double power_law_reference(const EngineSnapshot& s, double delta) {
  long double phi = 0.0L;
  for (std::size_t i = s.mff.size(); i-- > 0;) {
    if (s.mff[i] <= 0.0) continue;
    const long double x = s.mff[i];
    phi += static_cast<long double>(s.cost[i]) *
           expl((1.0L - static_cast<long double>(delta)) * logl(x)) /
           (1.0L - static_cast<long double>(delta));
  }
  return static_cast<double>(phi);
}

PotentialParams params_of(double gamma, double fmin, double fmax, double cmin,
                          double cmax) {
  PotentialParams p;
  p.gamma = gamma;
  p.fmin = fmin;
  p.fmax = fmax;
  p.cmin = cmin;
  p.cmax = cmax;
  return p;
}

// Drives one engine run while auditing every atomic event with a set of
// potential auditors, accumulating each one's budget ledger.
struct AuditedRun {
  PermutationEngine eng;
  ActiveSet active;
  std::vector<PotentialAuditor> auditors;
  std::vector<BudgetLedger> ledgers;
  std::size_t records = 0;
  std::size_t gamma_moves = 0;

  AuditedRun(MffMode mode, Rat gamma, std::vector<Rat> costs,
             std::vector<PotentialAuditor> auds)
      : eng(mode, std::move(gamma), std::move(costs), nullptr),
        active(eng.universe_size()),
        auditors(std::move(auds)),
        ledgers(auditors.size()) {}

  void check(const EngineSnapshot& before, const EngineSnapshot& after,
             AuditEventKind kind, double gt = 0.0) {
    for (std::size_t a = 0; a < auditors.size(); ++a) {
      AuditRecord rec = auditors[a].audit_event(before, after, kind, gt);
      CHECK(rec.pass);
      CHECK(rec.scaling_ok);
      ++records;
      if (kind == AuditEventKind::kInsert) {
        ledgers[a].add_insertion(auditors[a].insert_bound(gt));
      }
    }
  }

  void settle() {
    EngineSnapshot cached = eng.snapshot();
    eng.stabilize([&](const EngineOp& op) {
      EngineSnapshot now = eng.snapshot();
      if (op.kind == EngineOpKind::kSwap) {
        check(cached, now, AuditEventKind::kSwap);
      } else {
        check(cached, now, AuditEventKind::kGammaMove);
        ++gamma_moves;
        for (auto& ledger : ledgers) ledger.add_gamma_moves(1);
      }
      cached = std::move(now);
    });
  }

  void insert(FunctionId id, FunctionPtr fn) {
    const double gt = to_double(fn->total());
    EngineSnapshot before = eng.snapshot();
    active.insert(id, std::move(fn));
    eng.set_function(active.as_sum());
    check(before, eng.snapshot(), AuditEventKind::kInsert, gt);
    settle();
  }

  void erase(FunctionId id) {
    EngineSnapshot before = eng.snapshot();
    active.erase(id);
    eng.set_function(active.as_sum());
    check(before, eng.snapshot(), AuditEventKind::kDelete);
    settle();
  }

  void check_budgets() const {
    for (std::size_t a = 0; a < auditors.size(); ++a) {
      CHECK(ledgers[a].respected(auditors[a].move_decrease()));
    }
  }
};

// Coverage instance engineered so a jump move fires: one heavy element, a
// band of singleton-value elements, and a bundle element whose value is zero
// at the tail but beats the whole band when moved just behind the head.
struct JumpInstance {
  std::size_t n = 10;        // e0 heavy, e1..e8 band, e9 bundle
  std::size_t items = 17;    // 9 head items + 8 band items
  std::shared_ptr<CoverageFunction> fn() const {
    std::vector<std::vector<std::size_t>> covers(n);
    for (std::size_t t = 0; t < 9; ++t) covers[0].push_back(t);
    for (std::size_t i = 1; i <= 8; ++i) covers[i] = {8 + i};
    for (std::size_t t = 9; t < 17; ++t) covers[9].push_back(t);
    return cover(n, items, covers);
  }
  // A small unrelated function over the same universe, used as churn.
  std::shared_ptr<CoverageFunction> churn() const {
    std::vector<std::vector<std::size_t>> covers(n);
    covers[1] = {0, 1};
    covers[4] = {2};
    covers[7] = {3, 4};
    return cover(n, items, covers);
  }
};

}  // namespace

TEST_CASE("names are stable") {
  CHECK(potential_name(PotentialKind::kTsallis) == "tsallis");
  CHECK(potential_name(PotentialKind::kPowerLawH) == "powerlaw_h");
  CHECK(potential_name(PotentialKind::kSqrt) == "sqrt");
  CHECK(potential_name(PotentialKind::kShannon) == "shannon");
  CHECK(audit_event_name(AuditEventKind::kInsert) == "insert");
  CHECK(audit_event_name(AuditEventKind::kDelete) == "delete");
  CHECK(audit_event_name(AuditEventKind::kSwap) == "swap");
  CHECK(audit_event_name(AuditEventKind::kGammaMove) == "gamma_move");
  CHECK(audit_event_name(AuditEventKind::kCleanup) == "cleanup");
}

TEST_CASE("construction validates parameters per family") {
  const double e2 = std::exp(2.0);

  SUBCASE("common parameter sanity") {
    CHECK_THROWS_AS(PotentialAuditor(PotentialKind::kTsallis,
                                     params_of(e2, 0.0, 1, 1, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(PotentialAuditor(PotentialKind::kTsallis,
                                     params_of(e2, 2, 1, 1, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(PotentialAuditor(PotentialKind::kTsallis,
                                     params_of(e2, 1, 1, 3, 2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(PotentialAuditor(PotentialKind::kTsallis,
                                     params_of(-1.0, 1, 1, 1, 1)),
                    std::invalid_argument);
  }

  SUBCASE("tsallis needs a jump factor above e") {
    CHECK_THROWS_AS(PotentialAuditor(PotentialKind::kTsallis,
                                     params_of(kE, 1, 4, 1, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(PotentialAuditor(PotentialKind::kTsallis,
                                     params_of(2.0, 1, 4, 1, 1)),
                    std::invalid_argument);
    PotentialAuditor aud(PotentialKind::kTsallis, params_of(e2, 1, 4, 1, 1));
    CHECK(aud.alpha() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(aud.move_decrease() ==
          doctest::Approx(kE / 2.0 - 1.0).epsilon(1e-12));
  }

  SUBCASE("sqrt needs a jump factor above 4") {
    CHECK_THROWS_AS(PotentialAuditor(PotentialKind::kSqrt,
                                     params_of(4.0, 1, 4, 1, 2)),
                    std::invalid_argument);
    PotentialAuditor aud(PotentialKind::kSqrt, params_of(5.0, 1, 4, 1, 2));
    CHECK(aud.move_decrease() ==
          doctest::Approx(std::sqrt(5.0) / 2.0 - 1.0).epsilon(1e-12));
  }

  SUBCASE("shannon needs a jump factor above e") {
    CHECK_THROWS_AS(PotentialAuditor(PotentialKind::kShannon,
                                     params_of(kE, 1, 4, 1, 2)),
                    std::invalid_argument);
    PotentialAuditor aud(PotentialKind::kShannon, params_of(3.0, 1, 4, 1, 2));
    CHECK(aud.move_decrease() ==
          doctest::Approx(1.0 / (kE * 4.0) * std::log(3.0 / kE))
              .epsilon(1e-12));
  }

  SUBCASE("power law needs a real cost spread") {
    CHECK_THROWS_AS(PotentialAuditor(PotentialKind::kPowerLawH,
                                     params_of(e2, 1, 4, 1, 1)),
                    std::invalid_argument);
    // Spread 1.29 leaves the per-move decrease negative at this jump factor;
    // spread 1.30 makes it (barely) positive.
    CHECK_THROWS_AS(PotentialAuditor(PotentialKind::kPowerLawH,
                                     params_of(e2, 1, 4, 1.0, 1.29)),
                    std::invalid_argument);
    PotentialAuditor ok(PotentialKind::kPowerLawH,
                        params_of(e2, 1, 4, 1.0, 1.30));
    CHECK(ok.eps_gamma() > 0.0);
    CHECK(ok.eps_gamma() < 0.02);
  }
}

TEST_CASE("power-law decrease constant sits just below delta") {
  const double e2 = std::exp(2.0);

  // Cost spread e makes delta exactly 1/2; the decrease constant lands at
  // e/2 - 1, strictly below delta.  The gap closes as the spread grows.
  PotentialAuditor half(PotentialKind::kPowerLawH,
                        params_of(e2, 1, 8, 1.0, kE));
  CHECK(half.delta() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(half.eps_gamma() == doctest::Approx(kE / 2.0 - 1.0).epsilon(1e-12));
  CHECK(half.eps_gamma() < half.delta());

  PotentialAuditor small(PotentialKind::kPowerLawH,
                         params_of(e2, 1, 8, 1.0, std::exp(9.0)));
  CHECK(small.delta() == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(small.eps_gamma() < small.delta());
  // Third-order Taylor gap: eps >= delta * (1 - delta^2) for small delta.
  CHECK(small.eps_gamma() >=
        small.delta() * (1.0 - small.delta() * small.delta()));
}

TEST_CASE("evaluation matches hand arithmetic") {
  const double e2 = std::exp(2.0);

  SUBCASE("tsallis with exponent one half") {
    PotentialAuditor aud(PotentialKind::kTsallis, params_of(e2, 1, 4, 1, 1));
    CHECK(aud.evaluate(unit_snapshot({4.0, 1.0, 0.0})) ==
          doctest::Approx(3.0).epsilon(1e-9));
  }

  SUBCASE("empty state evaluates to zero for every family") {
    EngineSnapshot unit = unit_snapshot({});
    EngineSnapshot ratio = ratio_snapshot({}, {});
    EngineSnapshot affinity;
    affinity.mode = MffMode::kMutualAffinity;
    CHECK(PotentialAuditor(PotentialKind::kTsallis, params_of(e2, 1, 4, 1, 1))
              .evaluate(unit) == 0.0);
    CHECK(PotentialAuditor(PotentialKind::kPowerLawH, params_of(e2, 1, 4, 1, 2))
              .evaluate(ratio) == 0.0);
    CHECK(PotentialAuditor(PotentialKind::kShannon, params_of(e2, 1, 4, 1, 2))
              .evaluate(ratio) == 0.0);
    CHECK(PotentialAuditor(PotentialKind::kSqrt, params_of(5.0, 1, 4, 1, 2))
              .evaluate(affinity) == 0.0);
  }

  SUBCASE("shannon applies the rescaling") {
    PotentialAuditor aud(PotentialKind::kShannon, params_of(e2, 1, 4, 1, 2));
    // One element with the largest declared value at the cheapest cost:
    // scaled coverage 1/e, scaled cost 1, term (1/e) * ln(e) = 1/e.
    CHECK(aud.evaluate(ratio_snapshot({4.0}, {1.0})) ==
          doctest::Approx(1.0 / kE).epsilon(1e-12));
    // Two-element hand computation.
    const double k0 = 4.0 / (kE * 4.0), k1 = 1.0 / (kE * 4.0);
    const double expect =
        k0 * std::log(2.0 / k0) + k1 * std::log(1.0 / k1);
    CHECK(aud.evaluate(ratio_snapshot({4.0, 1.0}, {2.0, 1.0})) ==
          doctest::Approx(expect).epsilon(1e-12));
    // Within the declared extremes every term is nonnegative.
    CHECK(aud.evaluate(ratio_snapshot({1.0, 4.0, 2.5}, {1.0, 2.0, 1.5})) >=
          0.0);
  }

  SUBCASE("shannon insists on raw values in the snapshot") {
    PotentialAuditor aud(PotentialKind::kShannon, params_of(e2, 1, 4, 1, 2));
    EngineSnapshot s = ratio_snapshot({2.0}, {1.0});
    s.raw.clear();
    CHECK_THROWS_AS(aud.evaluate(s), std::invalid_argument);
  }
}

TEST_CASE("power-law evaluation matches an independent recomputation") {
  const double e2 = std::exp(2.0);
  PotentialAuditor aud(PotentialKind::kPowerLawH,
                       params_of(e2, 0.5, 16.0, 1.0, 8.0));
  std::mt19937_64 rng(20260819);
  std::uniform_int_distribution<int> size_dist(0, 40);
  std::uniform_real_distribution<double> cost_dist(1.0, 8.0);
  std::uniform_real_distribution<double> value_dist(0.5, 16.0);
  std::bernoulli_distribution dead(0.3);
  for (int round = 0; round < 200; ++round) {
    const int n = size_dist(rng);
    std::vector<double> raw, cost;
    for (int i = 0; i < n; ++i) {
      cost.push_back(cost_dist(rng));
      raw.push_back(dead(rng) ? 0.0 : value_dist(rng));
    }
    EngineSnapshot s = ratio_snapshot(raw, cost);
    CHECK(aud.evaluate(s) ==
          doctest::Approx(power_law_reference(s, aud.delta()))
              .epsilon(1e-12));
  }
}

TEST_CASE("mode compatibility is enforced") {
  CHECK(PotentialAuditor::compatible(PotentialKind::kTsallis,
                                     MffMode::kUnitCost));
  CHECK_FALSE(PotentialAuditor::compatible(PotentialKind::kTsallis,
                                           MffMode::kCostRatio));
  CHECK(PotentialAuditor::compatible(PotentialKind::kPowerLawH,
                                     MffMode::kCostRatio));
  CHECK(PotentialAuditor::compatible(PotentialKind::kShannon,
                                     MffMode::kCostRatio));
  CHECK_FALSE(PotentialAuditor::compatible(PotentialKind::kShannon,
                                           MffMode::kMutualAffinity));
  CHECK(PotentialAuditor::compatible(PotentialKind::kSqrt,
                                     MffMode::kMutualAffinity));
  CHECK_FALSE(PotentialAuditor::compatible(PotentialKind::kSqrt,
                                           MffMode::kUnitCost));

  PotentialAuditor aud(PotentialKind::kTsallis,
                       params_of(std::exp(2.0), 1, 4, 1, 1));
  EngineSnapshot wrong = ratio_snapshot({1.0}, {1.0});
  CHECK_THROWS_AS(aud.evaluate(wrong), std::invalid_argument);
}

TEST_CASE("event bounds dispatch by kind and respect the tolerance") {
  const double e2 = std::exp(2.0);
  PotentialAuditor aud(PotentialKind::kTsallis, params_of(e2, 1, 16, 1, 1));
  // With exponent 1/2, the potential of a unit snapshot is the sum of square
  // roots of its values.
  const EngineSnapshot base = unit_snapshot({16.0, 1.0});  // phi = 5

  SUBCASE("delete never pays") {
    CHECK(aud.audit_event(base, unit_snapshot({16.0}), AuditEventKind::kDelete)
              .pass);
    CHECK_FALSE(aud.audit_event(base, unit_snapshot({16.0, 4.0}),
                                AuditEventKind::kDelete)
                    .pass);
  }

  SUBCASE("swap and cleanup share the zero bound") {
    CHECK(aud.audit_event(base, unit_snapshot({1.0, 16.0}),
                          AuditEventKind::kSwap)
              .pass);
    CHECK(aud.audit_event(base, unit_snapshot({16.0, 1.0}),
                          AuditEventKind::kCleanup)
              .pass);
    CHECK_FALSE(aud.audit_event(base, unit_snapshot({16.0, 2.0}),
                                AuditEventKind::kCleanup)
                    .pass);
  }

  SUBCASE("insert pays at most the newcomer's budget") {
    // Budget for total value 4 at fmin 1 is 4 * 1^(alpha-1) = 4.
    CHECK(aud.insert_bound(4.0) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(aud.audit_event(base, unit_snapshot({16.0, 1.0, 16.0}),
                          AuditEventKind::kInsert, 4.0)
              .pass);  // delta phi = 4, exactly at the bound
    CHECK_FALSE(aud.audit_event(base, unit_snapshot({16.0, 1.0, 25.0}),
                                AuditEventKind::kInsert, 4.0)
                    .pass);  // delta phi = 5 > 4
  }

  SUBCASE("jump moves must pay out the guaranteed decrease") {
    const double dec = aud.move_decrease();
    CHECK(dec == doctest::Approx(kE / 2.0 - 1.0).epsilon(1e-12));
    CHECK(aud.audit_event(base, unit_snapshot({16.0, 0.0}),
                          AuditEventKind::kGammaMove)
              .pass);  // decrease of 1 > e/2 - 1
    CHECK_FALSE(aud.audit_event(base, unit_snapshot({16.0, 0.81}),
                                AuditEventKind::kGammaMove)
                    .pass);  // decrease of 0.1 is too small
  }

  SUBCASE("the boundary carries a relative tolerance") {
    // phi values near 5, so the slack is 5e-9.  An overshoot of half that
    // passes; an overshoot of four times that fails.
    AuditRecord just_inside = aud.audit_event(
        base, unit_snapshot({16.0, 1.0 + 2.5e-9}), AuditEventKind::kSwap);
    // sqrt(1 + 2.5e-9) - 1 is about 1.25e-9, within the 5e-9 slack.
    CHECK(just_inside.pass);
    AuditRecord outside = aud.audit_event(
        base, unit_snapshot({16.0, 1.0 + 4.0e-8}), AuditEventKind::kSwap);
    CHECK_FALSE(outside.pass);
  }
}

TEST_CASE("budget arithmetic closes the recourse loop") {
  const double e2 = std::exp(2.0);

  SUBCASE("power-law closed form") {
    const double fmin = 0.5, cmin = 1.0, cmax = 6.0, sum_gt = 37.0;
    PotentialAuditor aud(PotentialKind::kPowerLawH,
                         params_of(e2, fmin, 16.0, cmin, cmax));
    const double d = aud.delta();
    auto h = [&](double x) { return std::pow(x, 1.0 - d) / (1.0 - d); };
    const double expect = sum_gt / (aud.eps_gamma() * fmin) * (cmax / cmin) *
                          h(fmin / cmax) / h(fmin / cmin);
    CHECK(aud.max_gamma_moves(sum_gt) ==
          doctest::Approx(expect).epsilon(1e-12));
    CHECK(aud.upfront_recourse_bound(sum_gt) ==
          doctest::Approx(2.0 * expect).epsilon(1e-12));
  }

  SUBCASE("tsallis closed form") {
    const double sum_gt = 11.0, fmin = 1.0;
    PotentialAuditor aud(PotentialKind::kTsallis,
                         params_of(e2, fmin, 16.0, 1, 1));
    const double expect =
        2.0 * (kE * std::log(e2)) / (e2 - kE * std::log(e2)) * sum_gt / fmin;
    CHECK(aud.upfront_recourse_bound(sum_gt) ==
          doctest::Approx(expect).epsilon(1e-12));
  }

  SUBCASE("ledger compares spend against grant") {
    BudgetLedger ledger;
    ledger.add_insertion(10.0);
    ledger.add_gamma_moves(4);
    CHECK(ledger.respected(2.5));        // 10 <= 10 at the boundary
    CHECK_FALSE(ledger.respected(2.6));  // 10.4 > 10
    ledger.add_insertion(0.4);
    CHECK(ledger.respected(2.6));
  }
}

TEST_CASE("scaling flags fire when declarations are violated") {
  const double e2 = std::exp(2.0);
  PotentialAuditor aud(PotentialKind::kShannon, params_of(e2, 1, 2, 1, 4));
  const EngineSnapshot fine = ratio_snapshot({2.0, 1.0}, {1.0, 4.0});
  CHECK(aud.audit_event(fine, fine, AuditEventKind::kSwap).scaling_ok);

  // A raw value above the declared maximum.
  const EngineSnapshot hot = ratio_snapshot({3.0, 1.0}, {1.0, 4.0});
  CHECK_FALSE(aud.audit_event(fine, hot, AuditEventKind::kSwap).scaling_ok);
  CHECK_FALSE(aud.audit_event(hot, fine, AuditEventKind::kSwap).scaling_ok);

  // A cost below the declared minimum.
  const EngineSnapshot cheap = ratio_snapshot({2.0}, {0.5});
  CHECK_FALSE(aud.audit_event(fine, cheap, AuditEventKind::kSwap).scaling_ok);

  // A positive raw value below the declared minimum.
  const EngineSnapshot faint = ratio_snapshot({0.25}, {1.0});
  CHECK_FALSE(aud.audit_event(fine, faint, AuditEventKind::kSwap).scaling_ok);
}

TEST_CASE("real dynamics pass every audit in all four pairings") {
  JumpInstance inst;

  SUBCASE("unit-cost mode with the tsallis potential") {
    std::vector<Rat> costs(inst.n, Rat(1));
    AuditedRun run(MffMode::kUnitCost, rat_e2(), costs,
                   {PotentialAuditor(
                       PotentialKind::kTsallis,
                       params_of(to_double(rat_e2()), 1.0, 17.0, 1.0, 1.0))});
    run.insert(0, inst.fn());
    CHECK(run.gamma_moves >= 1);  // the bundle jumps over the band
    // Churn: a second function, then remove the first.
    run.insert(1, inst.churn());
    run.erase(0);
    run.erase(1);
    CHECK(run.records > 0);
    run.check_budgets();
  }

  SUBCASE("cost-ratio mode with the power-law and shannon potentials") {
    // Costs 1 for the heavy head, 2 elsewhere: spread 2 keeps the power-law
    // decrease constant positive, and the bundle's jump stays legal.
    std::vector<Rat> costs(inst.n, Rat(2));
    costs[0] = 1;
    const double e2 = to_double(rat_e2());
    AuditedRun run(
        MffMode::kCostRatio, rat_e2(), costs,
        {PotentialAuditor(PotentialKind::kPowerLawH,
                          params_of(e2, 1.0, 17.0, 1.0, 2.0)),
         PotentialAuditor(PotentialKind::kShannon,
                          params_of(e2, 1.0, 17.0, 1.0, 2.0))});
    run.insert(0, inst.fn());
    CHECK(run.gamma_moves >= 1);
    run.insert(1, inst.churn());
    run.erase(0);
    run.erase(1);
    run.check_budgets();
  }

  SUBCASE("mutual-affinity mode with the sqrt potential") {
    std::vector<Rat> costs(inst.n, Rat(2));
    costs[0] = 1;
    AuditedRun run(MffMode::kMutualAffinity, Rat(5), costs,
                   {PotentialAuditor(PotentialKind::kSqrt,
                                     params_of(5.0, 1.0, 17.0, 1.0, 2.0))});
    run.insert(0, inst.fn());
    run.insert(1, inst.churn());
    run.erase(0);
    run.erase(1);
    CHECK(run.records > 0);
    run.check_budgets();
  }
}

TEST_CASE("power-law exponent override is honored and validated") {
  PotentialParams params;
  params.gamma = kE * kE;
  params.fmin = 1.0;
  params.fmax = 1.0;
  params.cmin = 1.0;
  params.cmax = kE;  // default exponent would be 1/2

  params.power_delta = 0.4;
  PotentialAuditor aud(PotentialKind::kPowerLawH, params);
  CHECK(aud.delta() == doctest::Approx(0.4));
  CHECK(aud.eps_gamma() ==
        doctest::Approx(std::pow(params.gamma, 0.4) * 0.6 - 1.0));
  CHECK(aud.eps_gamma() > 0.0);

  params.power_delta = 1.2;  // outside (0, 1)
  CHECK_THROWS_AS(PotentialAuditor(PotentialKind::kPowerLawH, params),
                  std::invalid_argument);
  params.power_delta = 0.99;  // decrease constant goes negative
  CHECK_THROWS_AS(PotentialAuditor(PotentialKind::kPowerLawH, params),
                  std::invalid_argument);
}
