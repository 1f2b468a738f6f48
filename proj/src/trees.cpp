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

// Dynamic tree maintenance over an explicit metric: graphic-matroid rank
// objective on the complete live graph, cost-ratio ordering, helper-vertex
// cleanup interleaved with every local move.

#include "dyncover/trees.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dyncover {

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Metric instance
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

MetricInstance::MetricInstance(std::vector<std::vector<Rat>> distances)
    : d_(std::move(distances)) {
  const std::size_t n = d_.size();
  if (n < 2) {
    throw std::invalid_argument("metric: need at least two points");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (d_[i].size() != n) {
      throw std::invalid_argument("metric: distance matrix must be square");
    }
    if (d_[i][i] != 0) {
      throw std::invalid_argument("metric: diagonal must be zero");
    }
  }
  bool first = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (d_[i][j] != d_[j][i]) {
        throw std::invalid_argument("metric: matrix must be symmetric");
      }
      if (d_[i][j] <= 0) {
        throw std::invalid_argument(
            "metric: off-diagonal distances must be positive");
      }
      if (first || d_[i][j] < min_) min_ = d_[i][j];
      if (first || d_[i][j] > max_) max_ = d_[i][j];
      first = false;
    }
  }
  // Exact triangle check over every ordered triple.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (d_[i][k] > d_[i][j] + d_[j][k]) {
          throw std::invalid_argument(
              "metric: triangle inequality violated at points " +
              std::to_string(i) + ", " + std::to_string(j) + ", " +
              std::to_string(k));
        }
      }
    }
  }
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Runner construction
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

namespace {

// Pads `s` with zero bits up to `width` so sets from different universe
// sizes can be compared (the universe only ever grows).
ElementSet padded(ElementSet s, std::size_t width) {
  if (s.size() < width) s.resize(width);
  return s;
}

}  // namespace

SteinerTreeRunner::SteinerTreeRunner(MetricInstance metric, Options options)
    : metric_(std::move(metric)),
      options_(std::move(options)),
      engine_(MffMode::kCostRatio, options_.gamma, {}) {
  if (options_.gamma <= 1) {
    throw std::invalid_argument("tree runner: jump factor must exceed 1");
  }
  if (options_.audit) {
    // Raw marginals of rank functions are 0 or 1, so the value extremes are
    // both 1 and the cost extremes are the metric's.  Prefer the exponent
    // tied to the aspect ratio; fall back to the generic one; give up (and
    // skip auditing) when the spread is too small to fund a positive
    // per-move decrease.
    PotentialParams params;
    params.gamma = to_double(options_.gamma);
    params.fmin = 1.0;
    params.fmax = 1.0;
    params.cmin = to_double(metric_.min_distance());
    params.cmax = to_double(metric_.max_distance());
    const double aspect = to_double(metric_.aspect_ratio());
    params.power_delta = 1.0 / std::log(aspect + 1.0);
    try {
      auditor_.emplace(PotentialKind::kPowerLawH, params);
      exponent_ = TreeAuditExponent::kAspectVariant;
    } catch (const std::invalid_argument&) {
      params.power_delta = 0.0;
      try {
        auditor_.emplace(PotentialKind::kPowerLawH, params);
        exponent_ = TreeAuditExponent::kGeneric;
      } catch (const std::invalid_argument&) {
        exponent_ = TreeAuditExponent::kNone;
      }
    }
  }
  rebuild_function();
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Objective maintenance
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

ElementId SteinerTreeRunner::edge_between(std::size_t va,
                                          std::size_t vb) const {
  const VertexPair key{std::min(va, vb), std::max(va, vb)};
  const auto it = edge_of_.find(key);
  if (it == edge_of_.end()) {
    throw std::logic_error("tree runner: missing edge between live vertices");
  }
  return it->second;
}

void SteinerTreeRunner::rebuild_function() {
  // Dead edge ids stay in the universe forever; encoding them as self-loops
  // on vertex 0 keeps them rank-neutral no matter what set they appear in.
  std::vector<VertexPair> edges(engine_.universe_size(), VertexPair{0, 0});
  for (const auto& [pair, eid] : edge_of_) edges[eid] = pair;
  const std::size_t vertex_span = std::max<std::size_t>(vertices_.size(), 1);
  engine_.set_function(
      std::make_shared<GraphicMatroidRank>(vertex_span, std::move(edges)));
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Events
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

const TreeStepRecord& SteinerTreeRunner::arrive(std::size_t point) {
  if (point >= metric_.size()) {
    throw std::invalid_argument("tree runner: metric point index out of range");
  }
  if (live_point_.count(point) != 0) {
    throw std::invalid_argument(
        "tree runner: point is already live (its previous copy has not been "
        "cleaned up yet)");
  }

  TreeStepRecord rec;
  rec.seq = static_cast<std::int64_t>(records_.size()) + 1;
  rec.arrival = true;
  rec.point = point;
  const ElementSet tree_before = engine_.solution();
  const Rat total_before = objective_total();
  const EngineSnapshot before = engine_.snapshot();

  const std::size_t vid = vertices_.size();
  vertices_.push_back(VertexInfo{point, false, true});
  live_point_[point] = vid;
  for (std::size_t w = 0; w < vid; ++w) {
    if (!vertices_[w].live) continue;
    const ElementId eid = edge_endpoints_.size();
    edge_endpoints_.push_back(VertexPair{w, vid});
    edge_of_[VertexPair{w, vid}] = eid;
    engine_.add_element(eid, metric_.distance(vertices_[w].point, point));
  }
  rebuild_function();

  rec.gt = to_double(objective_total() - total_before);
  sum_gt_ += rec.gt;
  if (auditor_) ledger_.add_insertion(auditor_->insert_bound(rec.gt));
  audit_step(before, AuditEventKind::kInsert, rec.gt, &rec);

  settle(rec, /*initial_cleanup=*/false);
  finish_record(rec, tree_before);
  records_.push_back(std::move(rec));
  return records_.back();
}

void SteinerTreeRunner::demote_terminal(std::size_t point) {
  const auto it = live_point_.find(point);
  if (it == live_point_.end()) {
    throw std::invalid_argument("tree runner: departing point is not live");
  }
  if (vertices_[it->second].steiner) {
    throw std::invalid_argument(
        "tree runner: departing point is already a helper vertex");
  }
  // Demoting a terminal to a helper changes neither the objective nor the
  // order; the engine only reacts through the cleanup/search loop.
  vertices_[it->second].steiner = true;
}

const TreeStepRecord& SteinerTreeRunner::depart(std::size_t point) {
  demote_terminal(point);

  TreeStepRecord rec;
  rec.seq = static_cast<std::int64_t>(records_.size()) + 1;
  rec.arrival = false;
  rec.point = point;
  const ElementSet tree_before = engine_.solution();

  settle(rec, /*initial_cleanup=*/true);
  finish_record(rec, tree_before);
  records_.push_back(std::move(rec));
  return records_.back();
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Local search with interleaved cleanup
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

void SteinerTreeRunner::settle(TreeStepRecord& rec, bool initial_cleanup) {
  std::uint64_t ops = 0;
  const std::uint64_t cap = engine_.move_cap();
  const auto tick = [&ops, cap] {
    if (++ops > cap) {
      throw std::runtime_error("non-termination suspected");
    }
  };
  if (initial_cleanup) {
    while (clean_one(&rec)) tick();
  }
  while (true) {
    const EngineSnapshot before = engine_.snapshot();
    const std::optional<EngineOp> op = engine_.step_once();
    if (!op.has_value()) break;
    tick();
    if (op->kind == EngineOpKind::kSwap) {
      ++rec.swaps;
      ++total_swaps_;
      audit_step(before, AuditEventKind::kSwap, 0.0, &rec);
    } else {
      ++rec.gamma_moves;
      ++total_gamma_moves_;
      ledger_.add_gamma_moves(1);
      audit_step(before, AuditEventKind::kGammaMove, 0.0, &rec);
    }
    // Helper degrees may have dropped; collapse them before the next move so
    // the search never optimizes around a removable vertex.
    while (clean_one(&rec)) tick();
  }
}

std::map<std::size_t, std::vector<ElementId>>
SteinerTreeRunner::live_steiner_degrees() const {
  std::map<std::size_t, std::vector<ElementId>> degrees;
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if (vertices_[v].live && vertices_[v].steiner) degrees[v] = {};
  }
  if (degrees.empty()) return degrees;
  const ElementSet sol = engine_.solution();
  for (ElementId e = sol.find_first(); e != ElementSet::npos;
       e = sol.find_next(e)) {
    const VertexPair& ends = edge_endpoints_[e];
    const auto a = degrees.find(ends.first);
    if (a != degrees.end()) a->second.push_back(e);
    const auto b = degrees.find(ends.second);
    if (b != degrees.end()) b->second.push_back(e);
  }
  return degrees;
}

bool SteinerTreeRunner::clean_one(TreeStepRecord* rec) {
  const auto degrees = live_steiner_degrees();
  // Lowest-id degree-2 helper first (shortcut), then lowest-id degree-1,
  // then degree-0; ties and priorities are fixed so runs are reproducible.
  const auto pick = [&degrees](std::size_t want) {
    for (const auto& [vid, edges] : degrees) {
      if (edges.size() == want) return std::optional<std::size_t>(vid);
    }
    return std::optional<std::size_t>();
  };
  std::optional<std::size_t> chosen = pick(2);
  const bool shortcut = chosen.has_value();
  if (!chosen) chosen = pick(1);
  if (!chosen) chosen = pick(0);
  if (!chosen) return false;

  const std::size_t vid = *chosen;
  const EngineSnapshot before = engine_.snapshot();
  if (shortcut) {
    const std::vector<ElementId>& touching = degrees.at(vid);
    const ElementId e1 = touching[0];
    const ElementId e2 = touching[1];
    const std::size_t p1 = engine_.position_of(e1);
    const std::size_t p2 = engine_.position_of(e2);
    const ElementId earlier = p1 < p2 ? e1 : e2;
    const std::size_t earlier_pos = std::min(p1, p2);
    const auto other_end = [this, vid](ElementId e) {
      const VertexPair& ends = edge_endpoints_[e];
      return ends.first == vid ? ends.second : ends.first;
    };
    const std::size_t u1 = other_end(earlier);
    const std::size_t u2 = other_end(earlier == e1 ? e2 : e1);
    const ElementId bridge = edge_between(u1, u2);
    // Put the replacement edge exactly where the earlier removed edge sat
    // (taking its slot whether the replacement comes from before or after).
    const std::size_t target = engine_.position_of(bridge) < earlier_pos
                                   ? earlier_pos - 1
                                   : earlier_pos;
    engine_.move_element(bridge, target);
    if (rec != nullptr) ++rec->shortcuts;
  } else {
    if (rec != nullptr) ++rec->deletions;
  }
  remove_vertex(vid);
  ++total_cleanup_steps_;
  audit_step(before, AuditEventKind::kCleanup, 0.0, rec);
  return true;
}

void SteinerTreeRunner::remove_vertex(std::size_t vid) {
  std::vector<VertexPair> incident;
  for (std::size_t w = 0; w < vertices_.size(); ++w) {
    if (w == vid || !vertices_[w].live) continue;
    incident.push_back(VertexPair{std::min(w, vid), std::max(w, vid)});
  }
  for (const VertexPair& key : incident) {
    const auto it = edge_of_.find(key);
    if (it == edge_of_.end()) {
      throw std::logic_error("tree runner: missing edge between live vertices");
    }
    engine_.remove_element(it->second);
    edge_of_.erase(it);
  }
  vertices_[vid].live = false;
  live_point_.erase(vertices_[vid].point);
  rebuild_function();
}

std::size_t SteinerTreeRunner::clean_steiner() {
  std::size_t removed = 0;
  const std::uint64_t cap = engine_.move_cap();
  while (clean_one(nullptr)) {
    if (++removed > cap) throw std::runtime_error("non-termination suspected");
  }
  return removed;
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Auditing and bookkeeping
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

void SteinerTreeRunner::audit_step(const EngineSnapshot& before,
                                   AuditEventKind event, double gt,
                                   TreeStepRecord* rec) {
  if (!auditor_) return;
  const EngineSnapshot after = engine_.snapshot();
  const AuditRecord result = auditor_->audit_event(before, after, event, gt);
  if (rec != nullptr) {
    ++rec->audits;
    rec->phi = result.phi_after;
    if (!result.pass) ++rec->audit_failures;
  }
  if (!result.pass) ++audit_failures_;
}

void SteinerTreeRunner::finish_record(TreeStepRecord& rec,
                                      const ElementSet& tree_before) {
  const ElementSet tree_after = engine_.solution();
  rec.step_recourse =
      (padded(tree_before, tree_after.size()) ^ tree_after).count();
  cumulative_recourse_ += rec.step_recourse;
  rec.cumulative_recourse = cumulative_recourse_;
  rec.live_vertices = live_count();
  rec.terminal_count = terminal_count();
  rec.tree_cost = engine_.solution_cost();
  rec.tree_edges = tree_point_pairs();
  rec.spanning = spanning_now();
  if (auditor_) rec.phi = auditor_->evaluate(engine_.snapshot());
}

Rat SteinerTreeRunner::objective_total() const {
  // Rank of the complete live graph: one less than the live count, or zero.
  const std::size_t live = live_count();
  return live <= 1 ? Rat(0) : Rat(static_cast<long>(live - 1));
}

bool SteinerTreeRunner::spanning_now() const {
  const ElementSet sol = engine_.solution();
  const std::size_t live = live_count();
  if (live <= 1) return sol.none();
  if (sol.count() != live - 1) return false;
  // Acyclic (rank equals cardinality) and spanning (rank equals the total).
  ElementSet probe = sol;
  const Rat rank = rank_of(probe);
  return rank == Rat(static_cast<long>(sol.count())) &&
         rank == objective_total();
}

Rat SteinerTreeRunner::rank_of(const ElementSet& edges) const {
  std::vector<VertexPair> all(engine_.universe_size(), VertexPair{0, 0});
  for (const auto& [pair, eid] : edge_of_) all[eid] = pair;
  GraphicMatroidRank fn(std::max<std::size_t>(vertices_.size(), 1),
                        std::move(all));
  return fn.value(edges);
}

void SteinerTreeRunner::verify_tree() const {
  if (!spanning_now()) {
    throw std::logic_error(
        "tree runner: maintained edges do not form a spanning tree of the "
        "live vertices");
  }
}

std::vector<std::pair<std::size_t, std::size_t>>
SteinerTreeRunner::tree_point_pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const ElementSet sol = engine_.solution();
  for (ElementId e = sol.find_first(); e != ElementSet::npos;
       e = sol.find_next(e)) {
    const VertexPair& ends = edge_endpoints_[e];
    const std::size_t pa = vertices_[ends.first].point;
    const std::size_t pb = vertices_[ends.second].point;
    out.emplace_back(std::min(pa, pb), std::max(pa, pb));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t SteinerTreeRunner::live_count() const { return live_point_.size(); }

std::size_t SteinerTreeRunner::terminal_count() const {
  std::size_t n = 0;
  for (const auto& [point, vid] : live_point_) {
    if (!vertices_[vid].steiner) ++n;
  }
  return n;
}

std::size_t SteinerTreeRunner::steiner_count() const {
  return live_count() - terminal_count();
}

bool SteinerTreeRunner::point_live(std::size_t point) const {
  return live_point_.count(point) != 0;
}

double SteinerTreeRunner::move_budget() const {
  if (!auditor_) return std::numeric_limits<double>::infinity();
  return auditor_->max_gamma_moves(sum_gt_);
}

}  // namespace dyncover
