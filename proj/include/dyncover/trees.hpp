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

// Tree maintenance on metric points via the permutation engine: the
// objective is the graphic-matroid rank over the live vertices, the ground
// set is the complete graph on them, and the positive-value edges form the
// maintained tree.  Arrivals append the new vertex's edges at the tail of
// the order; departures mark the vertex as a helper ("Steiner") vertex,
// which is shortcut out once its tree degree drops to two and deleted at
// degree one, with the shortcut replacing the two edges at the earlier
// edge's position.  With arrivals only this maintains a spanning tree
// (the minimum-spanning-tree setting); with departures it maintains a
// Steiner tree over the remaining terminals.

#ifndef DYNCOVER_TREES_HPP_
#define DYNCOVER_TREES_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "dyncover/element_set.hpp"
#include "dyncover/permutation_engine.hpp"
#include "dyncover/potentials.hpp"
#include "dyncover/rational.hpp"
#include "dyncover/submodular.hpp"

namespace dyncover {

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Metric instance
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

// A finite metric given by an explicit rational distance matrix.  The
// constructor verifies symmetry, zero diagonal, positive off-diagonal
// entries, and the triangle inequality over all triples, all in exact
// arithmetic, and caches the distance extremes (the aspect ratio is their
// quotient).
class MetricInstance {
 public:
  explicit MetricInstance(std::vector<std::vector<Rat>> distances);

  std::size_t size() const { return d_.size(); }
  const Rat& distance(std::size_t a, std::size_t b) const {
    return d_.at(a).at(b);
  }
  const Rat& min_distance() const { return min_; }
  const Rat& max_distance() const { return max_; }
  Rat aspect_ratio() const { return max_ / min_; }

 private:
  std::vector<std::vector<Rat>> d_;
  Rat min_;
  Rat max_;
};

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Per-event record
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

struct TreeStepRecord {
  std::int64_t seq = 0;
  bool arrival = true;
  std::size_t point = 0;  // metric point index

  std::size_t live_vertices = 0;  // terminals plus retained helpers
  std::size_t terminal_count = 0;
  Rat tree_cost;
  bool spanning = false;  // edges form a tree over the live vertices
  // Tree edges as metric point pairs, for oracle comparisons.
  std::vector<std::pair<std::size_t, std::size_t>> tree_edges;

  double gt = 0.0;  // objective-total increase (1 per arrival after first)
  std::size_t step_recourse = 0;        // |tree before XOR tree after|
  std::size_t cumulative_recourse = 0;  // over the whole run
  std::size_t swaps = 0;
  std::size_t gamma_moves = 0;
  std::size_t shortcuts = 0;  // degree-2 helper replacements this event
  std::size_t deletions = 0;  // degree-<=1 helper removals this event

  double phi = 0.0;  // potential after the event (0 when not audited)
  std::size_t audits = 0;
  std::size_t audit_failures = 0;
};

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Runner
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

// Which power-law exponent the recourse audit ended up using.
enum class TreeAuditExponent {
  kAspectVariant,  // 1 / ln(aspect ratio + 1), the tree-specific choice
  kGeneric,        // 1 / (ln(aspect ratio) + 1), the general default
  kNone,           // no valid exponent (tiny aspect ratio): audits disabled
};

class SteinerTreeRunner {
 public:
  struct Options {
    Rat gamma = rat_e2();
    bool audit = true;  // try to attach the power-law recourse audit
  };

  explicit SteinerTreeRunner(MetricInstance metric)
      : SteinerTreeRunner(std::move(metric), Options{}) {}
  SteinerTreeRunner(MetricInstance metric, Options options);

  // A fresh vertex at the given metric point joins as a terminal; its edges
  // to every live vertex join at the tail of the order.  The point must not
  // be live (two live copies would sit at distance zero).
  const TreeStepRecord& arrive(std::size_t point);

  // The terminal at the given point becomes a helper vertex; helpers are
  // shortcut/deleted as their tree degree collapses.
  const TreeStepRecord& depart(std::size_t point);

  // The marking half of depart() without the search/cleanup loop: the live
  // terminal becomes a helper vertex and nothing else happens.  Useful for
  // exercising clean_steiner() on states with several helpers at once.
  void demote_terminal(std::size_t point);

  // Runs the helper cleanup loop by itself (normally interleaved after
  // every local move).  Returns the number of vertices removed.
  std::size_t clean_steiner();

  const MetricInstance& metric() const { return metric_; }
  const PermutationEngine& engine() const { return engine_; }
  const std::vector<TreeStepRecord>& records() const { return records_; }

  ElementSet tree() const { return engine_.solution(); }
  Rat tree_cost() const { return engine_.solution_cost(); }
  std::vector<std::pair<std::size_t, std::size_t>> tree_point_pairs() const;

  std::size_t live_count() const;
  std::size_t terminal_count() const;
  std::size_t steiner_count() const;
  bool point_live(std::size_t point) const;

  // Audit facts.
  TreeAuditExponent audit_exponent() const { return exponent_; }
  bool audited() const { return auditor_.has_value(); }
  const PotentialAuditor& auditor() const { return auditor_.value(); }
  const BudgetLedger& ledger() const { return ledger_; }
  double sum_gt() const { return sum_gt_; }
  std::uint64_t total_gamma_moves() const { return total_gamma_moves_; }
  std::uint64_t total_swaps() const { return total_swaps_; }
  std::uint64_t total_cleanup_steps() const { return total_cleanup_steps_; }
  std::size_t cumulative_recourse() const { return cumulative_recourse_; }
  std::size_t audit_failures() const { return audit_failures_; }
  // Closed-form move budget for the arrivals so far; the potential argument
  // caps total jump moves by it (checked in tests against the counters).
  double move_budget() const;

  // Throws std::logic_error unless the positive-value edges form a spanning
  // tree of the live vertices (or both are empty).
  void verify_tree() const;

 private:
  struct VertexInfo {
    std::size_t point = 0;
    bool steiner = false;
    bool live = false;
  };

  using VertexPair = std::pair<std::size_t, std::size_t>;  // ordered vids

  ElementId edge_between(std::size_t va, std::size_t vb) const;
  void rebuild_function();
  // One audited engine/cleanup episode shared by arrive and depart.
  void settle(TreeStepRecord& rec, bool initial_cleanup);
  // One cleanup step if any helper qualifies; true if something was removed.
  bool clean_one(TreeStepRecord* rec);
  void remove_vertex(std::size_t vid);
  void audit_step(const EngineSnapshot& before, AuditEventKind event,
                  double gt, TreeStepRecord* rec);
  std::map<std::size_t, std::vector<ElementId>> live_steiner_degrees() const;
  void finish_record(TreeStepRecord& rec, const ElementSet& tree_before);
  Rat objective_total() const;  // rank of the complete live graph
  bool spanning_now() const;
  Rat rank_of(const ElementSet& edges) const;

  MetricInstance metric_;
  Options options_;
  PermutationEngine engine_;
  std::optional<PotentialAuditor> auditor_;
  TreeAuditExponent exponent_ = TreeAuditExponent::kNone;
  BudgetLedger ledger_;

  std::vector<VertexInfo> vertices_;              // by vertex id, never reused
  std::map<std::size_t, std::size_t> live_point_;  // point -> live vertex id
  std::map<VertexPair, ElementId> edge_of_;        // live edges only
  std::vector<VertexPair> edge_endpoints_;         // by edge id, all ever made

  std::vector<TreeStepRecord> records_;
  double sum_gt_ = 0.0;
  std::uint64_t total_gamma_moves_ = 0;
  std::uint64_t total_swaps_ = 0;
  std::uint64_t total_cleanup_steps_ = 0;
  std::size_t cumulative_recourse_ = 0;
  std::size_t audit_failures_ = 0;
};

}  // namespace dyncover

#endif  // DYNCOVER_TREES_HPP_
