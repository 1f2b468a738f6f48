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

// Best-of-both routing: functions are bucketed by how many elements they
// depend on (in powers of two), each bucket runs its own randomized junta
// cover, everything else goes to one permutation-based general runner, and
// the maintained solution is the collapsed union of the children's
// solutions.  Every event touches exactly one child, so global recourse is
// bounded by the sum of the children's recourse.

#ifndef DYNCOVER_COMBINER_HPP_
#define DYNCOVER_COMBINER_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "dyncover/dynamic_cover.hpp"
#include "dyncover/element_set.hpp"
#include "dyncover/rational.hpp"
#include "dyncover/rjunta.hpp"
#include "dyncover/submodular.hpp"

namespace dyncover {

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Configuration and per-event record
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

struct CombinerConfig {
  // Declared bounds fixing the bucket count: the number of junta buckets is
  // max(1, ceil(log2 log2 (fmax/fmin))).  Functions depending on at least
  // 2^buckets elements, and functions that are not explicitly junta-typed,
  // go to the general child.
  Rat fmin = 1;
  Rat fmax = 1;
  // Base seed; each bucket derives its own stream from it.
  std::uint64_t seed = 0;
  // Settings for the general child (its fmin/fmax are overridden by the
  // declared bounds above so all children agree on them).
  RunConfig general;
};

// What one routed event did.
struct RouteRecord {
  std::int64_t seq = 0;
  FunctionId id = 0;
  EventKind kind = EventKind::kInsert;
  int bucket = -1;  // destination: >= 0 is a junta bucket, -1 the general
  std::size_t child_recourse = 0;  // solution change inside the child
  std::size_t union_recourse = 0;  // change of the collapsed union
  ElementSet solution;             // collapsed union after the event
  Rat solution_cost;
  bool feasible = false;  // union covers every live function (exact)
};

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Router
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

class BucketRouter {
 public:
  BucketRouter(CombinerConfig config, std::vector<Rat> costs);

  // Forwards the event to exactly one child and refreshes the union.
  const RouteRecord& route(const Event& ev);

  // How many elements the function depends on; routing treats non-junta
  // kinds as unbounded.
  static std::size_t arity_of(const SubmodularFunction& fn);

  // Destination for a function: bucket index in [0, bucket_count), or -1
  // for the general child.  Arity 0 and 1 share bucket 0; arity k >= 2 goes
  // to bucket floor(log2 k) while that is a real bucket.
  int destination(const SubmodularFunction& fn) const;

  std::size_t bucket_count() const { return buckets_.size(); }
  const JuntaCoverState& bucket(std::size_t level) const {
    return *buckets_.at(level);
  }
  const DynamicCoverRunner& general() const { return *general_; }
  std::uint64_t general_event_count() const { return general_events_; }

  const ElementSet& solution() const { return union_; }
  Rat solution_cost() const;

  // Sum of all live functions (for feasibility scans and optimum oracles).
  FunctionPtr live_sum() const { return live_.as_sum(); }
  std::size_t live_count() const { return live_.size(); }

  const std::vector<RouteRecord>& records() const { return records_; }
  std::uint64_t total_union_recourse() const { return union_recourse_; }
  std::uint64_t total_child_recourse() const { return child_recourse_; }

 private:
  // Recomputes the collapsed union and fills the record's union fields.
  void refresh_union(RouteRecord& rec);

  CombinerConfig config_;
  std::vector<Rat> costs_;
  std::vector<std::unique_ptr<JuntaCoverState>> buckets_;
  std::unique_ptr<DynamicCoverRunner> general_;
  std::map<FunctionId, int> assignment_;  // live id -> destination
  ActiveSet live_;
  ElementSet union_;
  std::vector<RouteRecord> records_;
  std::uint64_t general_events_ = 0;
  std::uint64_t union_recourse_ = 0;
  std::uint64_t child_recourse_ = 0;
};

}  // namespace dyncover

#endif  // DYNCOVER_COMBINER_HPP_
