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

// Arity-bucketed routing between per-bucket junta covers and one general
// permutation runner, with a collapsed-union global solution.

#include "dyncover/combiner.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace dyncover {

namespace {

// Number of junta buckets for declared bounds fmin, fmax: covers arities up
// to (roughly) log2(fmax/fmin) in power-of-two ranges, at least one bucket.
std::size_t bucket_count_for(const Rat& fmin, const Rat& fmax) {
  const double ratio = to_double(fmax / fmin);
  if (!(ratio > 1.0)) return 1;
  const double levels = std::log2(std::log2(ratio));
  if (!(levels > 1.0)) return 1;
  return static_cast<std::size_t>(std::ceil(levels));
}

}  // namespace

BucketRouter::BucketRouter(CombinerConfig config, std::vector<Rat> costs)
    : config_(std::move(config)),
      costs_(std::move(costs)),
      live_(costs_.size()),
      union_(costs_.size()) {
  if (config_.fmin <= 0 || config_.fmax < config_.fmin) {
    throw std::invalid_argument(
        "combiner: declared bounds need 0 < fmin <= fmax");
  }
  const std::size_t levels = bucket_count_for(config_.fmin, config_.fmax);
  buckets_.reserve(levels);
  for (std::size_t level = 0; level < levels; ++level) {
    buckets_.push_back(std::make_unique<JuntaCoverState>(
        costs_, split_seed(config_.seed, level), config_.fmin));
  }
  RunConfig general = config_.general;
  general.fmin = config_.fmin;
  general.fmax = config_.fmax;
  general_ = std::make_unique<DynamicCoverRunner>(general, costs_);
}

std::size_t BucketRouter::arity_of(const SubmodularFunction& fn) {
  return fn.support().count();
}

int BucketRouter::destination(const SubmodularFunction& fn) const {
  if (fn.kind() != FunctionKind::kJunta) return -1;
  const std::size_t arity = arity_of(fn);
  std::size_t level = 0;
  if (arity >= 2) {
    level = static_cast<std::size_t>(std::floor(
        std::log2(static_cast<double>(arity))));
  }
  if (level >= buckets_.size()) return -1;
  return static_cast<int>(level);
}

const RouteRecord& BucketRouter::route(const Event& ev) {
  RouteRecord rec;
  rec.seq = ev.seq;
  rec.id = ev.id;
  rec.kind = ev.kind;

  if (ev.kind == EventKind::kInsert) {
    if (!ev.fn) {
      throw std::invalid_argument("combiner: insert event needs a function");
    }
    rec.bucket = destination(*ev.fn);
    // Register with the live set first: it performs the id / ground-size
    // validation before any child state changes.
    live_.insert(ev.id, ev.fn);
    try {
      if (rec.bucket >= 0) {
        rec.child_recourse =
            buckets_[static_cast<std::size_t>(rec.bucket)]->on_arrival(ev.id,
                                                                       ev.fn);
      } else {
        rec.child_recourse = general_->step(ev).step_recourse;
        ++general_events_;
      }
    } catch (...) {
      live_.erase(ev.id);
      throw;
    }
    assignment_[ev.id] = rec.bucket;
  } else {
    auto it = assignment_.find(ev.id);
    if (it == assignment_.end()) {
      throw std::invalid_argument("combiner: delete of id " +
                                  std::to_string(ev.id) +
                                  " which is not live");
    }
    rec.bucket = it->second;
    if (rec.bucket >= 0) {
      rec.child_recourse =
          buckets_[static_cast<std::size_t>(rec.bucket)]->on_departure(ev.id);
    } else {
      rec.child_recourse = general_->step(ev).step_recourse;
      ++general_events_;
    }
    live_.erase(ev.id);
    assignment_.erase(it);
  }

  child_recourse_ += rec.child_recourse;
  refresh_union(rec);
  records_.push_back(std::move(rec));
  return records_.back();
}

void BucketRouter::refresh_union(RouteRecord& rec) {
  ElementSet next(costs_.size());
  for (const auto& bucket : buckets_) next |= bucket->solution();
  next |= general_->engine().solution();

  rec.union_recourse = (next ^ union_).count();
  union_ = std::move(next);
  union_recourse_ += rec.union_recourse;

  rec.solution = union_;
  rec.solution_cost = solution_cost();
  const FunctionPtr sum = live_.as_sum();
  rec.feasible = sum->value(union_) == sum->total();
}

Rat BucketRouter::solution_cost() const {
  Rat cost = 0;
  for (ElementId u = union_.find_first(); u != ElementSet::npos;
       u = union_.find_next(u)) {
    cost += costs_[u];
  }
  return cost;
}

}  // namespace dyncover
