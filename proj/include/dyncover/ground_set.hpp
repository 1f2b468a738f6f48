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

// The static ground set: a dense range of element ids with strictly positive
// rational costs.  Dynamic element populations (the tree instantiations) keep
// their own growable cost tables and do not go through this type.

#ifndef DYNCOVER_GROUND_SET_HPP_
#define DYNCOVER_GROUND_SET_HPP_

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "dyncover/element_set.hpp"
#include "dyncover/rational.hpp"

namespace dyncover {

class GroundSet {
 public:
  // Unit costs for every element.
  explicit GroundSet(std::size_t n) : costs_(n, Rat(1)) {}

  explicit GroundSet(std::vector<Rat> costs) : costs_(std::move(costs)) {
    for (const Rat& c : costs_) {
      if (c <= 0) throw std::invalid_argument("element cost must be positive");
    }
  }

  std::size_t size() const { return costs_.size(); }
  const Rat& cost(ElementId id) const { return costs_.at(id); }
  const std::vector<Rat>& costs() const { return costs_; }

  Rat cost_of(const ElementSet& s) const {
    Rat total = 0;
    for (ElementId id = s.find_first(); id != ElementSet::npos;
         id = s.find_next(id)) {
      total += costs_.at(id);
    }
    return total;
  }

  Rat max_cost() const {
    Rat best = costs_.at(0);
    for (const Rat& c : costs_) {
      if (c > best) best = c;
    }
    return best;
  }

  Rat min_cost() const {
    Rat best = costs_.at(0);
    for (const Rat& c : costs_) {
      if (c < best) best = c;
    }
    return best;
  }

 private:
  std::vector<Rat> costs_;
};

}  // namespace dyncover

#endif  // DYNCOVER_GROUND_SET_HPP_
