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

// Element subsets of the ground set, represented as dynamic bitsets.  Ids are
// dense indices into the ground set; set algebra comes straight from the
// bitset operators (|, &, -).

#ifndef DYNCOVER_ELEMENT_SET_HPP_
#define DYNCOVER_ELEMENT_SET_HPP_

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace dyncover {

using ElementId = std::size_t;
using ElementSet = boost::dynamic_bitset<>;

inline ElementSet empty_set(std::size_t universe) {
  return ElementSet(universe);
}

inline ElementSet full_set(std::size_t universe) {
  ElementSet s(universe);
  s.set();
  return s;
}

inline ElementSet make_set(std::size_t universe,
                           std::initializer_list<ElementId> ids) {
  ElementSet s(universe);
  for (ElementId id : ids) s.set(id);
  return s;
}

inline ElementSet make_set(std::size_t universe,
                           const std::vector<ElementId>& ids) {
  ElementSet s(universe);
  for (ElementId id : ids) s.set(id);
  return s;
}

inline std::vector<ElementId> to_vector(const ElementSet& s) {
  std::vector<ElementId> out;
  out.reserve(s.count());
  for (ElementId id = s.find_first(); id != ElementSet::npos;
       id = s.find_next(id)) {
    out.push_back(id);
  }
  return out;
}

// Widens `s` to `universe` bits if it is narrower (ids keep their positions).
inline ElementSet widened(const ElementSet& s, std::size_t universe) {
  if (s.size() >= universe) return s;
  ElementSet out = s;
  out.resize(universe);
  return out;
}

}  // namespace dyncover

#endif  // DYNCOVER_ELEMENT_SET_HPP_
