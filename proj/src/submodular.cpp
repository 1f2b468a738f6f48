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

#include "dyncover/submodular.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dyncover {

namespace {

void check_width(const ElementSet& s, std::size_t n, const char* what) {
  if (s.size() != n) {
    throw std::invalid_argument(std::string(what) +
                                ": element set width mismatch");
  }
}

}  // namespace

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Base interface
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

void SubmodularFunction::finalize() {
  ElementSet probe(ground_size_);
  if (eval(probe) != 0) {
    throw std::invalid_argument("function not normalized: f(empty) must be 0");
  }
  total_ = eval(full_set(ground_size_));
  for (ElementId u = 0; u < ground_size_; ++u) {
    probe.set(u);
    if (eval(probe) > 0) support_.set(u);
    probe.reset(u);
  }
}

Rat SubmodularFunction::value(const ElementSet& s) const {
  check_width(s, ground_size_, "value");
  return eval(s);
}

Rat SubmodularFunction::marginal(ElementId u, const ElementSet& s) const {
  check_width(s, ground_size_, "marginal");
  if (u >= ground_size_) throw std::invalid_argument("marginal: bad element");
  if (s.test(u)) return Rat(0);
  ElementSet t = s;
  t.set(u);
  return eval(t) - eval(s);
}

Rat SubmodularFunction::marginal_set(const ElementSet& a,
                                     const ElementSet& s) const {
  check_width(a, ground_size_, "marginal_set");
  check_width(s, ground_size_, "marginal_set");
  return eval(a | s) - eval(s);
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Coverage
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

namespace {

bool all_integers(const std::vector<Rat>& values) {
  return std::all_of(values.begin(), values.end(), [](const Rat& v) {
    return boost::multiprecision::denominator(v) == 1;
  });
}

}  // namespace

CoverageFunction::CoverageFunction(
    std::size_t ground_size, std::size_t num_items,
    std::vector<std::vector<std::size_t>> covers,
    std::vector<Rat> item_weights)
    : SubmodularFunction(
          ground_size, item_weights.empty() ? FunctionKind::kCoverage
                                            : FunctionKind::kWeightedCoverage,
          item_weights.empty() || all_integers(item_weights)),
      covers_list_(std::move(covers)),
      weights_(std::move(item_weights)),
      unit_weights_(weights_.empty()) {
  if (covers_list_.size() != ground_size) {
    throw std::invalid_argument("coverage: one item list per element");
  }
  if (unit_weights_) {
    weights_.assign(num_items, Rat(1));
  } else if (weights_.size() != num_items) {
    throw std::invalid_argument("coverage: one weight per item");
  }
  for (const Rat& w : weights_) {
    if (w < 0) throw std::invalid_argument("coverage: negative item weight");
  }
  covers_.reserve(ground_size);
  for (const auto& items : covers_list_) {
    boost::dynamic_bitset<> bits(num_items);
    for (std::size_t item : items) {
      if (item >= num_items) {
        throw std::invalid_argument("coverage: item id out of range");
      }
      bits.set(item);
    }
    covers_.push_back(std::move(bits));
  }
  finalize();
}

std::shared_ptr<CoverageFunction> CoverageFunction::modular(
    std::vector<Rat> weights) {
  const std::size_t n = weights.size();
  std::vector<std::vector<std::size_t>> covers(n);
  for (std::size_t i = 0; i < n; ++i) covers[i] = {i};
  return std::make_shared<CoverageFunction>(n, n, std::move(covers),
                                            std::move(weights));
}

Rat CoverageFunction::eval(const ElementSet& s) const {
  boost::dynamic_bitset<> covered(weights_.size());
  for (ElementId e = s.find_first(); e != ElementSet::npos;
       e = s.find_next(e)) {
    covered |= covers_[e];
  }
  if (unit_weights_) return Rat(covered.count());
  Rat total = 0;
  for (std::size_t item = covered.find_first();
       item != boost::dynamic_bitset<>::npos; item = covered.find_next(item)) {
    total += weights_[item];
  }
  return total;
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Graphic matroid rank
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

GraphicMatroidRank::GraphicMatroidRank(
    std::size_t num_vertices,
    std::vector<std::pair<std::size_t, std::size_t>> edges)
    : SubmodularFunction(edges.size(), FunctionKind::kGraphicMatroidRank,
                         /*integer_valued=*/true),
      num_vertices_(num_vertices),
      edges_(std::move(edges)) {
  for (const auto& [a, b] : edges_) {
    if (a >= num_vertices_ || b >= num_vertices_) {
      throw std::invalid_argument("matroid: edge endpoint out of range");
    }
  }
  finalize();
}

Rat GraphicMatroidRank::eval(const ElementSet& s) const {
  std::vector<std::size_t> parent(num_vertices_);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  const auto find = [&parent](std::size_t v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  std::size_t rank = 0;
  for (ElementId e = s.find_first(); e != ElementSet::npos;
       e = s.find_next(e)) {
    std::size_t ra = find(edges_[e].first);
    std::size_t rb = find(edges_[e].second);
    if (ra != rb) {
      parent[ra] = rb;
      ++rank;
    }
  }
  return Rat(rank);
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Junta
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

JuntaFunction::JuntaFunction(std::size_t ground_size,
                             std::vector<ElementId> variables,
                             std::vector<Rat> table)
    : SubmodularFunction(ground_size, FunctionKind::kJunta,
                         all_integers(table)),
      variables_(std::move(variables)),
      table_(std::move(table)) {
  if (variables_.size() > 20) {
    throw std::invalid_argument("junta: too many variables");
  }
  for (std::size_t k = 0; k < variables_.size(); ++k) {
    if (variables_[k] >= ground_size) {
      throw std::invalid_argument("junta: variable out of range");
    }
    if (k > 0 && variables_[k - 1] >= variables_[k]) {
      throw std::invalid_argument("junta: variables must be ascending");
    }
  }
  if (table_.size() != (std::size_t{1} << variables_.size())) {
    throw std::invalid_argument("junta: table size must be 2^#variables");
  }
  finalize();
}

ElementSet JuntaFunction::relevant_elements() const {
  return make_set(ground_size(), variables_);
}

Rat JuntaFunction::eval(const ElementSet& s) const {
  std::size_t mask = 0;
  for (std::size_t k = 0; k < variables_.size(); ++k) {
    if (s.test(variables_[k])) mask |= std::size_t{1} << k;
  }
  return table_[mask];
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Sum and contraction
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

SumFunction::SumFunction(std::size_t ground_size,
                         std::vector<FunctionPtr> parts)
    : SubmodularFunction(
          ground_size, FunctionKind::kSum,
          std::all_of(parts.begin(), parts.end(),
                      [](const FunctionPtr& p) { return p->integer_valued(); })),
      parts_(std::move(parts)) {
  for (const FunctionPtr& p : parts_) {
    if (!p || p->ground_size() != ground_size) {
      throw std::invalid_argument("sum: part ground size mismatch");
    }
  }
  finalize();
}

ElementSet SumFunction::relevant_elements() const {
  ElementSet out(ground_size());
  for (const FunctionPtr& p : parts_) out |= p->relevant_elements();
  return out;
}

Rat SumFunction::eval(const ElementSet& s) const {
  Rat total = 0;
  for (const FunctionPtr& p : parts_) total += p->value(s);
  return total;
}

ContractionFunction::ContractionFunction(FunctionPtr base,
                                         ElementSet contracted)
    : SubmodularFunction(base ? base->ground_size() : 0,
                         FunctionKind::kContraction,
                         base && base->integer_valued()),
      base_(std::move(base)),
      contracted_(std::move(contracted)) {
  if (!base_) throw std::invalid_argument("contraction: null base");
  check_width(contracted_, base_->ground_size(), "contraction");
  base_of_contracted_ = base_->value(contracted_);
  finalize();
}

ElementSet ContractionFunction::relevant_elements() const {
  return base_->relevant_elements() - contracted_;
}

Rat ContractionFunction::eval(const ElementSet& s) const {
  return base_->value(s | contracted_) - base_of_contracted_;
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Live function collection
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

FunctionPtr ActiveSet::at(FunctionId id) const {
  auto it = live_.find(id);
  if (it == live_.end()) {
    throw std::invalid_argument("active set: unknown function id");
  }
  return it->second;
}

void ActiveSet::insert(FunctionId id, FunctionPtr fn) {
  if (!fn) throw std::invalid_argument("active set: null function");
  if (fn->ground_size() != ground_size_) {
    throw std::invalid_argument("active set: ground size mismatch");
  }
  if (live_.count(id)) {
    throw std::invalid_argument("active set: duplicate function id");
  }
  live_.emplace(id, std::move(fn));
  order_.push_back(id);
}

FunctionPtr ActiveSet::erase(FunctionId id) {
  auto it = live_.find(id);
  if (it == live_.end()) {
    throw std::invalid_argument("active set: unknown function id");
  }
  FunctionPtr out = it->second;
  live_.erase(it);
  order_.erase(std::remove(order_.begin(), order_.end(), id), order_.end());
  return out;
}

FunctionPtr ActiveSet::as_sum() const {
  std::vector<FunctionPtr> parts;
  parts.reserve(order_.size());
  for (FunctionId id : order_) parts.push_back(live_.at(id));
  return std::make_shared<SumFunction>(ground_size_, std::move(parts));
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Operations
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

Rat mutual_coverage(const SubmodularFunction& f, const ElementSet& a,
                    const ElementSet& b, const ElementSet& c) {
  return f.value(a | c) + f.value(b | c) - f.value(a | b | c) - f.value(c);
}

ValueBounds bounds_of(const SubmodularFunction& f) {
  const ElementSet& sup = f.support();
  if (sup.none()) throw std::runtime_error("degenerate function");
  ElementSet probe(f.ground_size());
  ValueBounds out{Rat(0), Rat(0)};
  bool first = true;
  for (ElementId u = sup.find_first(); u != ElementSet::npos;
       u = sup.find_next(u)) {
    probe.set(u);
    Rat v = f.value(probe);
    probe.reset(u);
    if (first) {
      out.fmax = out.fmin = v;
      first = false;
    } else {
      if (v > out.fmax) out.fmax = v;
      if (v < out.fmin) out.fmin = v;
    }
  }
  return out;
}

namespace {

// Builds the full value table of f restricted to its support.  Mask bit k
// corresponds to the k-th support element in ascending id order.
std::vector<Rat> support_table(const SubmodularFunction& f,
                               const std::vector<ElementId>& sup) {
  const std::size_t k = sup.size();
  std::vector<Rat> table(std::size_t{1} << k);
  ElementSet s(f.ground_size());
  for (std::size_t mask = 0; mask < table.size(); ++mask) {
    s.reset();
    for (std::size_t bit = 0; bit < k; ++bit) {
      if (mask & (std::size_t{1} << bit)) s.set(sup[bit]);
    }
    table[mask] = f.value(s);
  }
  return table;
}

// Attempts an int64 copy of the table for fast comparisons.
bool to_int64_table(const std::vector<Rat>& table,
                    std::vector<long long>* out) {
  out->clear();
  out->reserve(table.size());
  for (const Rat& v : table) {
    if (boost::multiprecision::denominator(v) != 1) return false;
    const BigInt& num = boost::multiprecision::numerator(v);
    if (num > std::numeric_limits<long long>::max() / 8 ||
        num < std::numeric_limits<long long>::min() / 8) {
      return false;
    }
    out->push_back(num.convert_to<long long>());
  }
  return true;
}

// Normalized + monotone + diminishing returns, via the local pair condition
// t[m+u] + t[m+v] >= t[m+u+v] + t[m].
template <typename T>
bool submodular_table_ok(const std::vector<T>& t, std::size_t k) {
  if (t[0] != T(0)) return false;
  const std::size_t size = std::size_t{1} << k;
  for (std::size_t m = 0; m < size; ++m) {
    for (std::size_t u = 0; u < k; ++u) {
      const std::size_t bu = std::size_t{1} << u;
      if (m & bu) continue;
      if (t[m | bu] < t[m]) return false;  // monotone
      for (std::size_t v = u + 1; v < k; ++v) {
        const std::size_t bv = std::size_t{1} << v;
        if (m & bv) continue;
        if (t[m | bu] + t[m | bv] < t[m | bu | bv] + t[m]) return false;
      }
    }
  }
  return true;
}

// Third derivative sign: for every base set and distinct x, y, z the
// alternating cube sum must be nonnegative.
template <typename T>
bool third_derivative_table_ok(const std::vector<T>& t, std::size_t k) {
  const std::size_t size = std::size_t{1} << k;
  for (std::size_t m = 0; m < size; ++m) {
    for (std::size_t x = 0; x < k; ++x) {
      const std::size_t bx = std::size_t{1} << x;
      if (m & bx) continue;
      for (std::size_t y = x + 1; y < k; ++y) {
        const std::size_t by = std::size_t{1} << y;
        if (m & by) continue;
        for (std::size_t z = y + 1; z < k; ++z) {
          const std::size_t bz = std::size_t{1} << z;
          if (m & bz) continue;
          const T d3 = t[m | bx | by | bz] - t[m | bx | by] -
                       t[m | bx | bz] - t[m | by | bz] + t[m | bx] +
                       t[m | by] + t[m | bz] - t[m];
          if (d3 < T(0)) return false;
        }
      }
    }
  }
  return true;
}

std::vector<ElementId> capped_relevant(const SubmodularFunction& f,
                                       std::size_t cap) {
  std::vector<ElementId> sup = to_vector(f.relevant_elements());
  if (sup.size() > cap) throw std::runtime_error("verification cap exceeded");
  return sup;
}

}  // namespace

bool verify_submodular(const SubmodularFunction& f, std::size_t cap) {
  const std::vector<ElementId> sup = capped_relevant(f, cap);
  const std::vector<Rat> table = support_table(f, sup);
  std::vector<long long> fast;
  if (f.integer_valued() && to_int64_table(table, &fast)) {
    return submodular_table_ok(fast, sup.size());
  }
  return submodular_table_ok(table, sup.size());
}

bool verify_3increasing(const SubmodularFunction& f, std::size_t cap) {
  const std::vector<ElementId> sup = capped_relevant(f, cap);
  const std::vector<Rat> table = support_table(f, sup);
  std::vector<long long> fast;
  if (f.integer_valued() && to_int64_table(table, &fast)) {
    return third_derivative_table_ok(fast, sup.size());
  }
  return third_derivative_table_ok(table, sup.size());
}

}  // namespace dyncover
