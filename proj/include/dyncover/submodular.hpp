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

// Monotone submodular set functions over a fixed ground set, with exact
// rational values.  Functions are immutable once constructed; the full-set
// value and the support (elements with a positive singleton value) are
// computed eagerly.  Structural verification (submodularity and the
// third-derivative sign condition) walks an explicit value table and is
// therefore capped at small supports.

#ifndef DYNCOVER_SUBMODULAR_HPP_
#define DYNCOVER_SUBMODULAR_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "dyncover/element_set.hpp"
#include "dyncover/ground_set.hpp"
#include "dyncover/rational.hpp"

namespace dyncover {

enum class FunctionKind {
  kCoverage,
  kWeightedCoverage,
  kGraphicMatroidRank,
  kJunta,
  kSum,
  kContraction,
};

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Base interface
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

class SubmodularFunction {
 public:
  virtual ~SubmodularFunction() = default;

  std::size_t ground_size() const { return ground_size_; }
  FunctionKind kind() const { return kind_; }

  // Value over the full ground set, cached at construction.
  const Rat& total() const { return total_; }

  // Elements whose singleton value is positive.  For a monotone submodular
  // function no other element can ever have a positive marginal, so every
  // search may restrict itself to this set.
  const ElementSet& support() const { return support_; }

  // True when every achievable value is an integer (enables fast paths).
  bool integer_valued() const { return integer_valued_; }

  // Elements that can influence the value at all, independent of whether the
  // function is actually monotone or submodular.  Defaults to support(),
  // which is exact for the structurally monotone families; table-backed
  // functions widen this to their declared variables so that verification
  // cannot miss interactions between zero-singleton elements.
  virtual ElementSet relevant_elements() const { return support_; }

  // f(s).  The bitset must be exactly ground_size() wide.
  Rat value(const ElementSet& s) const;

  // f(u | s) = f(s + u) - f(s); zero when u is already in s.
  Rat marginal(ElementId u, const ElementSet& s) const;

  // f(a | s) = f(s | a) - f(s).
  Rat marginal_set(const ElementSet& a, const ElementSet& s) const;

 protected:
  SubmodularFunction(std::size_t ground_size, FunctionKind kind,
                     bool integer_valued)
      : ground_size_(ground_size),
        kind_(kind),
        integer_valued_(integer_valued),
        support_(ground_size) {}

  // Concrete constructors call this last.  Checks f(empty) == 0, caches the
  // full-set value, and scans singletons for the support.
  void finalize();

  virtual Rat eval(const ElementSet& s) const = 0;

 private:
  std::size_t ground_size_;
  FunctionKind kind_;
  bool integer_valued_;
  Rat total_;
  ElementSet support_;
};

using FunctionPtr = std::shared_ptr<const SubmodularFunction>;

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Concrete families
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

// Weighted coverage: element e covers a fixed set of items, f(S) is the total
// weight of items covered by S.  Unit weights give plain coverage.
class CoverageFunction : public SubmodularFunction {
 public:
  // `covers[e]` lists the item ids covered by element e; item ids are dense
  // in [0, num_items).  Empty `item_weights` means unit weights.
  CoverageFunction(std::size_t ground_size, std::size_t num_items,
                   std::vector<std::vector<std::size_t>> covers,
                   std::vector<Rat> item_weights = {});

  // A modular function as single-item coverage: element i alone covers item i
  // with weight `weights[i]`.
  static std::shared_ptr<CoverageFunction> modular(std::vector<Rat> weights);

  std::size_t num_items() const { return weights_.size(); }
  const std::vector<std::size_t>& items_of(ElementId e) const {
    return covers_list_.at(e);
  }
  const std::vector<Rat>& item_weights() const { return weights_; }

 protected:
  Rat eval(const ElementSet& s) const override;

 private:
  std::vector<std::vector<std::size_t>> covers_list_;
  std::vector<boost::dynamic_bitset<>> covers_;  // element -> item bitset
  std::vector<Rat> weights_;
  bool unit_weights_;
};

// Rank of an edge multiset in the cycle matroid of a fixed graph: the number
// of edges in a maximum spanning forest of the chosen edges.
class GraphicMatroidRank : public SubmodularFunction {
 public:
  GraphicMatroidRank(std::size_t num_vertices,
                     std::vector<std::pair<std::size_t, std::size_t>> edges);

  std::size_t num_vertices() const { return num_vertices_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const {
    return edges_;
  }

 protected:
  Rat eval(const ElementSet& s) const override;

 private:
  std::size_t num_vertices_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
};

// A function that depends on at most a few named elements, given by an
// explicit table over subsets of those variables.
class JuntaFunction : public SubmodularFunction {
 public:
  // `variables` must be strictly ascending; `table` has 2^|variables| entries
  // indexed by the subset mask whose bit k stands for variables[k], and
  // table[0] must be 0.
  JuntaFunction(std::size_t ground_size, std::vector<ElementId> variables,
                std::vector<Rat> table);

  const std::vector<ElementId>& variables() const { return variables_; }
  const std::vector<Rat>& table() const { return table_; }

  ElementSet relevant_elements() const override;

 protected:
  Rat eval(const ElementSet& s) const override;

 private:
  std::vector<ElementId> variables_;
  std::vector<Rat> table_;
};

// Sum of submodular functions over the same ground set.  An empty sum is the
// zero function.
class SumFunction : public SubmodularFunction {
 public:
  SumFunction(std::size_t ground_size, std::vector<FunctionPtr> parts);

  const std::vector<FunctionPtr>& parts() const { return parts_; }

  ElementSet relevant_elements() const override;

 protected:
  Rat eval(const ElementSet& s) const override;

 private:
  std::vector<FunctionPtr> parts_;
};

// Contraction of a base function by a fixed set: f_C(S) = f(S + C) - f(C).
class ContractionFunction : public SubmodularFunction {
 public:
  ContractionFunction(FunctionPtr base, ElementSet contracted);

  ElementSet relevant_elements() const override;

 protected:
  Rat eval(const ElementSet& s) const override;

 private:
  FunctionPtr base_;
  ElementSet contracted_;
  Rat base_of_contracted_;
};

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Live function collection
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

using FunctionId = std::uint64_t;

// The set of currently live demand functions, keyed by id and remembering
// insertion order so the aggregate is deterministic.
class ActiveSet {
 public:
  explicit ActiveSet(std::size_t ground_size) : ground_size_(ground_size) {}

  std::size_t ground_size() const { return ground_size_; }
  std::size_t size() const { return live_.size(); }
  bool contains(FunctionId id) const { return live_.count(id) != 0; }
  const std::vector<FunctionId>& insertion_order() const { return order_; }

  FunctionPtr at(FunctionId id) const;

  // Throws std::invalid_argument on duplicate id or ground-size mismatch.
  void insert(FunctionId id, FunctionPtr fn);

  // Removes and returns the function; throws std::invalid_argument if absent.
  FunctionPtr erase(FunctionId id);

  // The aggregate objective: sum of live functions in insertion order.
  FunctionPtr as_sum() const;

 private:
  std::size_t ground_size_;
  std::map<FunctionId, FunctionPtr> live_;
  std::vector<FunctionId> order_;
};

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Operations
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

// I_f(a; b | c) = f(a|c) + f(b|c) - f(a+b|c): the value the two sets cover
// jointly beyond what c already covers.  Nonnegative for submodular f.
Rat mutual_coverage(const SubmodularFunction& f, const ElementSet& a,
                    const ElementSet& b, const ElementSet& c);

struct ValueBounds {
  Rat fmax;  // largest singleton value
  Rat fmin;  // smallest positive singleton value (an upper bound on the true
             // minimum positive marginal, which is configuration-supplied)
};

// Scans singletons.  Throws std::runtime_error("degenerate function") when no
// element has a positive value.
ValueBounds bounds_of(const SubmodularFunction& f);

// True iff f is normalized, monotone, and submodular.  Walks a full value
// table over the relevant elements; throws std::runtime_error("verification
// cap exceeded") when there are more than `cap` of them.
bool verify_submodular(const SubmodularFunction& f, std::size_t cap = 12);

// True iff every third derivative of f is nonnegative, i.e. conditioning on
// more context never increases mutual coverage.  Same cap behaviour as
// verify_submodular.
bool verify_3increasing(const SubmodularFunction& f, std::size_t cap = 12);

}  // namespace dyncover

#endif  // DYNCOVER_SUBMODULAR_HPP_
