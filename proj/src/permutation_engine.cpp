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

#include "dyncover/permutation_engine.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace dyncover {

namespace {

constexpr std::uint64_t kDefaultMoveCap = 100000;

std::uint64_t initial_move_cap() {
  if (const char* env = std::getenv("DYNCOVER_MOVE_CAP")) {
    char* end = nullptr;
    const unsigned long long parsed = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && parsed > 0) return parsed;
  }
  return kDefaultMoveCap;
}

}  // namespace

PermutationEngine::PermutationEngine(MffMode mode, Rat gamma,
                                     std::vector<Rat> costs, FunctionPtr fn)
    : mode_(mode),
      gamma_(std::move(gamma)),
      costs_(std::move(costs)),
      move_cap_(initial_move_cap()) {
  if (gamma_ <= 0) throw std::invalid_argument("engine: gamma must be positive");
  for (const Rat& c : costs_) {
    if (c <= 0) throw std::invalid_argument("engine: costs must be positive");
  }
  const std::size_t n = costs_.size();
  pos_.resize(n);
  pi_.resize(n);
  for (ElementId id = 0; id < n; ++id) {
    pi_[id] = id;
    pos_[id] = id;
  }
  psi_ = pi_;
  std::stable_sort(psi_.begin(), psi_.end(), [this](ElementId a, ElementId b) {
    if (costs_[a] != costs_[b]) return costs_[a] < costs_[b];
    return a < b;
  });
  set_function(fn ? std::move(fn)
                  : std::make_shared<SumFunction>(n, std::vector<FunctionPtr>{}));
}

std::size_t PermutationEngine::position_of(ElementId id) const {
  if (!is_live(id)) throw std::invalid_argument("engine: element not live");
  return pos_[id];
}

void PermutationEngine::require_fresh() const {
  if (!fn_) {
    throw std::logic_error(
        "engine: objective is stale; install one with set_function");
  }
}

Rat PermutationEngine::min_live_cost() const {
  if (psi_.empty()) throw std::logic_error("engine: no live elements");
  return costs_[psi_.front()];
}

Rat PermutationEngine::raw_marginal_at(std::size_t pos) const {
  require_fresh();
  if (pos >= pi_.size()) throw std::out_of_range("engine: bad position");
  if (pos == 0) return prefix_value_[0];
  return prefix_value_[pos] - prefix_value_[pos - 1];
}

ElementSet PermutationEngine::solution() const {
  require_fresh();
  ElementSet out(universe_size());
  for (std::size_t i = 0; i < pi_.size(); ++i) {
    if (mff_[i] > 0) out.set(pi_[i]);
  }
  return out;
}

Rat PermutationEngine::solution_cost() const {
  require_fresh();
  Rat total = 0;
  for (std::size_t i = 0; i < pi_.size(); ++i) {
    if (mff_[i] > 0) total += costs_[pi_[i]];
  }
  return total;
}

EngineSnapshot PermutationEngine::snapshot() const {
  require_fresh();
  EngineSnapshot snap;
  snap.mode = mode_;
  snap.mff.reserve(pi_.size());
  snap.cost.reserve(pi_.size());
  snap.raw.reserve(pi_.size());
  Rat prev = 0;
  for (std::size_t i = 0; i < pi_.size(); ++i) {
    snap.mff.push_back(to_double(mff_[i]));
    snap.cost.push_back(to_double(costs_[pi_[i]]));
    snap.raw.push_back(to_double(prefix_value_[i] - prev));
    prev = prefix_value_[i];
  }
  return snap;
}

ElementSet PermutationEngine::prefix_set(std::size_t count) const {
  ElementSet s(universe_size());
  for (std::size_t i = 0; i < count; ++i) s.set(pi_[i]);
  return s;
}

void PermutationEngine::set_function(FunctionPtr fn) {
  if (!fn) throw std::invalid_argument("engine: null objective");
  if (fn->ground_size() != universe_size()) {
    throw std::invalid_argument("engine: objective width mismatch");
  }
  fn_ = std::move(fn);
  mff_.assign(pi_.size(), Rat(0));
  prefix_value_.assign(pi_.size(), Rat(0));
  if (!pi_.empty()) recompute_range(0, pi_.size() - 1);
}

// The value an element contributes at a position, given the set placed
// before it.  `raw_marginal` is f(id | prefix), which the caller already has.
Rat PermutationEngine::mff_of(ElementId id, const ElementSet& prefix,
                              Rat raw_marginal) const {
  switch (mode_) {
    case MffMode::kUnitCost:
      return raw_marginal;
    case MffMode::kCostRatio:
      return raw_marginal / costs_[id];
    case MffMode::kMutualAffinity:
      if (raw_marginal == 0) return Rat(0);  // every overlap term is zero
      return affinity_value(id, prefix);
  }
  throw std::logic_error("engine: unknown mode");
}

// Sum over the cost-ascending order psi of the pairwise overlap
//   I(a; psi_j | pi-prefix of a + psi-prefix of psi_j)
// scaled by 1/(c(a) c(psi_j)).  Conditioning sets only grow along the scan,
// so once `a` itself is absorbed every later term is zero.
Rat PermutationEngine::affinity_value(ElementId a,
                                      const ElementSet& pi_prefix) const {
  ElementSet context = pi_prefix;
  Rat f_context = fn_->value(context);
  Rat total = 0;
  ElementSet with_a = context;
  with_a.set(a);
  for (ElementId b : psi_) {
    if (context.test(a)) break;
    if (context.test(b)) continue;
    const Rat value_a = fn_->value(with_a);
    ElementSet with_b = context;
    with_b.set(b);
    const Rat value_b = fn_->value(with_b);
    with_a.set(b);
    const Rat value_ab = fn_->value(with_a);
    const Rat overlap = value_a + value_b - value_ab - f_context;
    if (overlap != 0) total += overlap / (costs_[a] * costs_[b]);
    context = std::move(with_b);
    f_context = value_b;
    with_a = context;
    with_a.set(a);
  }
  return total;
}

void PermutationEngine::recompute_range(std::size_t first, std::size_t last) {
  ElementSet prefix = prefix_set(first);
  Rat prev_value = first == 0 ? Rat(0) : prefix_value_[first - 1];
  for (std::size_t i = first; i <= last; ++i) {
    const ElementId id = pi_[i];
    ElementSet next = prefix;
    next.set(id);
    const Rat value = fn_->value(next);
    const Rat raw = value - prev_value;
    mff_[i] = mff_of(id, prefix, raw);
    prefix_value_[i] = value;
    prefix = std::move(next);
    prev_value = prefix_value_[i];
  }
}

bool PermutationEngine::try_swap_at(std::size_t pos) {
  if (pos == 0 || pos >= pi_.size()) return false;
  if (!(mff_[pos] > mff_[pos - 1])) return false;
  std::swap(pi_[pos - 1], pi_[pos]);
  pos_[pi_[pos - 1]] = pos - 1;
  pos_[pi_[pos]] = pos;
  recompute_range(pos - 1, pos);
  return true;
}

StabilizeStats PermutationEngine::swap_pass(const MoveObserver& observer,
                                            std::uint64_t* ops) {
  StabilizeStats stats;
  std::size_t i = 1;
  while (i < pi_.size()) {
    if (try_swap_at(i)) {
      ++stats.swaps;
      if (++*ops > move_cap_) {
        throw std::runtime_error("non-termination suspected");
      }
      if (observer) observer(EngineOp{EngineOpKind::kSwap, i, {}});
      if (i > 1) --i;  // the riser may keep rising
    } else {
      ++i;
    }
  }
  return stats;
}

Rat PermutationEngine::value_if_moved(std::size_t from_pos,
                                      std::size_t to_pos) const {
  require_fresh();
  if (from_pos >= pi_.size() || to_pos > from_pos) {
    throw std::out_of_range("engine: bad positions");
  }
  const ElementId mover = pi_[from_pos];
  const ElementSet prefix = prefix_set(to_pos);
  const Rat before = to_pos == 0 ? Rat(0) : prefix_value_[to_pos - 1];
  ElementSet with_mover = prefix;
  with_mover.set(mover);
  return mff_of(mover, prefix, fn_->value(with_mover) - before);
}

std::optional<GammaMove> PermutationEngine::find_gamma_move() const {
  require_fresh();
  const std::size_t m = pi_.size();
  if (m < 2) return std::nullopt;
  const Rat cmin = min_live_cost();
  std::vector<Rat> jumped_max(m);  // over positions [p, q) for the current q
  for (std::size_t q = m - 1; q >= 1; --q) {
    const ElementId mover = pi_[q];
    jumped_max[q - 1] = mff_[q - 1];
    for (std::size_t p = q - 1; p-- > 0;) {
      jumped_max[p] = std::max(jumped_max[p + 1], mff_[p]);
    }
    ElementSet prefix(universe_size());
    Rat prefix_value = 0;
    for (std::size_t p = 0; p < q; ++p) {
      const Rat threshold = gamma_ * jumped_max[p];
      ElementSet with_mover = prefix;
      with_mover.set(mover);
      const Rat raw = fn_->value(with_mover) - prefix_value;
      if (raw > 0) {
        bool legal = false;
        Rat new_mff;
        switch (mode_) {
          case MffMode::kUnitCost:
            new_mff = raw;
            legal = new_mff >= threshold;
            break;
          case MffMode::kCostRatio:
            new_mff = raw / costs_[mover];
            legal = new_mff >= threshold;
            break;
          case MffMode::kMutualAffinity: {
            // Cheap upper bound from the overlap row sum before paying for
            // the full row.
            const Rat bound = raw / (costs_[mover] * cmin);
            if (bound >= threshold) {
              new_mff = affinity_value(mover, prefix);
              legal = new_mff > 0 && new_mff >= threshold;
            }
            break;
          }
        }
        if (legal) {
          return GammaMove{mover, q, p, new_mff};
        }
      }
      prefix.set(pi_[p]);
      prefix_value = prefix_value_[p];
    }
  }
  return std::nullopt;
}

void PermutationEngine::apply_gamma_move(const GammaMove& move,
                                         const MoveObserver& observer) {
  require_fresh();
  if (move.from_pos >= pi_.size() || move.to_pos >= move.from_pos ||
      pi_[move.from_pos] != move.element) {
    throw std::invalid_argument("engine: stale jump move");
  }
  pi_.erase(pi_.begin() + static_cast<std::ptrdiff_t>(move.from_pos));
  pi_.insert(pi_.begin() + static_cast<std::ptrdiff_t>(move.to_pos),
             move.element);
  for (std::size_t i = move.to_pos; i <= move.from_pos; ++i) pos_[pi_[i]] = i;
  recompute_range(move.to_pos, move.from_pos);
  if (observer) observer(EngineOp{EngineOpKind::kGammaMove, 0, move});
}

std::optional<EngineOp> PermutationEngine::step_once(
    const MoveObserver& observer) {
  require_fresh();
  // Leftmost improving swap first: this reproduces swap_pass exactly, since
  // after any swap the only newly improvable pairs sit adjacent to it and a
  // fresh left-to-right scan reaches the same pair the pass would recheck.
  for (std::size_t i = 1; i < pi_.size(); ++i) {
    if (try_swap_at(i)) {
      const EngineOp op{EngineOpKind::kSwap, i, {}};
      if (observer) observer(op);
      return op;
    }
  }
  if (auto move = find_gamma_move()) {
    apply_gamma_move(*move, observer);
    return EngineOp{EngineOpKind::kGammaMove, 0, *move};
  }
  return std::nullopt;
}

StabilizeStats PermutationEngine::stabilize(const MoveObserver& observer) {
  require_fresh();
  StabilizeStats total;
  std::uint64_t ops = 0;
  total = swap_pass(observer, &ops);
  // Jump moves run on a swap-stable (sorted) order; each one may unsort it,
  // so re-run the swap pass before looking again.
  while (auto move = find_gamma_move()) {
    apply_gamma_move(*move, observer);
    ++total.gamma_moves;
    if (++ops > move_cap_) {
      throw std::runtime_error("non-termination suspected");
    }
    const StabilizeStats pass = swap_pass(observer, &ops);
    total.swaps += pass.swaps;
  }
  return total;
}

void PermutationEngine::add_element(ElementId id, Rat cost) {
  add_element_at(id, std::move(cost), pi_.size());
}

void PermutationEngine::add_element_at(ElementId id, Rat cost,
                                       std::size_t at_pos) {
  if (cost <= 0) throw std::invalid_argument("engine: costs must be positive");
  if (is_live(id)) throw std::invalid_argument("engine: element already live");
  if (at_pos > pi_.size()) throw std::out_of_range("engine: bad position");
  if (id >= costs_.size()) {
    costs_.resize(id + 1, Rat(1));
    pos_.resize(id + 1, kNoPosition);
  }
  costs_[id] = std::move(cost);
  pi_.insert(pi_.begin() + static_cast<std::ptrdiff_t>(at_pos), id);
  for (std::size_t i = at_pos; i < pi_.size(); ++i) pos_[pi_[i]] = i;
  const auto psi_spot = std::find_if(
      psi_.begin(), psi_.end(), [this, id](ElementId other) {
        if (costs_[other] != costs_[id]) return costs_[id] < costs_[other];
        return id < other;
      });
  psi_.insert(psi_spot, id);
  // Values are stale until the caller installs a matching-width objective.
  fn_ = nullptr;
  mff_.assign(pi_.size(), Rat(0));
  prefix_value_.assign(pi_.size(), Rat(0));
}

void PermutationEngine::remove_element(ElementId id) {
  const std::size_t at = position_of(id);
  pi_.erase(pi_.begin() + static_cast<std::ptrdiff_t>(at));
  pos_[id] = kNoPosition;
  for (std::size_t i = at; i < pi_.size(); ++i) pos_[pi_[i]] = i;
  psi_.erase(std::find(psi_.begin(), psi_.end(), id));
  fn_ = nullptr;
  mff_.assign(pi_.size(), Rat(0));
  prefix_value_.assign(pi_.size(), Rat(0));
}

void PermutationEngine::move_element(ElementId id, std::size_t to_pos) {
  if (!fn_) throw std::logic_error("engine: objective is stale");
  const std::size_t from = position_of(id);
  if (to_pos >= pi_.size()) throw std::out_of_range("engine: bad position");
  if (from == to_pos) return;
  pi_.erase(pi_.begin() + static_cast<std::ptrdiff_t>(from));
  pi_.insert(pi_.begin() + static_cast<std::ptrdiff_t>(to_pos), id);
  const std::size_t lo = std::min(from, to_pos);
  const std::size_t hi = std::max(from, to_pos);
  for (std::size_t i = lo; i <= hi; ++i) pos_[pi_[i]] = i;
  recompute_range(lo, hi);
}

}  // namespace dyncover
