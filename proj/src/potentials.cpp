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

// Potential evaluation, per-event bounds, and construction-time shape checks.

#include "dyncover/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace dyncover {

namespace {

constexpr double kE = 2.718281828459045235;

// Relative slack for the construction-time grid checks; these verify exact
// algebraic identities so only float roundoff needs absorbing.
constexpr double kGridTolerance = 1e-9;

double power_law_h(double x, double delta) {
  if (x <= 0.0) return 0.0;
  return std::pow(x, 1.0 - delta) / (1.0 - delta);
}

// Multiplicative grid of `count` points spanning [lo, hi].
std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> out;
  if (lo >= hi) {
    out.push_back(lo);
    return out;
  }
  const double step = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) out.push_back(lo * std::exp(i * step));
  return out;
}

}  // namespace

std::string potential_name(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::kTsallis:
      return "tsallis";
    case PotentialKind::kPowerLawH:
      return "powerlaw_h";
    case PotentialKind::kSqrt:
      return "sqrt";
    case PotentialKind::kShannon:
      return "shannon";
  }
  throw std::logic_error("unknown potential kind");
}

std::string audit_event_name(AuditEventKind kind) {
  switch (kind) {
    case AuditEventKind::kInsert:
      return "insert";
    case AuditEventKind::kDelete:
      return "delete";
    case AuditEventKind::kSwap:
      return "swap";
    case AuditEventKind::kGammaMove:
      return "gamma_move";
    case AuditEventKind::kCleanup:
      return "cleanup";
  }
  throw std::logic_error("unknown audit event kind");
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Construction and validation
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

PotentialAuditor::PotentialAuditor(PotentialKind kind,
                                   const PotentialParams& params)
    : kind_(kind), params_(params) {
  if (!(params_.gamma > 0.0) || !std::isfinite(params_.gamma) ||
      !(params_.fmin > 0.0) || !std::isfinite(params_.fmax) ||
      !(params_.fmax > 0.0) || !(params_.cmin > 0.0) ||
      !(params_.cmax > 0.0) || !std::isfinite(params_.cmax)) {
    throw std::invalid_argument("potential: parameters must be positive");
  }
  if (params_.fmin > params_.fmax) {
    throw std::invalid_argument("potential: fmin exceeds fmax");
  }
  if (params_.cmin > params_.cmax) {
    throw std::invalid_argument("potential: cmin exceeds cmax");
  }
  switch (kind_) {
    case PotentialKind::kTsallis:
      if (params_.gamma <= kE) {
        throw std::invalid_argument(
            "tsallis potential requires a jump factor above e");
      }
      alpha_ = 1.0 / std::log(params_.gamma);
      break;
    case PotentialKind::kPowerLawH: {
      if (params_.cmax <= params_.cmin) {
        throw std::invalid_argument(
            "power-law potential requires a cost spread above 1");
      }
      if (params_.power_delta != 0.0) {
        if (!(params_.power_delta > 0.0 && params_.power_delta < 1.0)) {
          throw std::invalid_argument(
              "power-law potential: exponent override must lie in (0, 1)");
        }
        delta_ = params_.power_delta;
      } else {
        delta_ = 1.0 / (std::log(params_.cmax / params_.cmin) + 1.0);
      }
      eps_gamma_ = std::pow(params_.gamma, delta_) * (1.0 - delta_) - 1.0;
      if (eps_gamma_ <= 0.0) {
        throw std::invalid_argument(
            "power-law potential: per-move decrease is not positive; "
            "increase the jump factor or the cost spread");
      }
      break;
    }
    case PotentialKind::kSqrt:
      if (params_.gamma <= 4.0) {
        throw std::invalid_argument(
            "sqrt potential requires a jump factor above 4");
      }
      break;
    case PotentialKind::kShannon:
      if (params_.gamma <= kE) {
        throw std::invalid_argument(
            "shannon potential requires a jump factor above e");
      }
      break;
  }
  validate();
}

void PotentialAuditor::validate() const {
  if (kind_ != PotentialKind::kPowerLawH) return;
  // Numeric grid check of the shape properties the event bounds rest on:
  //   (i)  h is monotone and concave,
  //   (ii) h(0) = 0,
  //   (iii) x * h'(x/gamma) >= (1 + eps) * h(x),
  //   (iv) y * h(x/y) is nondecreasing in y.
  // For the power law, (iii) holds with equality, so the check doubles as a
  // consistency test of the derived eps value.
  const double d = delta_;
  if (power_law_h(0.0, d) != 0.0) {
    throw std::logic_error("power-law h: h(0) is not 0");
  }
  const std::vector<double> xs =
      log_grid(params_.fmin / params_.cmax, params_.fmax / params_.cmin, 17);
  const std::vector<double> ys = log_grid(params_.cmin, params_.cmax, 9);
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    const double a = xs[k];
    const double b = xs[k + 1];
    const double ha = power_law_h(a, d);
    const double hb = power_law_h(b, d);
    if (hb < ha * (1.0 - kGridTolerance)) {
      throw std::logic_error("power-law h: not monotone on the grid");
    }
    const double mid = power_law_h(0.5 * (a + b), d);
    if (mid < 0.5 * (ha + hb) * (1.0 - kGridTolerance)) {
      throw std::logic_error("power-law h: not concave on the grid");
    }
  }
  for (double x : xs) {
    // h'(z) = z^(-delta), so the left side is x * (x/gamma)^(-delta).
    const double lhs = x * std::pow(x / params_.gamma, -d);
    const double rhs = (1.0 + eps_gamma_) * power_law_h(x, d);
    if (lhs < rhs * (1.0 - kGridTolerance)) {
      throw std::logic_error(
          "power-law h: derivative growth property failed on the grid");
    }
    for (std::size_t k = 0; k + 1 < ys.size(); ++k) {
      const double lo = ys[k] * power_law_h(x / ys[k], d);
      const double hi = ys[k + 1] * power_law_h(x / ys[k + 1], d);
      if (hi < lo * (1.0 - kGridTolerance)) {
        throw std::logic_error(
            "power-law h: cost-rescaling property failed on the grid");
      }
    }
  }
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Evaluation
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

bool PotentialAuditor::compatible(PotentialKind kind, MffMode mode) {
  switch (kind) {
    case PotentialKind::kTsallis:
      return mode == MffMode::kUnitCost;
    case PotentialKind::kPowerLawH:
    case PotentialKind::kShannon:
      return mode == MffMode::kCostRatio;
    case PotentialKind::kSqrt:
      return mode == MffMode::kMutualAffinity;
  }
  return false;
}

double PotentialAuditor::evaluate(const EngineSnapshot& snapshot) const {
  if (!compatible(kind_, snapshot.mode)) {
    throw std::invalid_argument(
        "potential is incompatible with the snapshot's value mode");
  }
  if (snapshot.cost.size() != snapshot.mff.size()) {
    throw std::invalid_argument("snapshot cost/value vectors disagree");
  }
  double phi = 0.0;
  switch (kind_) {
    case PotentialKind::kTsallis:
      for (double v : snapshot.mff) {
        if (v > 0.0) phi += std::pow(v, alpha_);
      }
      break;
    case PotentialKind::kPowerLawH:
      for (std::size_t i = 0; i < snapshot.mff.size(); ++i) {
        if (snapshot.mff[i] > 0.0) {
          phi += snapshot.cost[i] * power_law_h(snapshot.mff[i], delta_);
        }
      }
      break;
    case PotentialKind::kSqrt:
      for (std::size_t i = 0; i < snapshot.mff.size(); ++i) {
        if (snapshot.mff[i] > 0.0) {
          phi += snapshot.cost[i] * std::sqrt(snapshot.mff[i]);
        }
      }
      break;
    case PotentialKind::kShannon: {
      if (snapshot.raw.size() != snapshot.mff.size()) {
        throw std::invalid_argument(
            "shannon potential needs raw marginals in the snapshot");
      }
      // Rescale so every cost is at least 1 and every coverage at most 1/e;
      // each term is then nonnegative.
      for (std::size_t i = 0; i < snapshot.mff.size(); ++i) {
        const double k = snapshot.raw[i] / (kE * params_.fmax);
        if (k <= 0.0) continue;
        const double c = snapshot.cost[i] / params_.cmin;
        phi += k * std::log(c / k);
      }
      break;
    }
  }
  return phi;
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Event bounds
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

double PotentialAuditor::insert_bound(double gt_value) const {
  const PotentialParams& p = params_;
  switch (kind_) {
    case PotentialKind::kTsallis:
      return gt_value * std::pow(p.fmin, alpha_ - 1.0);
    case PotentialKind::kPowerLawH:
      return gt_value / p.fmin * p.cmax * power_law_h(p.fmin / p.cmax, delta_);
    case PotentialKind::kSqrt:
      return gt_value / std::sqrt(p.fmin);
    case PotentialKind::kShannon:
      return gt_value / (kE * p.fmax) *
             std::log(kE * (p.cmax / p.cmin) * (p.fmax / p.fmin));
  }
  throw std::logic_error("unknown potential kind");
}

double PotentialAuditor::move_decrease() const {
  const PotentialParams& p = params_;
  switch (kind_) {
    case PotentialKind::kTsallis:
      return (p.gamma / (kE * std::log(p.gamma)) - 1.0) *
             std::pow(p.fmin, alpha_);
    case PotentialKind::kPowerLawH:
      return eps_gamma_ * p.cmin * power_law_h(p.fmin / p.cmin, delta_);
    case PotentialKind::kSqrt:
      return (std::sqrt(p.gamma) / 2.0 - 1.0) * std::sqrt(p.fmin);
    case PotentialKind::kShannon:
      return p.fmin / (kE * p.fmax) * std::log(p.gamma / kE);
  }
  throw std::logic_error("unknown potential kind");
}

double PotentialAuditor::max_gamma_moves(double sum_gt) const {
  return insert_bound(sum_gt) / move_decrease();
}

double PotentialAuditor::upfront_recourse_bound(double sum_gt) const {
  return 2.0 * max_gamma_moves(sum_gt);
}

// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
// Audits
// ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

namespace {

// Checks that declared extremes dominate a snapshot: costs inside
// [cmin, cmax] and positive raw marginals inside [fmin, fmax].  Falls back
// to mode-derived raw values when the snapshot does not carry them.
bool extremes_dominate(const PotentialParams& p, const EngineSnapshot& s) {
  constexpr double kSlack = 1.0 + 1e-12;
  for (std::size_t i = 0; i < s.cost.size(); ++i) {
    if (s.cost[i] * kSlack < p.cmin || s.cost[i] > p.cmax * kSlack) {
      return false;
    }
    double raw = 0.0;
    if (s.raw.size() == s.mff.size()) {
      raw = s.raw[i];
    } else if (s.mode == MffMode::kUnitCost) {
      raw = s.mff[i];
    } else if (s.mode == MffMode::kCostRatio) {
      raw = s.mff[i] * s.cost[i];
    } else {
      continue;  // affinity values do not determine the raw marginal
    }
    if (raw > 0.0 &&
        (raw * kSlack < p.fmin || raw > p.fmax * kSlack)) {
      return false;
    }
  }
  return true;
}

}  // namespace

AuditRecord PotentialAuditor::audit_event(const EngineSnapshot& before,
                                          const EngineSnapshot& after,
                                          AuditEventKind event,
                                          double gt_value) const {
  AuditRecord rec;
  rec.potential = kind_;
  rec.event = event;
  rec.phi_before = evaluate(before);
  rec.phi_after = evaluate(after);
  switch (event) {
    case AuditEventKind::kInsert:
      rec.bound = insert_bound(gt_value);
      break;
    case AuditEventKind::kDelete:
    case AuditEventKind::kSwap:
    case AuditEventKind::kCleanup:
      rec.bound = 0.0;
      break;
    case AuditEventKind::kGammaMove:
      rec.bound = -move_decrease();
      break;
  }
  const double scale = std::max(
      {1.0, std::fabs(rec.phi_before), std::fabs(rec.phi_after)});
  rec.pass =
      rec.phi_after - rec.phi_before <= rec.bound + kAuditTolerance * scale;
  rec.scaling_ok =
      extremes_dominate(params_, before) && extremes_dominate(params_, after);
  return rec;
}

bool BudgetLedger::respected(double per_move_decrease) const {
  const double spent = static_cast<double>(gamma_moves) * per_move_decrease;
  return spent <=
         insertion_budget + kAuditTolerance * std::max(1.0, insertion_budget);
}

}  // namespace dyncover
