// Copyright 2026 The minimax-agg Authors.
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

#include "minimax_agg/losses.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "minimax_agg/errors.h"
#include "minimax_agg/numeric.h"

namespace minimax_agg {
namespace {

constexpr double kBisectionTol = 1e-12;
constexpr int kBisectionMaxIters = 200;
constexpr double kSecondDerivativeStep = 1e-5;
constexpr double kConditionCTolerance = -1e-6;

void check_prediction(double g, const char* where) {
  if (!(g >= -1.0 && g <= 1.0)) {
    std::ostringstream msg;
    msg << where << ": prediction " << g << " outside [-1, 1]";
    throw DomainError(msg.str());
  }
}

void check_label(double z, const char* where) {
  if (!(z >= -1.0 && z <= 1.0)) {
    std::ostringstream msg;
    msg << where << ": label " << z << " outside [-1, 1]";
    throw DomainError(msg.str());
  }
}

// Coefficient times loss, with 0 * inf taken as 0.
double weighted(double coefficient, double value) {
  return coefficient == 0.0 ? 0.0 : coefficient * value;
}

}  // namespace

std::string LossSpec::canonical_name() const {
  if (!parameter) return name;
  std::ostringstream out;
  out.precision(17);
  out << name << ':' << *parameter;
  return out.str();
}

double partial_loss(const LossSpec& loss, LabelSign label, double g) {
  check_prediction(g, "partial_loss");
  return label == LabelSign::kPlus ? loss.partial_plus(g)
                                   : loss.partial_minus(g);
}

namespace generic {

double score(const LossSpec& loss, double g) {
  check_prediction(g, "score");
  if (g == -1.0) return loss.gamma_lo;
  if (g == 1.0) return loss.gamma_hi;
  return loss.partial_minus(g) - loss.partial_plus(g);
}

double partial_sum(const LossSpec& loss, double g) {
  check_prediction(g, "partial_sum");
  return loss.partial_plus(g) + loss.partial_minus(g);
}

double score_inverse(const LossSpec& loss, double m) {
  if (std::isnan(m)) throw DomainError("score_inverse: margin is NaN");
  if (m <= loss.gamma_lo) return -1.0;
  if (m >= loss.gamma_hi) return 1.0;
  // Invariant: Gamma(lo) < m <= Gamma(hi). The endpoint values are known,
  // so Gamma is only ever evaluated strictly inside (-1, 1).
  double lo = -1.0;
  double hi = 1.0;
  for (int it = 0; it < kBisectionMaxIters && hi - lo > kBisectionTol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (loss.partial_minus(mid) - loss.partial_plus(mid) >= m) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double potential_well(const LossSpec& loss, double m) {
  if (std::isnan(m)) throw DomainError("potential_well: margin is NaN");
  if (m <= loss.gamma_lo) return -m + 2.0 * loss.partial_minus(-1.0);
  if (m >= loss.gamma_hi) return m + 2.0 * loss.partial_plus(1.0);
  const double g = generic::score_inverse(loss, m);
  // l+ + l- = 2 l+ + Gamma = 2 l- - Gamma at Gamma(g) = m. Using the partial
  // loss on the far side of the singular endpoint keeps this accurate for
  // losses that blow up at g = +-1.
  return m >= 0.0 ? m + 2.0 * loss.partial_plus(g)
                  : -m + 2.0 * loss.partial_minus(g);
}

double potential_well_slope(const LossSpec& loss, double m) {
  if (std::isnan(m)) throw DomainError("potential_well_slope: margin is NaN");
  if (m < loss.gamma_lo) return -1.0;
  if (m > loss.gamma_hi) return 1.0;
  const double g = generic::score_inverse(loss, m);
  const double dm = loss.dpartial_minus(g);
  const double dp = loss.dpartial_plus(g);
  const bool dm_finite = std::isfinite(dm);
  const bool dp_finite = std::isfinite(dp);
  if (dm_finite && dp_finite && dm - dp > 0.0) {
    return std::clamp((dm + dp) / (dm - dp), -1.0, 1.0);
  }
  if (!dm_finite && dp_finite) return 1.0;
  if (dm_finite && !dp_finite) return -1.0;
  // Both derivatives infinite or both zero: fall back to a difference
  // quotient of Psi taken on the interior side.
  constexpr double h = 1e-7;
  double slope;
  if (m - h <= loss.gamma_lo) {
    slope = (generic::potential_well(loss, m + h) - generic::potential_well(loss, m)) / h;
  } else if (m + h >= loss.gamma_hi) {
    slope = (generic::potential_well(loss, m) - generic::potential_well(loss, m - h)) / h;
  } else {
    slope = (generic::potential_well(loss, m + h) - generic::potential_well(loss, m - h)) /
            (2.0 * h);
  }
  return std::clamp(slope, -1.0, 1.0);
}

}  // namespace generic

double score(const LossSpec& loss, double g) {
  check_prediction(g, "score");
  if (loss.closed_score) return loss.closed_score(g);
  return generic::score(loss, g);
}

double score_inverse(const LossSpec& loss, double m) {
  if (std::isnan(m)) throw DomainError("score_inverse: margin is NaN");
  if (loss.closed_predict) return loss.closed_predict(m);
  return generic::score_inverse(loss, m);
}

double potential_well(const LossSpec& loss, double m) {
  if (std::isnan(m)) throw DomainError("potential_well: margin is NaN");
  if (loss.closed_psi) return loss.closed_psi(m);
  return generic::potential_well(loss, m);
}

double potential_well_slope(const LossSpec& loss, double m) {
  if (std::isnan(m)) throw DomainError("potential_well_slope: margin is NaN");
  if (loss.closed_psi_slope) return loss.closed_psi_slope(m);
  return generic::potential_well_slope(loss, m);
}

double predict_one(const LossSpec& loss, double m) {
  return score_inverse(loss, m);
}

double pointwise_loss(const LossSpec& loss, double z, double g) {
  check_label(z, "pointwise_loss");
  check_prediction(g, "pointwise_loss");
  const double plus = 0.5 * (1.0 + z);
  const double minus = 0.5 * (1.0 - z);
  double total = 0.0;
  if (plus != 0.0) total += weighted(plus, loss.partial_plus(g));
  if (minus != 0.0) total += weighted(minus, loss.partial_minus(g));
  return total;
}

double expected_loss(const LossSpec& loss, std::span<const double> z,
                     std::span<const double> g) {
  if (z.size() != g.size()) {
    throw DimensionError("expected_loss: label and prediction lengths differ");
  }
  if (z.empty()) throw DimensionError("expected_loss: empty test set");
  std::vector<double> terms(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    terms[j] = pointwise_loss(loss, z[j], g[j]);
  }
  return pairwise_sum(terms) / static_cast<double>(z.size());
}

ConvexityReport convexity_condition_check(const LossSpec& loss,
                                          std::size_t grid_size) {
  if (grid_size < 3) {
    throw DomainError("convexity_condition_check: grid_size must be >= 3");
  }
  const double h = kSecondDerivativeStep;
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= grid_size; ++k) {
    const double x = -1.0 + 2.0 * static_cast<double>(k) /
                                static_cast<double>(grid_size + 1);
    const double dm = loss.dpartial_minus(x);
    const double dp = loss.dpartial_plus(x);
    const double d2m =
        (loss.dpartial_minus(x + h) - loss.dpartial_minus(x - h)) / (2.0 * h);
    const double d2p =
        (loss.dpartial_plus(x + h) - loss.dpartial_plus(x - h)) / (2.0 * h);
    worst = std::min(worst, dm * d2p - d2m * dp);
  }
  return ConvexityReport{worst >= kConditionCTolerance, worst};
}

}  // namespace minimax_agg
