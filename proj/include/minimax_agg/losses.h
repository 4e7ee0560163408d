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

#ifndef MINIMAX_AGG_LOSSES_H_
#define MINIMAX_AGG_LOSSES_H_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace minimax_agg {

enum class LabelSign : int { kMinus = -1, kPlus = 1 };

using ScalarFunction = std::function<double(double)>;

// Partial losses tabulated on a grid of [-1, 1]; interpolated with a
// monotone piecewise-cubic Hermite scheme.
struct LossTable {
  std::string name;
  std::vector<double> grid;
  std::vector<double> partial_minus;
  std::vector<double> partial_plus;
};

// A binary-classification loss given by its partial losses l-(g) and l+(g),
// the losses of predicting g in [-1, 1] when the label is -1 or +1.
//
// The score function is Gamma(g) = l-(g) - l+(g); gamma_lo and gamma_hi are
// its values at g = -1 and g = +1 and may be infinite. The closed_* members
// are optional closed forms; when empty, the numeric path built from the
// partial losses alone is used.
struct LossSpec {
  std::string name;
  std::optional<double> parameter;  // c for the cost-weighted loss

  ScalarFunction partial_minus;
  ScalarFunction partial_plus;
  ScalarFunction dpartial_minus;
  ScalarFunction dpartial_plus;
  double gamma_lo = 0.0;
  double gamma_hi = 0.0;

  ScalarFunction closed_score;
  ScalarFunction closed_partial_sum;  // l+(g) + l-(g)
  ScalarFunction closed_psi;
  ScalarFunction closed_psi_slope;
  ScalarFunction closed_predict;

  // Psi(m) = Psi(-m) and g(-m) = -g(m).
  bool symmetric = false;

  std::optional<LossTable> table;

  // "cw:0.25" for the cost-weighted loss, the plain name otherwise.
  std::string canonical_name() const;
  bool has_closed_forms() const {
    return static_cast<bool>(closed_psi) && static_cast<bool>(closed_predict);
  }
};

// Loss of predicting g under the given true label. Throws DomainError for g
// outside [-1, 1]; may return +inf at the endpoints of unbounded losses.
double partial_loss(const LossSpec& loss, LabelSign label, double g);

// Gamma(g); returns gamma_lo / gamma_hi at the endpoints.
double score(const LossSpec& loss, double g);

// Pseudoinverse inf{g in [-1, 1] : Gamma(g) >= m}, clamped to [-1, 1].
double score_inverse(const LossSpec& loss, double m);

// Psi(m): linear tails -m + 2 l-(-1) and m + 2 l+(1) outside
// [gamma_lo, gamma_hi], l+(g) + l-(g) at g = Gamma^-1(m) inside.
double potential_well(const LossSpec& loss, double m);

// A subgradient of Psi. At the knots gamma_lo / gamma_hi the value of the
// interior branch is returned.
double potential_well_slope(const LossSpec& loss, double m);

// The minimax optimal prediction for an example with margin m.
double predict_one(const LossSpec& loss, double m);

// l(z, g) = (1 + z)/2 l+(g) + (1 - z)/2 l-(g) for a randomized label z.
double pointwise_loss(const LossSpec& loss, double z, double g);

// Mean of pointwise_loss over a test set.
double expected_loss(const LossSpec& loss, std::span<const double> z,
                     std::span<const double> g);

struct ConvexityReport {
  bool condition_c_holds = false;
  // Minimum over the grid of l-'(x) l+''(x) - l-''(x) l+'(x).
  double worst_margin = 0.0;
};

// Checks l-' l+'' >= l-'' l+' (up to -1e-6) on grid_size interior points of
// (-1, 1). Second derivatives are central differences of the supplied first
// derivatives. Under monotone partial losses this is equivalent to
// convexity of Psi.
ConvexityReport convexity_condition_check(const LossSpec& loss,
                                          std::size_t grid_size);

// The numeric path, which uses only the partial losses and their first
// derivatives. Closed forms are cross-checked against these.
namespace generic {
double score(const LossSpec& loss, double g);
double partial_sum(const LossSpec& loss, double g);
double score_inverse(const LossSpec& loss, double m);
double potential_well(const LossSpec& loss, double m);
double potential_well_slope(const LossSpec& loss, double m);
}  // namespace generic

LossSpec make_zero_one_loss();
LossSpec make_log_loss();
LossSpec make_square_loss();
LossSpec make_cost_weighted_loss(double c);
LossSpec make_exponential_loss();
LossSpec make_logistic_loss();
LossSpec make_hellinger_loss();
LossSpec make_adaboost_loss();
// l-(g) = 1 + g, l+(g) = 1 - g: twice the 0-1 loss.
LossSpec make_absolute_loss();
LossSpec make_hinge_loss();

// Validates the table (grid from -1 to 1, at least four strictly increasing
// points, l+ nonincreasing, l- nondecreasing) and builds the loss.
LossSpec make_tabulated_loss(LossTable table);

// Named losses. "cw:<c>" selects the cost-weighted loss with parameter c;
// bare "cw" means c = 0.5.
class LossRegistry {
 public:
  static const LossRegistry& builtin();

  // The eight built-in losses, in listing order.
  const std::vector<std::string>& names() const { return names_; }
  // (alias, target description) pairs.
  const std::vector<std::pair<std::string, std::string>>& aliases() const {
    return aliases_;
  }
  bool contains(std::string_view name) const;
  // Throws UnknownLossError listing the registry when the name is unknown.
  LossSpec resolve(std::string_view name) const;
  // One LossSpec per built-in name and alias.
  std::vector<LossSpec> entries() const;
  std::string listing() const;

 private:
  LossRegistry();
  std::vector<std::string> names_;
  std::vector<std::pair<std::string, std::string>> aliases_;
};

}  // namespace minimax_agg

#endif  // MINIMAX_AGG_LOSSES_H_
