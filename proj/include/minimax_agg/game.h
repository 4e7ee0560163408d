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


#ifndef MINIMAX_AGG_GAME_H_
#define MINIMAX_AGG_GAME_H_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "minimax_agg/convex.h"
#include "minimax_agg/losses.h"
#include "minimax_agg/solve_report.h"

namespace minimax_agg {

// The p x n matrix of ensemble predictions, F[i][j] = h_i(x_j). Stored
// example-major so that x_j, one example's p predictions, is contiguous.
class EnsembleMatrix {
 public:
  EnsembleMatrix() = default;
  EnsembleMatrix(std::size_t classifiers, std::size_t examples);
  // rows[i][j] = h_i(x_j).
  static EnsembleMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t classifiers() const { return p_; }
  std::size_t examples() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[j * p_ + i];
  }
  double& at(std::size_t i, std::size_t j) { return data_[j * p_ + i]; }
  std::span<const double> example(std::size_t j) const {
    return {data_.data() + j * p_, p_};
  }
  std::span<double> example(std::size_t j) {
    return {data_.data() + j * p_, p_};
  }
  std::vector<double> classifier(std::size_t i) const;
  // Appends one example (a column of F).
  void push_example(std::span<const double> x);

  // Throws RangeError naming the first entry outside [-1, 1].
  void check_range() const;

 private:
  std::size_t p_ = 0;
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct PlainVariant {};
// Example weights r_j >= 0 on the test loss.
struct WeightedVariant {
  std::vector<double> r;
};
// Adversary constrained by ||F z / n - b||_inf <= epsilon.
struct UncertaintyVariant {
  double epsilon = 0.0;
};
// Constraints are loss bounds l(z, h_i) <= loss_bounds[i]. The problem holds
// the Gamma-transformed matrix and the matching b.
struct GeneralLossVariant {
  std::vector<double> loss_bounds;
};

using Variant = std::variant<PlainVariant, WeightedVariant, UncertaintyVariant,
                             GeneralLossVariant>;

// "plain", "weighted", "uncertainty" or "general".
std::string variant_name(const Variant& variant);

class EnsembleProblem {
 public:
  // Validates dimensions, r >= 0, epsilon >= 0 and, except for the
  // general-loss variant, entries of F in [-1, 1]. Logs a warning when b
  // leaves (0, 1]^p.
  EnsembleProblem(EnsembleMatrix matrix, std::vector<double> b,
                  Variant variant, LossSpec loss);

  static EnsembleProblem plain(EnsembleMatrix matrix, std::vector<double> b,
                               LossSpec loss);
  static EnsembleProblem weighted(EnsembleMatrix matrix, std::vector<double> b,
                                  std::vector<double> r, LossSpec loss);
  static EnsembleProblem uncertainty(EnsembleMatrix matrix,
                                     std::vector<double> b, double epsilon,
                                     LossSpec loss);
  // Transforms raw predictions and loss bounds into the equivalent plain
  // game; see transform_general_loss.
  static EnsembleProblem general_loss(const EnsembleMatrix& raw,
                                      std::vector<double> loss_bounds,
                                      LossSpec loss);

  const EnsembleMatrix& matrix() const { return matrix_; }
  const std::vector<double>& b() const { return b_; }
  const Variant& variant() const { return variant_; }
  const LossSpec& loss() const { return loss_; }
  std::size_t classifiers() const { return matrix_.classifiers(); }
  std::size_t examples() const { return matrix_.examples(); }
  // sigma may take either sign only in the uncertainty variant.
  bool sign_constrained() const;

  // Worker threads for the per-example sums. Results do not depend on it.
  int threads() const { return threads_; }
  void set_threads(int threads) { threads_ = threads < 1 ? 1 : threads; }

 private:
  EnsembleMatrix matrix_;
  std::vector<double> b_;
  Variant variant_;
  LossSpec loss_;
  int threads_ = 1;
};

// A separable term phi_j(margin) and its derivative.
struct TermValue {
  double value = 0.0;
  double slope = 0.0;
};
using ExampleTerm = std::function<TermValue(std::size_t j, double margin)>;

struct SlackEvaluation {
  double value = 0.0;
  std::vector<double> subgradient;  // empty unless requested
};

// -b^T sigma + (1/n) sum_j phi_j(x_j^T sigma) with its subgradient. Sums run
// over fixed blocks of examples and are reduced pairwise, so the result is
// bit-identical for any thread count.
SlackEvaluation evaluate_separable(const EnsembleMatrix& matrix,
                                   std::span<const double> b,
                                   std::span<const double> sigma,
                                   const ExampleTerm& term, bool want_gradient,
                                   int threads = 1);

// The per-example term of the problem's slack function: Psi(m), or
// r_j Psi(m / r_j) for the weighted variant (|m| when r_j = 0).
ExampleTerm slack_term(const EnsembleProblem& problem);

// The slack function of the problem's variant and a subgradient. For the
// uncertainty variant the subgradient of epsilon ||sigma||_1 uses
// sign(sigma_i), with 0 at sigma_i = 0.
SlackEvaluation evaluate(const EnsembleProblem& problem,
                         std::span<const double> sigma, bool want_gradient);
double slack(const EnsembleProblem& problem, std::span<const double> sigma);
std::vector<double> slack_subgradient(const EnsembleProblem& problem,
                                      std::span<const double> sigma);

// The slack function without the epsilon ||sigma||_1 term; what remains is
// the smooth-plus-Psi part handed to the minimizer.
SlackEvaluation evaluate_without_l1(const EnsembleProblem& problem,
                                    std::span<const double> sigma,
                                    bool want_gradient);

// Label-noise form -b^T sigma + (1/n) sum_j r_j Psi(x_j^T sigma), margins
// unscaled. Uses the problem's matrix, b and loss; its variant is ignored.
SlackEvaluation noise_slack(const EnsembleProblem& problem,
                            std::span<const double> r,
                            std::span<const double> sigma, bool want_gradient);

struct GeneralLossTransform {
  EnsembleMatrix matrix;  // Gamma(h_i(x_j))
  std::vector<double> b;  // mean (l+ + l-)(h_i) - 2 loss_bounds[i]
};

// Rewrites loss bounds l(z, h_i) <= eps_i as linear constraints
// (1/n) z^T Gamma(h_i) >= b_i. Throws DomainError naming the classifier and
// example when Gamma is infinite at a raw prediction.
GeneralLossTransform transform_general_loss(const EnsembleMatrix& raw,
                                            std::span<const double> loss_bounds,
                                            const LossSpec& loss);

struct PredictionVector {
  std::vector<double> g;
  std::vector<double> margins;
  // Set for weighted examples with r_j = 0; their margin is reported as 0.
  std::vector<bool> weightless;
};

PredictionVector predict(const EnsembleProblem& problem,
                         std::span<const double> sigma);

// max over z in [-1, 1]^n with F z / n >= b of (1/n) z^T a, evaluated as
// min over sigma >= 0 of -b^T sigma + (1/n) ||F^T sigma + a||_1. Throws
// InfeasibleError when the dual appears unbounded below.
double dual_box_lp(const EnsembleMatrix& matrix, std::span<const double> b,
                   std::span<const double> a, const ConvexMinimizer& minimizer,
                   int threads = 1);

// The adversary's best response max_z l(z, g) over the problem's constraint
// set, including example weights. Uncertainty constraints are stacked as
// F z / n >= b - eps and -F z / n >= -b - eps.
double adversary_best_response(const EnsembleProblem& problem,
                               std::span<const double> g,
                               const ConvexMinimizer& minimizer);

// Euclidean Lipschitz constant ||b||_2 + max_j ||x_j||_2 (+ eps sqrt(p) for
// the uncertainty variant) of the slack function.
double lipschitz_bound(const EnsembleProblem& problem);

// max_j ||x_j||_2, at least 1e-300.
double max_example_norm(const EnsembleMatrix& matrix);

// Half the minimized slack.
double game_value(const SolveReport& report);

}  // namespace minimax_agg

#endif  // MINIMAX_AGG_GAME_H_
