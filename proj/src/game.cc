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


#include "minimax_agg/game.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <type_traits>

#include "minimax_agg/errors.h"
#include "minimax_agg/logging.h"
#include "minimax_agg/numeric.h"

namespace minimax_agg {
namespace {

constexpr std::size_t kBlockSize = 1024;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double sign_of(double x) { return (x > 0.0) - (x < 0.0); }

void check_sigma(const EnsembleProblem& problem,
                 std::span<const double> sigma) {
  if (sigma.size() != problem.classifiers()) {
    std::ostringstream msg;
    msg << "sigma has " << sigma.size() << " entries, expected "
        << problem.classifiers();
    throw DimensionError(msg.str());
  }
  if (!problem.sign_constrained()) return;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (sigma[i] < 0.0) {
      std::ostringstream msg;
      msg << "sigma[" << i << "] = " << sigma[i]
          << " is negative; the " << variant_name(problem.variant())
          << " variant requires sigma >= 0";
      throw SignError(msg.str());
    }
  }
}

ExampleTerm psi_term(const LossSpec& loss) {
  return [&loss](std::size_t, double m) {
    return TermValue{potential_well(loss, m), potential_well_slope(loss, m)};
  };
}

// r Psi(m / r), the perspective of Psi; |m| in the limit r -> 0.
ExampleTerm weighted_term(const LossSpec& loss, std::span<const double> r) {
  return [&loss, r](std::size_t j, double m) {
    const double w = r[j];
    if (w == 0.0) return TermValue{std::abs(m), sign_of(m)};
    return TermValue{w * potential_well(loss, m / w),
                     potential_well_slope(loss, m / w)};
  };
}

}  // namespace

EnsembleMatrix::EnsembleMatrix(std::size_t classifiers, std::size_t examples)
    : p_(classifiers), n_(examples), data_(classifiers * examples, 0.0) {}

EnsembleMatrix EnsembleMatrix::from_rows(
    const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw DimensionError("ensemble matrix has no classifiers");
  EnsembleMatrix out(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != out.n_) {
      std::ostringstream msg;
      msg << "classifier row " << i << " has " << rows[i].size()
          << " entries, expected " << out.n_;
      throw DimensionError(msg.str());
    }
    for (std::size_t j = 0; j < out.n_; ++j) out.at(i, j) = rows[i][j];
  }
  return out;
}

std::vector<double> EnsembleMatrix::classifier(std::size_t i) const {
  std::vector<double> row(n_);
  for (std::size_t j = 0; j < n_; ++j) row[j] = (*this)(i, j);
  return row;
}

void EnsembleMatrix::push_example(std::span<const double> x) {
  if (n_ == 0 && p_ == 0) p_ = x.size();
  if (x.size() != p_) {
    std::ostringstream msg;
    msg << "example has " << x.size() << " predictions, expected " << p_;
    throw DimensionError(msg.str());
  }
  data_.insert(data_.end(), x.begin(), x.end());
  ++n_;
}

void EnsembleMatrix::check_range() const {
  for (std::size_t j = 0; j < n_; ++j) {
    for (std::size_t i = 0; i < p_; ++i) {
      const double v = (*this)(i, j);
      if (!(v >= -1.0 && v <= 1.0)) {
        std::ostringstream msg;
        msg << "prediction of classifier " << i << " on example " << j
            << " is " << v << ", outside [-1, 1]";
        throw RangeError(msg.str());
      }
    }
  }
}

std::string variant_name(const Variant& variant) {
  return std::visit(
      Overloaded{[](const PlainVariant&) { return "plain"; },
                 [](const WeightedVariant&) { return "weighted"; },
                 [](const UncertaintyVariant&) { return "uncertainty"; },
                 [](const GeneralLossVariant&) { return "general"; }},
      variant);
}

EnsembleProblem::EnsembleProblem(EnsembleMatrix matrix, std::vector<double> b,
                                 Variant variant, LossSpec loss)
    : matrix_(std::move(matrix)),
      b_(std::move(b)),
      variant_(std::move(variant)),
      loss_(std::move(loss)) {
  if (matrix_.classifiers() == 0 || matrix_.examples() == 0) {
    throw DimensionError("ensemble matrix must have p >= 1 and n >= 1");
  }
  if (b_.size() != matrix_.classifiers()) {
    std::ostringstream msg;
    msg << "b has " << b_.size() << " entries but the matrix has "
        << matrix_.classifiers() << " classifiers";
    throw DimensionError(msg.str());
  }
  for (double v : b_) {
    if (!std::isfinite(v)) throw DomainError("b contains a non-finite value");
  }
  if (const auto* w = std::get_if<WeightedVariant>(&variant_)) {
    if (w->r.size() != matrix_.examples()) {
      std::ostringstream msg;
      msg << "weights have " << w->r.size() << " entries but the matrix has "
          << matrix_.examples() << " examples";
      throw DimensionError(msg.str());
    }
    for (std::size_t j = 0; j < w->r.size(); ++j) {
      if (!(w->r[j] >= 0.0) || !std::isfinite(w->r[j])) {
        throw DomainError("weight r[" + std::to_string(j) +
                          "] must be finite and nonnegative");
      }
    }
  }
  if (const auto* u = std::get_if<UncertaintyVariant>(&variant_)) {
    if (!(u->epsilon >= 0.0) || !std::isfinite(u->epsilon)) {
      throw DomainError("epsilon must be finite and nonnegative");
    }
  }
  if (std::holds_alternative<GeneralLossVariant>(variant_)) {
    for (std::size_t j = 0; j < matrix_.examples(); ++j) {
      for (double v : matrix_.example(j)) {
        if (!std::isfinite(v)) {
          throw DomainError("transformed matrix has a non-finite entry");
        }
      }
    }
  } else {
    matrix_.check_range();
    for (std::size_t i = 0; i < b_.size(); ++i) {
      if (!(b_[i] > 0.0 && b_[i] <= 1.0)) {
        log().warn("b[{}] = {} lies outside (0, 1]", i, b_[i]);
      }
    }
  }
}

EnsembleProblem EnsembleProblem::plain(EnsembleMatrix matrix,
                                       std::vector<double> b, LossSpec loss) {
  return {std::move(matrix), std::move(b), PlainVariant{}, std::move(loss)};
}

EnsembleProblem EnsembleProblem::weighted(EnsembleMatrix matrix,
                                          std::vector<double> b,
                                          std::vector<double> r,
                                          LossSpec loss) {
  return {std::move(matrix), std::move(b), WeightedVariant{std::move(r)},
          std::move(loss)};
}

EnsembleProblem EnsembleProblem::uncertainty(EnsembleMatrix matrix,
                                             std::vector<double> b,
                                             double epsilon, LossSpec loss) {
  return {std::move(matrix), std::move(b), UncertaintyVariant{epsilon},
          std::move(loss)};
}

EnsembleProblem EnsembleProblem::general_loss(const EnsembleMatrix& raw,
                                              std::vector<double> loss_bounds,
                                              LossSpec loss) {
  GeneralLossTransform t = transform_general_loss(raw, loss_bounds, loss);
  return {std::move(t.matrix), std::move(t.b),
          GeneralLossVariant{std::move(loss_bounds)}, std::move(loss)};
}

bool EnsembleProblem::sign_constrained() const {
  return !std::holds_alternative<UncertaintyVariant>(variant_);
}

SlackEvaluation evaluate_separable(const EnsembleMatrix& matrix,
                                   std::span<const double> b,
                                   std::span<const double> sigma,
                                   const ExampleTerm& term, bool want_gradient,
                                   int threads) {
  const std::size_t p = matrix.classifiers();
  const std::size_t n = matrix.examples();
  const std::size_t blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<double> values(n);
  std::vector<double> block_grad(want_gradient ? blocks * p : 0, 0.0);
  parallel_blocks(n, kBlockSize, threads,
                  [&](std::size_t k, std::size_t begin, std::size_t end) {
                    double* grad = want_gradient ? &block_grad[k * p] : nullptr;
                    for (std::size_t j = begin; j < end; ++j) {
                      const auto x = matrix.example(j);
                      const TermValue t = term(j, pairwise_dot(x, sigma));
                      values[j] = t.value;
                      if (grad && t.slope != 0.0) {
                        for (std::size_t i = 0; i < p; ++i) {
                          grad[i] += t.slope * x[i];
                        }
                      }
                    }
                  });
  SlackEvaluation out;
  const double inv_n = 1.0 / static_cast<double>(n);
  out.value = -pairwise_dot(b, sigma) + pairwise_sum(values) * inv_n;
  if (want_gradient) {
    out.subgradient.resize(p);
    std::vector<double> column(blocks);
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t k = 0; k < blocks; ++k) column[k] = block_grad[k * p + i];
      out.subgradient[i] = -b[i] + pairwise_sum(column) * inv_n;
    }
  }
  return out;
}

ExampleTerm slack_term(const EnsembleProblem& problem) {
  if (const auto* w = std::get_if<WeightedVariant>(&problem.variant())) {
    return weighted_term(problem.loss(), w->r);
  }
  return psi_term(problem.loss());
}

SlackEvaluation evaluate_without_l1(const EnsembleProblem& problem,
                                    std::span<const double> sigma,
                                    bool want_gradient) {
  check_sigma(problem, sigma);
  return evaluate_separable(problem.matrix(), problem.b(), sigma,
                            slack_term(problem), want_gradient,
                            problem.threads());
}

SlackEvaluation evaluate(const EnsembleProblem& problem,
                         std::span<const double> sigma, bool want_gradient) {
  SlackEvaluation out = evaluate_without_l1(problem, sigma, want_gradient);
  if (const auto* u = std::get_if<UncertaintyVariant>(&problem.variant())) {
    std::vector<double> magnitude(sigma.size());
    for (std::size_t i = 0; i < sigma.size(); ++i) {
      magnitude[i] = std::abs(sigma[i]);
    }
    out.value += u->epsilon * pairwise_sum(magnitude);
    if (want_gradient) {
      for (std::size_t i = 0; i < sigma.size(); ++i) {
        out.subgradient[i] += u->epsilon * sign_of(sigma[i]);
      }
    }
  }
  if (!std::isfinite(out.value)) {
    throw NumericError("slack function evaluated to a non-finite value");
  }
  return out;
}

double slack(const EnsembleProblem& problem, std::span<const double> sigma) {
  return evaluate(problem, sigma, false).value;
}

std::vector<double> slack_subgradient(const EnsembleProblem& problem,
                                      std::span<const double> sigma) {
  return evaluate(problem, sigma, true).subgradient;
}

SlackEvaluation noise_slack(const EnsembleProblem& problem,
                            std::span<const double> r,
                            std::span<const double> sigma,
                            bool want_gradient) {
  if (r.size() != problem.examples()) {
    throw DimensionError("noise weights must have one entry per example");
  }
  if (sigma.size() != problem.classifiers()) {
    throw DimensionError("sigma must have one entry per classifier");
  }
  const LossSpec& loss = problem.loss();
  const ExampleTerm term = [&loss, r](std::size_t j, double m) {
    return TermValue{r[j] * potential_well(loss, m),
                     r[j] * potential_well_slope(loss, m)};
  };
  return evaluate_separable(problem.matrix(), problem.b(), sigma, term,
                            want_gradient, problem.threads());
}

GeneralLossTransform transform_general_loss(const EnsembleMatrix& raw,
                                            std::span<const double> loss_bounds,
                                            const LossSpec& loss) {
  const std::size_t p = raw.classifiers();
  const std::size_t n = raw.examples();
  if (loss_bounds.size() != p) {
    std::ostringstream msg;
    msg << "loss bounds have " << loss_bounds.size()
        << " entries but the matrix has " << p << " classifiers";
    throw DimensionError(msg.str());
  }
  if (n == 0) throw DimensionError("ensemble matrix has no examples");
  raw.check_range();
  GeneralLossTransform out{EnsembleMatrix(p, n), std::vector<double>(p)};
  std::vector<double> sums(n);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double h = raw(i, j);
      const double gamma = score(loss, h);
      const double both = loss.closed_partial_sum
                              ? loss.closed_partial_sum(h)
                              : generic::partial_sum(loss, h);
      if (!std::isfinite(gamma) || !std::isfinite(both)) {
        std::ostringstream msg;
        msg << "loss '" << loss.canonical_name()
            << "' is infinite at the prediction " << h << " of classifier "
            << i << " on example " << j;
        throw DomainError(msg.str());
      }
      out.matrix.at(i, j) = gamma;
      sums[j] = both;
    }
    out.b[i] = pairwise_sum(sums) / static_cast<double>(n) -
               2.0 * loss_bounds[i];
  }
  return out;
}

PredictionVector predict(const EnsembleProblem& problem,
                         std::span<const double> sigma) {
  if (sigma.size() != problem.classifiers()) {
    std::ostringstream msg;
    msg << "sigma has " << sigma.size() << " entries, expected "
        << problem.classifiers();
    throw DimensionError(msg.str());
  }
  const std::size_t n = problem.examples();
  const auto* w = std::get_if<WeightedVariant>(&problem.variant());
  PredictionVector out{std::vector<double>(n), std::vector<double>(n),
                       std::vector<bool>(n, false)};
  std::vector<char> weightless(n, 0);
  parallel_blocks(n, kBlockSize, problem.threads(),
                  [&](std::size_t, std::size_t begin, std::size_t end) {
                    for (std::size_t j = begin; j < end; ++j) {
                      double m = pairwise_dot(problem.matrix().example(j), sigma);
                      if (w) {
                        if (w->r[j] == 0.0) {
                          m = 0.0;
                          weightless[j] = 1;
                        } else {
                          m /= w->r[j];
                        }
                      }
                      out.margins[j] = m;
                      out.g[j] = predict_one(problem.loss(), m);
                    }
                  });
  for (std::size_t j = 0; j < n; ++j) out.weightless[j] = weightless[j] != 0;
  return out;
}

double dual_box_lp(const EnsembleMatrix& matrix, std::span<const double> b,
                   std::span<const double> a, const ConvexMinimizer& minimizer,
                   int threads) {
  if (b.size() != matrix.classifiers() || a.size() != matrix.examples()) {
    throw DimensionError("dual_box_lp: b must have p entries and a n entries");
  }
  for (double v : a) {
    if (std::isnan(v)) throw DomainError("dual_box_lp: a contains NaN");
    if (std::isinf(v)) return std::numeric_limits<double>::infinity();
  }
  const ExampleTerm term = [a](std::size_t j, double m) {
    const double v = m + a[j];
    return TermValue{std::abs(v), sign_of(v)};
  };
  ConvexObjective objective;
  objective.dim = matrix.classifiers();
  objective.nonneg = true;
  objective.step_scale = 1.0 / max_example_norm(matrix);
  objective.eval = [&](std::span<const double> sigma, std::span<double> grad) {
    SlackEvaluation e = evaluate_separable(matrix, b, sigma, term,
                                           !grad.empty(), threads);
    std::copy(e.subgradient.begin(), e.subgradient.end(), grad.begin());
    return e.value;
  };
  const MinimizeResult result = minimizer(objective);
  if (result.unbounded_suspected) {
    throw InfeasibleError(
        "no z in [-1, 1]^n satisfies the constraints (dual unbounded)");
  }
  return result.value;
}

double adversary_best_response(const EnsembleProblem& problem,
                               std::span<const double> g,
                               const ConvexMinimizer& minimizer) {
  const std::size_t n = problem.examples();
  const std::size_t p = problem.classifiers();
  if (g.size() != n) {
    throw DimensionError("predictions must have one entry per example");
  }
  const LossSpec& loss = problem.loss();
  const auto* w = std::get_if<WeightedVariant>(&problem.variant());
  std::vector<double> sums(n);
  std::vector<double> a(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double weight = w ? w->r[j] : 1.0;
    const double both = loss.closed_partial_sum
                            ? loss.closed_partial_sum(g[j])
                            : generic::partial_sum(loss, g[j]);
    if (weight == 0.0) continue;
    sums[j] = weight * both;
    a[j] = -weight * score(loss, g[j]);
  }
  const double constant = pairwise_sum(sums) / static_cast<double>(n);
  if (!std::isfinite(constant)) return std::numeric_limits<double>::infinity();

  double inner;
  if (const auto* u = std::get_if<UncertaintyVariant>(&problem.variant())) {
    EnsembleMatrix stacked(2 * p, n);
    std::vector<double> b(2 * p);
    for (std::size_t i = 0; i < p; ++i) {
      b[i] = problem.b()[i] - u->epsilon;
      b[p + i] = -problem.b()[i] - u->epsilon;
      for (std::size_t j = 0; j < n; ++j) {
        stacked.at(i, j) = problem.matrix()(i, j);
        stacked.at(p + i, j) = -problem.matrix()(i, j);
      }
    }
    inner = dual_box_lp(stacked, b, a, minimizer, problem.threads());
  } else {
    inner = dual_box_lp(problem.matrix(), problem.b(), a, minimizer,
                        problem.threads());
  }
  return 0.5 * (constant + inner);
}

double max_example_norm(const EnsembleMatrix& matrix) {
  double best = 1e-300;
  for (std::size_t j = 0; j < matrix.examples(); ++j) {
    const auto x = matrix.example(j);
    best = std::max(best, std::sqrt(pairwise_dot(x, x)));
  }
  return best;
}

double lipschitz_bound(const EnsembleProblem& problem) {
  const auto& b = problem.b();
  double bound = std::sqrt(pairwise_dot(b, b)) +
                 max_example_norm(problem.matrix());
  if (const auto* u = std::get_if<UncertaintyVariant>(&problem.variant())) {
    bound += u->epsilon * std::sqrt(static_cast<double>(b.size()));
  }
  return bound;
}

double game_value(const SolveReport& report) { return 0.5 * report.slack_star; }

}  // namespace minimax_agg
