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


#include "minimax_agg/optimize.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <variant>

#include "minimax_agg/errors.h"
#include "minimax_agg/logging.h"
#include "minimax_agg/numeric.h"

namespace minimax_agg {
namespace {

double sign_of(double x) { return (x > 0.0) - (x < 0.0); }

double l1_norm(std::span<const double> x) {
  std::vector<double> magnitude(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) magnitude[i] = std::abs(x[i]);
  return pairwise_sum(magnitude);
}

double l2_norm(std::span<const double> x) {
  return std::sqrt(pairwise_dot(x, x));
}

// Objective value including the l1 term. When grad is nonempty it receives
// a subgradient of the whole objective, using 0 for |x_i| at x_i = 0.
class Evaluator {
 public:
  explicit Evaluator(const ConvexObjective& objective)
      : objective_(objective) {}

  double operator()(std::span<const double> x, std::span<double> grad) {
    double f = objective_.eval(x, grad);
    if (objective_.l1_weight != 0.0) {
      f += objective_.l1_weight * l1_norm(x);
      for (std::size_t i = 0; i < grad.size(); ++i) {
        grad[i] += objective_.l1_weight * sign_of(x[i]);
      }
    }
    ++calls_;
    if (!std::isfinite(f)) {
      std::ostringstream msg;
      msg << "objective is non-finite at evaluation " << calls_;
      throw NumericError(msg.str());
    }
    return f;
  }

  double smooth(std::span<const double> x, std::span<double> grad) {
    ++calls_;
    const double f = objective_.eval(x, grad);
    if (!std::isfinite(f)) {
      std::ostringstream msg;
      msg << "objective is non-finite at iteration " << calls_;
      throw NumericError(msg.str());
    }
    return f + objective_.l1_weight * l1_norm(x);
  }

 private:
  const ConvexObjective& objective_;
  std::size_t calls_ = 0;
};

// Gradient step on the smooth part, then the prox of the l1 term and the
// projection onto the orthant.
void prox_step(const ConvexObjective& objective, double eta,
               std::span<const double> grad, std::vector<double>& x) {
  const double shrink = eta * objective.l1_weight;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double v = x[i] - eta * grad[i];
    if (shrink > 0.0) v = sign_of(v) * std::max(std::abs(v) - shrink, 0.0);
    if (objective.nonneg) v = std::max(v, 0.0);
    x[i] = v;
  }
}

struct Best {
  std::vector<double> x;
  double f = std::numeric_limits<double>::infinity();
  void offer(std::span<const double> candidate, double value) {
    if (value < f) {
      f = value;
      x.assign(candidate.begin(), candidate.end());
    }
  }
};

// Doubles t along the ray t * d, d the best point. Returns true when the
// objective keeps decreasing until ||t d||_inf exceeds the cap.
bool ray_unbounded(Evaluator& eval, const SolveOptions& options, Best& best) {
  const std::vector<double> d = best.x;
  double scale = 0.0;
  for (double v : d) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return false;
  std::vector<double> x(d.size());
  double previous = best.f;
  for (double t = 2.0;; t *= 2.0) {
    for (std::size_t i = 0; i < d.size(); ++i) x[i] = t * d[i];
    const double f = eval.smooth(x, {});
    if (!(f < previous - 1e-9 * (1.0 + std::abs(previous)))) return false;
    best.offer(x, f);
    previous = f;
    if (t * scale > options.sigma_cap) return true;
  }
}

// Returns true when the optimality gap was certified below tolerance.
bool polish_one_dim(Evaluator& eval, const ConvexObjective& objective,
                    Best& best) {
  const double c = best.x[0];
  const double radius = 2.0 * std::max(1.0, std::abs(c));
  double lo = objective.nonneg ? std::max(0.0, c - radius) : c - radius;
  double hi = c + radius;
  std::vector<double> x(1);
  std::vector<double> g(1);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    x[0] = mid;
    const double f = eval(x, g);
    best.offer(x, f);
    if (g[0] > 0.0) {
      hi = mid;
    } else if (g[0] < 0.0) {
      lo = mid;
    } else {
      return true;
    }
  }
  // The bracket has collapsed to neighbouring doubles and contains the
  // minimizer, so its better end wins ties against earlier iterates.
  x[0] = lo;
  const double f_lo = eval(x, g);
  x[0] = hi;
  const double f_hi = eval(x, g);
  if (std::min(f_lo, f_hi) <= best.f) {
    best.f = std::min(f_lo, f_hi);
    best.x.assign(1, f_lo <= f_hi ? lo : hi);
  }
  return true;
}

bool polish_ellipsoid(Evaluator& eval, const ConvexObjective& objective,
                      const SolveOptions& options, Best& best) {
  const std::size_t n = objective.dim;
  const double dn = static_cast<double>(n);
  std::vector<double> c = best.x;
  const double radius = 2.0 * std::max(1.0, l2_norm(c));
  std::vector<double> P(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) P[i * n + i] = radius * radius;
  std::vector<double> g(n), a(n), Pa(n);
  double lower = -std::numeric_limits<double>::infinity();
  double fc = 0.0;
  const double expand = dn * dn / (dn * dn - 1.0);
  for (std::size_t it = 0; it < options.polish_max_iters; ++it) {
    std::size_t violated = n;
    if (objective.nonneg) {
      double worst = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (c[i] < worst) {
          worst = c[i];
          violated = i;
        }
      }
    }
    if (violated < n) {
      std::fill(a.begin(), a.end(), 0.0);
      a[violated] = -1.0;
    } else {
      fc = eval(c, g);
      best.offer(c, fc);
      a = g;
    }
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += P[i * n + k] * a[k];
      Pa[i] = s;
    }
    double aPa = 0.0;
    for (std::size_t i = 0; i < n; ++i) aPa += a[i] * Pa[i];
    if (!(aPa > 0.0)) {
      // A zero subgradient at a feasible center certifies optimality.
      return violated == n;
    }
    const double width = std::sqrt(aPa);
    if (violated == n) {
      lower = std::max(lower, fc - width);
      if (best.f - lower <= options.polish_tol * (1.0 + std::abs(best.f))) {
        return true;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      Pa[i] /= width;
      c[i] -= Pa[i] / (dn + 1.0);
    }
    const double shrink = 2.0 / (dn + 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = i; k < n; ++k) {
        const double v = expand * (P[i * n + k] - shrink * Pa[i] * Pa[k]);
        P[i * n + k] = v;
        P[k * n + i] = v;
      }
    }
  }
  return false;
}

void finish(Evaluator& eval, const ConvexObjective& objective,
            const SolveOptions& options, Best& best, MinimizeResult& out) {
  if (ray_unbounded(eval, options, best)) {
    out.unbounded_suspected = true;
    out.converged = false;
  } else if (objective.dim <= options.polish_max_dim) {
    const bool certified =
        objective.dim == 1 ? polish_one_dim(eval, objective, best)
                           : polish_ellipsoid(eval, objective, options, best);
    out.converged = out.converged || certified;
  }
  out.argmin = best.x;
  out.value = best.f;
}

}  // namespace

void SolveOptions::validate() const {
  if (max_iters == 0) throw DomainError("max_iters must be positive");
  if (!(stop_tol > 0.0)) throw DomainError("stop_tol must be positive");
  if (window == 0) throw DomainError("window must be positive");
  if (!(sigma_cap > 0.0)) throw DomainError("sigma_cap must be positive");
  if (step_size < 0.0) throw DomainError("step_size must be nonnegative");
  if (batch_size == 0) throw DomainError("batch_size must be positive");
  if (!(polish_tol > 0.0)) throw DomainError("polish_tol must be positive");
}

MinimizeResult minimize_convex(const ConvexObjective& objective,
                               const SolveOptions& options) {
  options.validate();
  if (objective.dim == 0) throw DimensionError("objective has dimension 0");
  Evaluator eval(objective);
  const double eta0 =
      options.step_size > 0.0 ? options.step_size : objective.step_scale;

  std::vector<double> x(objective.dim, 0.0);
  std::vector<double> grad(objective.dim);
  std::vector<double> average(objective.dim, 0.0);
  double average_weight = 0.0;
  Best best;
  best.offer(x, eval.smooth(x, grad));
  double window_start = best.f;

  MinimizeResult out;
  for (std::size_t k = 0; k < options.max_iters; ++k) {
    const double eta = options.step_rule == StepRule::kFixed
                           ? eta0
                           : eta0 / std::sqrt(static_cast<double>(k + 1));
    prox_step(objective, eta, grad, x);
    best.offer(x, eval.smooth(x, grad));
    for (std::size_t i = 0; i < x.size(); ++i) average[i] += eta * x[i];
    average_weight += eta;
    out.iters = k + 1;
    if (out.iters % options.window == 0) {
      std::vector<double> mean(average);
      for (double& v : mean) v /= average_weight;
      best.offer(mean, eval.smooth(mean, {}));
      if (options.record_history) out.history.push_back(best.f);
      if (window_start - best.f < options.stop_tol) {
        out.converged = true;
        break;
      }
      window_start = best.f;
    }
  }
  finish(eval, objective, options, best, out);
  return out;
}

ConvexMinimizer make_minimizer(const SolveOptions& options) {
  return [options](const ConvexObjective& objective) {
    return minimize_convex(objective, options);
  };
}

namespace {

MinimizeResult minimize_stochastic(const EnsembleProblem& problem,
                                   const ConvexObjective& objective,
                                   const SolveOptions& options) {
  const std::size_t n = problem.examples();
  const std::size_t p = problem.classifiers();
  const ExampleTerm term = slack_term(problem);
  const auto& b = problem.b();
  Evaluator eval(objective);
  const double eta0 =
      options.step_size > 0.0 ? options.step_size : objective.step_scale;

  std::mt19937_64 rng(options.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::size_t cursor = 0;

  std::vector<double> x(p, 0.0);
  std::vector<double> grad(p);
  std::vector<double> average(p, 0.0);
  double average_weight = 0.0;
  Best best;
  best.offer(x, eval.smooth(x, {}));
  double window_start = best.f;

  MinimizeResult out;
  for (std::size_t k = 0; k < options.max_iters; ++k) {
    const std::size_t batch = std::min(options.batch_size, n);
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t s = 0; s < batch; ++s) {
      if (cursor == n) {
        std::shuffle(order.begin(), order.end(), rng);
        cursor = 0;
      }
      const std::size_t j = order[cursor++];
      const auto xj = problem.matrix().example(j);
      const double slope = term(j, pairwise_dot(xj, x)).slope;
      for (std::size_t i = 0; i < p; ++i) grad[i] += slope * xj[i];
    }
    for (std::size_t i = 0; i < p; ++i) {
      grad[i] = grad[i] / static_cast<double>(batch) - b[i];
    }
    const double eta = options.step_rule == StepRule::kFixed
                           ? eta0
                           : eta0 / std::sqrt(static_cast<double>(k + 1));
    prox_step(objective, eta, grad, x);
    for (std::size_t i = 0; i < p; ++i) average[i] += eta * x[i];
    average_weight += eta;
    out.iters = k + 1;
    if (out.iters % options.window == 0) {
      std::vector<double> mean(average);
      for (double& v : mean) v /= average_weight;
      best.offer(x, eval.smooth(x, {}));
      best.offer(mean, eval.smooth(mean, {}));
      if (options.record_history) out.history.push_back(best.f);
      if (window_start - best.f < options.stop_tol) {
        out.converged = true;
        break;
      }
      window_start = best.f;
    }
  }
  best.offer(x, eval.smooth(x, {}));
  out.unbounded_suspected = ray_unbounded(eval, options, best);
  if (out.unbounded_suspected) out.converged = false;
  out.argmin = best.x;
  out.value = best.f;
  return out;
}

SolveReport to_report(const EnsembleProblem& problem, MinimizeResult result) {
  SolveReport report;
  report.sigma_star = std::move(result.argmin);
  report.slack_star = slack(problem, report.sigma_star);
  report.game_value = 0.5 * report.slack_star;
  report.iters_used = result.iters;
  report.converged = result.converged;
  report.infeasible_suspected = result.unbounded_suspected;
  report.history = std::move(result.history);
  if (report.infeasible_suspected) {
    log().warn("slack decreases without bound; constraints look infeasible");
  } else if (!report.converged) {
    log().warn("solver stopped after {} iterations without converging",
               report.iters_used);
  }
  return report;
}

}  // namespace

SolveReport minimize_slack(const EnsembleProblem& problem,
                           const SolveOptions& options) {
  options.validate();
  const ConvexityReport convexity =
      convexity_condition_check(problem.loss(), 101);
  if (!convexity.condition_c_holds) {
    log().warn(
        "loss '{}' fails the convexity condition (worst margin {}); only a "
        "stationary value is guaranteed",
        problem.loss().canonical_name(), convexity.worst_margin);
  }
  ConvexObjective objective;
  objective.dim = problem.classifiers();
  objective.nonneg = problem.sign_constrained();
  if (const auto* u = std::get_if<UncertaintyVariant>(&problem.variant())) {
    objective.l1_weight = u->epsilon;
  }
  objective.step_scale = 1.0 / max_example_norm(problem.matrix());
  objective.eval = [&problem](std::span<const double> sigma,
                              std::span<double> grad) {
    SlackEvaluation e = evaluate_without_l1(problem, sigma, !grad.empty());
    std::copy(e.subgradient.begin(), e.subgradient.end(), grad.begin());
    return e.value;
  };
  MinimizeResult result = options.stochastic
                              ? minimize_stochastic(problem, objective, options)
                              : minimize_convex(objective, options);
  return to_report(problem, std::move(result));
}

SolveReport minimize_noise_slack(const EnsembleProblem& problem,
                                 std::span<const double> r,
                                 const SolveOptions& options) {
  ConvexObjective objective;
  objective.dim = problem.classifiers();
  objective.nonneg = true;
  objective.step_scale = 1.0 / max_example_norm(problem.matrix());
  objective.eval = [&problem, r](std::span<const double> sigma,
                                 std::span<double> grad) {
    SlackEvaluation e = noise_slack(problem, r, sigma, !grad.empty());
    std::copy(e.subgradient.begin(), e.subgradient.end(), grad.begin());
    return e.value;
  };
  MinimizeResult result = minimize_convex(objective, options);
  SolveReport report;
  report.sigma_star = std::move(result.argmin);
  report.slack_star = noise_slack(problem, r, report.sigma_star, false).value;
  report.game_value = 0.5 * report.slack_star;
  report.iters_used = result.iters;
  report.converged = result.converged;
  report.infeasible_suspected = result.unbounded_suspected;
  report.history = std::move(result.history);
  return report;
}

}  // namespace minimax_agg
