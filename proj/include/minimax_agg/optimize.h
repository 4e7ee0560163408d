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


#ifndef MINIMAX_AGG_OPTIMIZE_H_
#define MINIMAX_AGG_OPTIMIZE_H_

#include <cstddef>
#include <cstdint>
#include <span>

#include "minimax_agg/convex.h"
#include "minimax_agg/game.h"
#include "minimax_agg/solve_report.h"

namespace minimax_agg {

enum class StepRule { kFixed, kInvSqrt };

struct SolveOptions {
  std::size_t max_iters = 50000;
  StepRule step_rule = StepRule::kInvSqrt;
  // eta for kFixed, eta_0 for kInvSqrt (eta_k = eta_0 / sqrt(k + 1)).
  // 0 selects 1 / max_j ||x_j||_2.
  double step_size = 0.0;
  // Stop when the best value improves by less than this over one window.
  double stop_tol = 1e-8;
  std::size_t window = 100;
  // Unboundedness is declared when the objective keeps decreasing along the
  // ray through the best iterate out to this norm.
  double sigma_cap = 1e6;
  std::uint64_t seed = 0;

  // Per-example stochastic subgradients in seeded shuffled order, in
  // minibatches of batch_size. max_iters then counts minibatch steps.
  bool stochastic = false;
  std::size_t batch_size = 64;

  // Low-dimensional problems are finished with a central-cut ellipsoid
  // method started around the subgradient solution.
  std::size_t polish_max_dim = 12;
  std::size_t polish_max_iters = 20000;
  double polish_tol = 1e-11;

  bool record_history = false;

  // Throws DomainError for nonpositive tolerances or sizes.
  void validate() const;
};

// Projected (proximal, for the l1 term) subgradient descent from x = 0 with
// best-iterate tracking, followed by the unboundedness ray test and, for
// small dim, the ellipsoid polish.
MinimizeResult minimize_convex(const ConvexObjective& objective,
                               const SolveOptions& options);

ConvexMinimizer make_minimizer(const SolveOptions& options);

// Minimizes the problem's slack function. slack_star is the slack at
// sigma_star, the best point seen.
SolveReport minimize_slack(const EnsembleProblem& problem,
                           const SolveOptions& options);

// Minimizes the label-noise form (see noise_slack) over sigma >= 0.
SolveReport minimize_noise_slack(const EnsembleProblem& problem,
                                 std::span<const double> r,
                                 const SolveOptions& options);

}  // namespace minimax_agg

#endif  // MINIMAX_AGG_OPTIMIZE_H_
