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


#ifndef MINIMAX_AGG_ORACLE_H_
#define MINIMAX_AGG_ORACLE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "minimax_agg/convex.h"
#include "minimax_agg/game.h"
#include "minimax_agg/solve_report.h"

namespace minimax_agg {

struct GridSpec {
  std::size_t resolution = 201;  // points per axis of the g grid
  std::size_t max_n = 3;
  std::size_t max_p = 3;

  static constexpr std::size_t kHardLimit = 3;
  // Throws DomainError unless resolution is odd and >= 11 and the limits do
  // not exceed kHardLimit.
  void validate() const;
};

struct GridResult {
  // min over the g grid of the exact adversary maximum; an upper bound on V.
  double value = 0.0;
  std::vector<double> g_grid;  // the minimizing grid point
  // value - lower + 1e-9, where lower is a certified lower bound on V.
  double tolerance = 0.0;
  double lower = 0.0;
};

// Evaluates min_g max_z l(z, g) directly for plain and general-loss
// problems with n <= max_n and p <= max_p. The adversary is exact: l is
// linear in z, so its maximum is attained at a vertex of
// {z in [-1, 1]^n : F z / n >= b}, and all vertices are enumerated. The
// predictor ranges over the grid. On each grid cell, monotonicity of the
// partial losses bounds l from below, which gives the lower bound. Throws
// InfeasibleError when the constraint set is empty.
GridResult grid_minimax(const EnsembleProblem& problem, const GridSpec& grid);

// Linear constraints rows * z >= rhs describing the adversary's set, box
// excluded. Uncertainty constraints contribute two rows per classifier.
struct ConstraintRows {
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  bool satisfied_by(std::span<const double> z, double slack) const;
};
ConstraintRows constraint_rows(const EnsembleProblem& problem);

// Rejection-samples z uniform on [-1, 1]^n under the problem's constraints
// (up to 1e6 draws). Short of count, falls back to the classifier rows h_i
// that are feasible, repeated as needed. Throws InfeasibleError when
// nothing feasible is found.
std::vector<std::vector<double>> feasible_z_sample(
    const EnsembleProblem& problem, std::size_t count, std::uint64_t seed);

// min over g in [-1, 1] of l(z, g): a 2001-point scan, golden-section
// refinement around the best point, and both endpoints.
double pointwise_min_loss(const LossSpec& loss, double z);

struct SandwichResult {
  double lower = 0.0;
  double upper = 0.0;
  double value = 0.0;
  bool pass = false;
};

// lower = (1/n) sum_j min_g l(z0_j, g) (weighted by r_j when applicable),
// upper = the adversary's best response to g(sigma*); passes when
// lower <= V + 1e-6 and V <= upper + 1e-6. Throws DomainError when z0 is
// infeasible.
SandwichResult sandwich_check(const EnsembleProblem& problem,
                              const SolveReport& report,
                              std::span<const double> z0,
                              const ConvexMinimizer& minimizer);

struct ObservationResult {
  double best_response = 0.0;
  double half_slack = 0.0;
  bool pass = false;
};

// The adversary's best response to g(sigma0) against slack(sigma0) / 2.
ObservationResult observation_check(const EnsembleProblem& problem,
                                    std::span<const double> sigma0,
                                    const ConvexMinimizer& minimizer);

struct PropositionResult {
  double value = 0.0;
  double min_loss_bound = 0.0;
  bool pass = false;
};

// For a general-loss problem, V <= min_i loss_bounds[i] + 1e-6. Throws
// DomainError for other variants.
PropositionResult proposition_check(const EnsembleProblem& problem,
                                    const SolveReport& report);

// A plain problem with F uniform on [-1, 1]^{p x n}, a hidden labeling z*
// uniform on [-1, 1]^n and b = F z* / n - margin, feasible by construction.
EnsembleProblem random_feasible_problem(const LossSpec& loss,
                                        std::size_t classifiers,
                                        std::size_t examples,
                                        std::uint64_t seed,
                                        double margin = 0.05);

}  // namespace minimax_agg

#endif  // MINIMAX_AGG_ORACLE_H_
