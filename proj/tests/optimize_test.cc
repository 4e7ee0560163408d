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


#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "minimax_agg/errors.h"
#include "minimax_agg/game.h"
#include "minimax_agg/optimize.h"
#include "minimax_agg/oracle.h"

namespace minimax_agg {
namespace {

using doctest::Approx;

EnsembleMatrix tiny_matrix() { return EnsembleMatrix::from_rows({{1.0, 1.0}}); }

TEST_SUITE("optimize") {
  TEST_CASE("small instance solves analytically") {
    // gamma(s) = -0.5 s + max(1, s) is minimized at s = 1 with value 0.5.
    const auto problem =
        EnsembleProblem::plain(tiny_matrix(), {0.5}, make_zero_one_loss());
    const SolveReport report = minimize_slack(problem, SolveOptions{});
    CHECK(report.sigma_star[0] == Approx(1.0).epsilon(1e-4));
    CHECK(report.slack_star == Approx(0.5).epsilon(1e-9));
    CHECK(report.game_value == Approx(0.25).epsilon(1e-9));
    CHECK(report.converged);
    CHECK_FALSE(report.infeasible_suspected);
    CHECK(predict(problem, report.sigma_star).g ==
          std::vector<double>{1.0, 1.0});
  }

  TEST_CASE("vacuous constraints give the no-information value") {
    for (const LossSpec& loss : LossRegistry::builtin().entries()) {
      CAPTURE(loss.canonical_name());
      const auto problem = EnsembleProblem::plain(
          EnsembleMatrix::from_rows({{0.5, -1.0, 0.25}, {1.0, 0.0, -0.5}}),
          {-1.0, -1.0}, loss);
      const SolveReport report = minimize_slack(problem, SolveOptions{});
      CHECK(report.game_value ==
            Approx(potential_well(loss, 0.0) / 2.0).epsilon(1e-9));
      CHECK(report.sigma_star == std::vector<double>{0.0, 0.0});
    }
  }

  TEST_CASE("infeasible constraints are flagged") {
    const auto problem =
        EnsembleProblem::plain(tiny_matrix(), {1.1}, make_zero_one_loss());
    const SolveReport report = minimize_slack(problem, SolveOptions{});
    CHECK(report.infeasible_suspected);
    CHECK_FALSE(report.converged);
    const auto unc = EnsembleProblem::uncertainty(
        EnsembleMatrix::from_rows({{1.0, 1.0}, {1.0, 1.0}}), {0.9, -0.9}, 0.1,
        make_log_loss());
    CHECK(minimize_slack(unc, SolveOptions{}).infeasible_suspected);
  }

  TEST_CASE("tight but feasible constraints are not flagged") {
    const auto problem =
        EnsembleProblem::plain(tiny_matrix(), {1.0}, make_zero_one_loss());
    const SolveReport report = minimize_slack(problem, SolveOptions{});
    CHECK_FALSE(report.infeasible_suspected);
    CHECK(report.game_value == Approx(0.0).epsilon(1e-9));
  }

  TEST_CASE("best-so-far history never increases") {
    // Classifiers correlated with a hidden labeling z, so sigma = 0 is not
    // optimal.
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> z(40);
    for (double& v : z) v = unit(rng) < 0 ? -1.0 : 1.0;
    EnsembleMatrix m(5, 40);
    std::vector<double> b(5, 0.0);
    for (std::size_t j = 0; j < 40; ++j) {
      for (std::size_t i = 0; i < 5; ++i) {
        m.at(i, j) = 0.5 * z[j] + 0.5 * unit(rng);
        b[i] += m(i, j) * z[j] / 40.0;
      }
    }
    for (double& v : b) v -= 0.05;
    const auto problem = EnsembleProblem::plain(m, b, make_log_loss());
    SolveOptions options;
    options.record_history = true;
    options.polish_max_dim = 0;
    options.stop_tol = 1e-15;
    options.max_iters = 3000;
    const SolveReport report = minimize_slack(problem, options);
    REQUIRE(report.history.size() >= 2);
    for (std::size_t k = 1; k < report.history.size(); ++k) {
      CHECK(report.history[k] <= report.history[k - 1]);
    }
    CHECK(report.slack_star <= report.history.back());
    CHECK(slack(problem, report.sigma_star) == report.slack_star);
  }

  TEST_CASE("solves are bit-identical across runs and thread counts") {
    EnsembleProblem problem =
        random_feasible_problem(make_exponential_loss(), 3, 3000, 5);
    const SolveReport a = minimize_slack(problem, SolveOptions{});
    const SolveReport b = minimize_slack(problem, SolveOptions{});
    problem.set_threads(3);
    const SolveReport c = minimize_slack(problem, SolveOptions{});
    CHECK(a.sigma_star == b.sigma_star);
    CHECK(a.slack_star == b.slack_star);
    CHECK(a.sigma_star == c.sigma_star);
    CHECK(a.iters_used == c.iters_used);
  }

  TEST_CASE("large epsilon drives sigma to zero") {
    const EnsembleProblem base =
        random_feasible_problem(make_logistic_loss(), 2, 4, 8);
    const auto problem = EnsembleProblem::uncertainty(base.matrix(), base.b(),
                                                      5.0, base.loss());
    const SolveReport report = minimize_slack(problem, SolveOptions{});
    CHECK(report.sigma_star == std::vector<double>{0.0, 0.0});
    CHECK(report.game_value ==
          Approx(potential_well(base.loss(), 0.0) / 2).epsilon(1e-4));
  }

  TEST_CASE("stochastic mode approaches the full-batch value") {
    const EnsembleProblem problem =
        random_feasible_problem(make_square_loss(), 3, 500, 6);
    const SolveReport full = minimize_slack(problem, SolveOptions{});
    SolveOptions options;
    options.stochastic = true;
    options.batch_size = 50;
    options.max_iters = 20000;
    const SolveReport sgd = minimize_slack(problem, options);
    CHECK(sgd.slack_star >= full.slack_star - 1e-9);
    CHECK(sgd.slack_star <= full.slack_star + 1e-2);
    const SolveReport again = minimize_slack(problem, options);
    CHECK(again.sigma_star == sgd.sigma_star);
  }

  TEST_CASE("minimize_convex handles a nonnegative l1 problem") {
    // f(x) = |x0 - 2| + |x1 + 1| + 0.5 ||x||_1 over x >= 0: x = (2, 0).
    ConvexObjective objective;
    objective.dim = 2;
    objective.nonneg = true;
    objective.l1_weight = 0.5;
    objective.eval = [](std::span<const double> x, std::span<double> grad) {
      if (!grad.empty()) {
        grad[0] = (x[0] > 2.0) - (x[0] < 2.0);
        grad[1] = (x[1] > -1.0) - (x[1] < -1.0);
      }
      return std::abs(x[0] - 2.0) + std::abs(x[1] + 1.0);
    };
    const MinimizeResult result = minimize_convex(objective, SolveOptions{});
    CHECK(result.argmin[0] == Approx(2.0).epsilon(1e-6));
    CHECK(result.argmin[1] == Approx(0.0).epsilon(1e-9));
    CHECK(result.value == Approx(2.0).epsilon(1e-6));
  }

  TEST_CASE("invalid options are rejected") {
    SolveOptions options;
    options.stop_tol = 0.0;
    CHECK_THROWS_AS(options.validate(), DomainError);
    options = SolveOptions{};
    options.max_iters = 0;
    CHECK_THROWS_AS(options.validate(), DomainError);
    options = SolveOptions{};
    options.window = 0;
    CHECK_THROWS_AS(options.validate(), DomainError);
  }

  TEST_CASE("fixed steps also converge on the small instance") {
    const auto problem =
        EnsembleProblem::plain(tiny_matrix(), {0.5}, make_zero_one_loss());
    SolveOptions options;
    options.step_rule = StepRule::kFixed;
    options.step_size = 0.01;
    options.polish_max_dim = 0;
    const SolveReport report = minimize_slack(problem, options);
    CHECK(report.game_value == Approx(0.25).epsilon(1e-4));
  }
}

}  // namespace
}  // namespace minimax_agg
