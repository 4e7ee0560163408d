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

TEST_SUITE("oracle") {
  TEST_CASE("grid value on the small instance") {
    const auto problem =
        EnsembleProblem::plain(tiny_matrix(), {0.5}, make_zero_one_loss());
    const GridResult grid = grid_minimax(problem, GridSpec{});
    CHECK(std::abs(grid.value - 0.25) <= grid.tolerance);
    CHECK(grid.lower <= grid.value);
    CHECK(grid.g_grid == std::vector<double>{1.0, 1.0});
  }

  TEST_CASE("grid value with vacuous constraints") {
    for (const LossSpec& loss : LossRegistry::builtin().entries()) {
      if (!loss.symmetric) continue;
      CAPTURE(loss.canonical_name());
      const auto problem = EnsembleProblem::plain(
          EnsembleMatrix::from_rows({{0.3, -0.7}}), {-1.0}, loss);
      const GridResult grid = grid_minimax(problem, GridSpec{});
      CHECK(std::abs(grid.value - potential_well(loss, 0.0) / 2) <=
            grid.tolerance);
    }
  }

  TEST_CASE("a single pinned example") {
    for (const LossSpec& loss : LossRegistry::builtin().entries()) {
      CAPTURE(loss.canonical_name());
      const auto problem =
          EnsembleProblem::plain(EnsembleMatrix::from_rows({{1.0}}), {1.0}, loss);
      const GridResult grid = grid_minimax(problem, GridSpec{});
      CHECK(grid.value ==
            Approx(partial_loss(loss, LabelSign::kPlus, 1.0)).epsilon(1e-12));
    }
  }

  TEST_CASE("grid value agrees with the solver on random problems") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const EnsembleProblem problem =
          random_feasible_problem(make_log_loss(), 2, 3, seed);
      const GridResult grid = grid_minimax(problem, GridSpec{});
      const SolveReport report = minimize_slack(problem, SolveOptions{});
      CHECK(std::abs(report.game_value - grid.value) <= grid.tolerance);
    }
  }

  TEST_CASE("grid oracle validates its inputs") {
    GridSpec spec;
    spec.resolution = 200;
    CHECK_THROWS_AS(spec.validate(), DomainError);
    spec = GridSpec{};
    spec.max_n = 4;
    CHECK_THROWS_AS(spec.validate(), DomainError);
    const EnsembleProblem big =
        random_feasible_problem(make_square_loss(), 1, 4, 0);
    CHECK_THROWS_AS(grid_minimax(big, GridSpec{}), DimensionError);
    const auto infeasible =
        EnsembleProblem::plain(tiny_matrix(), {1.1}, make_zero_one_loss());
    CHECK_THROWS_AS(grid_minimax(infeasible, GridSpec{}), InfeasibleError);
    const auto weighted = EnsembleProblem::weighted(
        tiny_matrix(), {0.5}, {1.0, 1.0}, make_zero_one_loss());
    CHECK_THROWS_AS(grid_minimax(weighted, GridSpec{}), DomainError);
  }

  TEST_CASE("feasible samples satisfy the constraints") {
    const auto vacuous = EnsembleProblem::plain(tiny_matrix(), {-1.0},
                                                make_zero_one_loss());
    CHECK(feasible_z_sample(vacuous, 50, 1).size() == 50);

    const auto problem =
        EnsembleProblem::plain(tiny_matrix(), {0.5}, make_zero_one_loss());
    const auto zs = feasible_z_sample(problem, 40, 2);
    CHECK(zs.size() == 40);
    for (const auto& z : zs) CHECK(z[0] + z[1] >= 1.0);

    const auto tight =
        EnsembleProblem::plain(tiny_matrix(), {1.1}, make_zero_one_loss());
    CHECK_THROWS_AS(feasible_z_sample(tight, 1, 0), InfeasibleError);
  }

  TEST_CASE("uncertainty constraints contribute two rows each") {
    const auto problem = EnsembleProblem::uncertainty(
        tiny_matrix(), {0.5}, 0.1, make_zero_one_loss());
    const ConstraintRows rows = constraint_rows(problem);
    REQUIRE(rows.rows.size() == 2);
    CHECK(rows.rhs[0] == Approx(0.4));
    CHECK(rows.rhs[1] == Approx(-0.6));
    const std::vector<double> inside{0.5, 0.5};
    const std::vector<double> outside{1.0, 1.0};
    CHECK(rows.satisfied_by(inside, 0.0));
    CHECK_FALSE(rows.satisfied_by(outside, 0.0));
  }

  TEST_CASE("pointwise minimum loss") {
    CHECK(pointwise_min_loss(make_zero_one_loss(), 1.0) == Approx(0.0));
    CHECK(pointwise_min_loss(make_zero_one_loss(), 0.0) == Approx(0.5));
    // Square loss at z: ((1 - z^2) / 4) at g = z.
    CHECK(pointwise_min_loss(make_square_loss(), 0.4) ==
          Approx(0.21).epsilon(1e-10));
    CHECK(pointwise_min_loss(make_log_loss(), 0.0) ==
          Approx(std::log(2.0)).epsilon(1e-10));
  }

  TEST_CASE("sandwich on the small instance") {
    const auto problem =
        EnsembleProblem::plain(tiny_matrix(), {0.5}, make_zero_one_loss());
    const SolveReport report = minimize_slack(problem, SolveOptions{});
    const ConvexMinimizer minimizer = make_minimizer(SolveOptions{});
    const std::vector<double> z0{1.0, 0.0};
    const SandwichResult s = sandwich_check(problem, report, z0, minimizer);
    CHECK(s.pass);
    CHECK(s.lower == Approx(0.25));
    CHECK(s.upper == Approx(0.25).epsilon(1e-6));
    const std::vector<double> bad{0.0, 0.0};
    CHECK_THROWS_AS(sandwich_check(problem, report, bad, minimizer),
                    DomainError);
  }

  TEST_CASE("sandwich with vacuous constraints") {
    const LossSpec loss = make_log_loss();
    const auto problem = EnsembleProblem::plain(
        EnsembleMatrix::from_rows({{0.2, -0.4, 0.9}}), {-1.0}, loss);
    const SolveReport report = minimize_slack(problem, SolveOptions{});
    const std::vector<double> z0(3, 0.0);
    const SandwichResult s =
        sandwich_check(problem, report, z0, make_minimizer(SolveOptions{}));
    CHECK(s.pass);
    CHECK(s.lower == Approx(std::log(2.0)).epsilon(1e-9));
    CHECK(s.value == Approx(std::log(2.0)).epsilon(1e-9));
  }

  TEST_CASE("proposition bound on general-loss problems") {
    const auto raw = EnsembleMatrix::from_rows({{0.5, -0.2, 0.8}, {0.1, 0.3, -0.6}});
    const auto problem =
        EnsembleProblem::general_loss(raw, {0.35, 0.3}, make_square_loss());
    const SolveReport report = minimize_slack(problem, SolveOptions{});
    const PropositionResult prop = proposition_check(problem, report);
    CHECK(prop.pass);
    CHECK(prop.min_loss_bound == 0.3);
    const auto plain =
        EnsembleProblem::plain(tiny_matrix(), {0.5}, make_zero_one_loss());
    CHECK_THROWS_AS(proposition_check(plain, report), DomainError);
  }

  TEST_CASE("random feasible problems are feasible") {
    const EnsembleProblem problem =
        random_feasible_problem(make_hellinger_loss(), 3, 5, 11);
    CHECK(problem.classifiers() == 3);
    CHECK(problem.examples() == 5);
    CHECK_FALSE(feasible_z_sample(problem, 3, 0).empty());
  }
}

}  // namespace
}  // namespace minimax_agg
