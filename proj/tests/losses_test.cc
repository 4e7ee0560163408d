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
#include <numbers>
#include <string>
#include <vector>

#include "doctest.h"
#include "minimax_agg/errors.h"
#include "minimax_agg/losses.h"

namespace minimax_agg {
namespace {

using doctest::Approx;

std::vector<LossSpec> registry_losses() {
  return LossRegistry::builtin().entries();
}

// m = (k - 1000) / 100 for k = 0..2000, so the knots +-1, +-2 are hit
// exactly.
std::vector<double> margin_grid() {
  std::vector<double> m;
  for (int k = 0; k <= 2000; ++k) m.push_back((k - 1000) / 100.0);
  return m;
}

std::vector<double> interior_grid(int count) {
  std::vector<double> g;
  for (int k = 1; k <= count; ++k) g.push_back(-1.0 + 2.0 * k / (count + 1));
  return g;
}

bool near_knot(const LossSpec& loss, double m, double radius) {
  return std::abs(m - loss.gamma_lo) < radius ||
         std::abs(m - loss.gamma_hi) < radius;
}

TEST_SUITE("losses") {
  TEST_CASE("partial losses at documented points") {
    const auto& reg = LossRegistry::builtin();
    CHECK(partial_loss(reg.resolve("zero_one"), LabelSign::kPlus, 1.0) == 0.0);
    CHECK(partial_loss(reg.resolve("zero_one"), LabelSign::kMinus, 0.0) ==
          0.5);
    CHECK(partial_loss(reg.resolve("exponential"), LabelSign::kPlus, -1.0) ==
          Approx(std::exp(1.0)).epsilon(1e-15));
    CHECK_THROWS_AS(partial_loss(reg.resolve("log"), LabelSign::kPlus, 1.5),
                    DomainError);
    CHECK(std::isinf(partial_loss(reg.resolve("log"), LabelSign::kPlus, -1.0)));
  }

  TEST_CASE("score at documented points") {
    const auto& reg = LossRegistry::builtin();
    CHECK(score(reg.resolve("log"), 0.0) == 0.0);
    CHECK(score(make_cost_weighted_loss(0.25), 0.0) == Approx(-0.5));
    CHECK(score(reg.resolve("adaboost"), 0.0) == 0.0);
    CHECK(score(reg.resolve("log"), 1.0) ==
          std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(score(reg.resolve("square"), -1.01), DomainError);
  }

  TEST_CASE("score inverse") {
    const auto& reg = LossRegistry::builtin();
    CHECK(score_inverse(reg.resolve("log"), 0.0) == 0.0);
    CHECK(score_inverse(reg.resolve("square"), 3.0) == 1.0);
    const LossSpec ada = reg.resolve("adaboost");
    const double m = 2.0 * 0.6 / std::sqrt(1.0 - 0.36);
    CHECK(generic::score_inverse(ada, m) == Approx(0.6).epsilon(1e-12));
    CHECK(score_inverse(ada, m) == Approx(0.6).epsilon(1e-12));
  }

  TEST_CASE("potential well at documented points") {
    const auto& reg = LossRegistry::builtin();
    CHECK(potential_well(reg.resolve("zero_one"), 0.5) == 1.0);
    CHECK(potential_well(reg.resolve("exponential"), 0.0) == Approx(2.0));
    CHECK(potential_well(reg.resolve("log"), 0.0) ==
          Approx(2.0 * std::numbers::ln2).epsilon(1e-15));
  }

  TEST_CASE("potential well slope at documented points") {
    const auto& reg = LossRegistry::builtin();
    CHECK(potential_well_slope(reg.resolve("zero_one"), 0.5) == 0.0);
    CHECK(potential_well_slope(reg.resolve("log"), 0.0) == 0.0);
    for (const LossSpec& loss : registry_losses()) {
      if (std::isfinite(loss.gamma_hi)) {
        CHECK(potential_well_slope(loss, loss.gamma_hi + 10.0) == 1.0);
        CHECK(generic::potential_well_slope(loss, loss.gamma_hi + 10.0) == 1.0);
      } else {
        // Unbounded score: the slope only approaches 1.
        const double s = potential_well_slope(loss, 40.0);
        CHECK(s > 0.99);
        CHECK(s <= 1.0);
      }
    }
  }

  TEST_CASE("predictions at documented points") {
    const auto& reg = LossRegistry::builtin();
    CHECK(predict_one(make_cost_weighted_loss(0.25), 0.0) == 0.5);
    CHECK(predict_one(reg.resolve("hellinger"), 1.0) == 1.0);
    CHECK(predict_one(reg.resolve("hellinger"), 3.0) == 1.0);
    CHECK(predict_one(reg.resolve("hellinger"), -3.0) == -1.0);
    CHECK(predict_one(reg.resolve("adaboost"), 0.0) == 0.0);
  }

  TEST_CASE("expected loss") {
    const auto& reg = LossRegistry::builtin();
    const LossSpec zo = reg.resolve("zero_one");
    const std::vector<double> ones{1.0, 1.0};
    const std::vector<double> zeros{0.0, 0.0};
    const std::vector<double> some{0.3, -0.9};
    CHECK(expected_loss(zo, ones, ones) == 0.0);
    CHECK(expected_loss(zo, zeros, some) == Approx(0.5));
    const std::vector<double> one{1.0};
    const std::vector<double> zero{0.0};
    CHECK(expected_loss(reg.resolve("square"), one, zero) == 0.25);
    CHECK_THROWS_AS(expected_loss(zo, ones, one), DimensionError);
    const std::vector<double> bad{1.5, 0.0};
    CHECK_THROWS_AS(expected_loss(zo, bad, zeros), DomainError);
    // A perfectly confident log-loss prediction costs nothing when right.
    CHECK(expected_loss(reg.resolve("log"), ones, ones) == 0.0);
  }

  TEST_CASE("convexity condition") {
    for (const LossSpec& loss : registry_losses()) {
      CAPTURE(loss.canonical_name());
      CHECK(convexity_condition_check(loss, 101).condition_c_holds);
    }
    for (double c : {0.0, 0.1, 0.9, 1.0}) {
      CHECK(convexity_condition_check(make_cost_weighted_loss(c), 101)
                .condition_c_holds);
    }
    // l+ = (1 - g)^3 / 8 paired with a concave l- violates the condition.
    LossSpec bad = make_square_loss();
    bad.name = "bad";
    bad.partial_minus = [](double g) { return std::sqrt(1.0 + g); };
    bad.dpartial_minus = [](double g) { return 0.5 / std::sqrt(1.0 + g); };
    bad.partial_plus = [](double g) { return (1.0 - g) * (1.0 - g) * (1.0 - g) / 8; };
    bad.dpartial_plus = [](double g) { return -3.0 * (1.0 - g) * (1.0 - g) / 8; };
    const ConvexityReport report = convexity_condition_check(bad, 101);
    CHECK_FALSE(report.condition_c_holds);
    CHECK(report.worst_margin < 0.0);
  }

  TEST_CASE("monotone partial losses and score") {
    const auto grid = interior_grid(199);
    for (const LossSpec& loss : registry_losses()) {
      CAPTURE(loss.canonical_name());
      for (std::size_t k = 1; k < grid.size(); ++k) {
        CHECK(loss.partial_plus(grid[k - 1]) >= loss.partial_plus(grid[k]));
        CHECK(loss.partial_minus(grid[k - 1]) <= loss.partial_minus(grid[k]));
        CHECK(score(loss, grid[k - 1]) <= score(loss, grid[k]));
      }
      for (double g : grid) {
        CHECK(score(loss, g) >= loss.gamma_lo);
        CHECK(score(loss, g) <= loss.gamma_hi);
      }
    }
  }

  TEST_CASE("score round trip") {
    for (const LossSpec& loss : registry_losses()) {
      CAPTURE(loss.canonical_name());
      for (double g : interior_grid(199)) {
        const double m = score(loss, g);
        if (!std::isfinite(m)) continue;
        CHECK(std::abs(score_inverse(loss, m) - g) <= 1e-9);
        CHECK(std::abs(generic::score_inverse(loss, m) - g) <= 1e-9);
      }
    }
  }

  TEST_CASE("potential well is 1-Lipschitz, continuous and convex") {
    const auto m = margin_grid();
    for (const LossSpec& loss : registry_losses()) {
      CAPTURE(loss.canonical_name());
      for (std::size_t k = 1; k < m.size(); ++k) {
        const double a = potential_well(loss, m[k - 1]);
        const double b = potential_well(loss, m[k]);
        CHECK(std::abs(a - b) <= std::abs(m[k] - m[k - 1]) + 1e-9);
      }
      for (std::size_t k = 0; k + 2 < m.size(); ++k) {
        CHECK(potential_well(loss, m[k + 1]) <=
              0.5 * (potential_well(loss, m[k]) + potential_well(loss, m[k + 2])) +
                  1e-9);
      }
      for (double knot : {loss.gamma_lo, loss.gamma_hi}) {
        if (!std::isfinite(knot)) continue;
        const double left = potential_well(loss, std::nextafter(knot, -1e9));
        const double right = potential_well(loss, std::nextafter(knot, 1e9));
        CHECK(std::abs(left - right) <= 1e-9);
        CHECK(std::abs(generic::potential_well(loss, knot) -
                       potential_well(loss, knot)) <= 1e-9);
      }
    }
  }

  TEST_CASE("slope matches finite differences away from knots") {
    for (const LossSpec& loss : registry_losses()) {
      CAPTURE(loss.canonical_name());
      for (double m : margin_grid()) {
        if (near_knot(loss, m, 1e-3)) continue;
        const double h = 1e-6;
        const double fd =
            (potential_well(loss, m + h) - potential_well(loss, m - h)) / (2 * h);
        const double slope = potential_well_slope(loss, m);
        CAPTURE(m);
        CHECK(std::abs(slope - fd) <= 1e-5);
        CHECK(slope >= -1.0);
        CHECK(slope <= 1.0);
      }
    }
  }

  TEST_CASE("closed forms agree with the generic path") {
    std::vector<LossSpec> losses;
    for (const char* name : {"zero_one", "log", "square", "exponential",
                             "logistic", "hellinger", "adaboost"}) {
      losses.push_back(LossRegistry::builtin().resolve(name));
    }
    for (double c : {0.1, 0.25, 0.5, 0.9}) {
      losses.push_back(make_cost_weighted_loss(c));
    }
    for (const LossSpec& loss : losses) {
      CAPTURE(loss.canonical_name());
      REQUIRE(loss.has_closed_forms());
      for (double m : margin_grid()) {
        CAPTURE(m);
        CHECK(std::abs(potential_well(loss, m) -
                       generic::potential_well(loss, m)) <= 1e-9);
        CHECK(std::abs(potential_well_slope(loss, m) -
                       generic::potential_well_slope(loss, m)) <= 1e-9);
        CHECK(std::abs(predict_one(loss, m) -
                       generic::score_inverse(loss, m)) <= 1e-9);
      }
    }
  }

  TEST_CASE("predictions are nondecreasing in the margin") {
    const auto m = margin_grid();
    for (const LossSpec& loss : registry_losses()) {
      CAPTURE(loss.canonical_name());
      for (std::size_t k = 1; k < m.size(); ++k) {
        CHECK(predict_one(loss, m[k - 1]) <= predict_one(loss, m[k]));
      }
    }
  }

  TEST_CASE("symmetric losses") {
    for (const char* name : {"zero_one", "log", "square", "exponential",
                             "logistic", "hellinger", "adaboost"}) {
      const LossSpec loss = LossRegistry::builtin().resolve(name);
      CAPTURE(name);
      CHECK(loss.symmetric);
      for (double m : margin_grid()) {
        CHECK(std::abs(potential_well(loss, m) - potential_well(loss, -m)) <=
              1e-9);
        CHECK(std::abs(predict_one(loss, m) + predict_one(loss, -m)) <= 1e-9);
      }
    }
    CHECK_FALSE(make_cost_weighted_loss(0.25).symmetric);
  }

  TEST_CASE("absolute and hinge are zero_one scaled by two") {
    const LossSpec zo = LossRegistry::builtin().resolve("zero_one");
    for (const char* name : {"absolute", "hinge"}) {
      const LossSpec loss = LossRegistry::builtin().resolve(name);
      for (double m : margin_grid()) {
        CHECK(potential_well(loss, m) == 2.0 * potential_well(zo, m / 2.0));
        CHECK(predict_one(loss, m) == predict_one(zo, m / 2.0));
        CHECK(std::abs(generic::potential_well(loss, m) -
                       2.0 * potential_well(zo, m / 2.0)) <= 1e-9);
      }
    }
  }

  TEST_CASE("registry names and lookup") {
    const auto& reg = LossRegistry::builtin();
    CHECK(reg.names().size() == 8);
    CHECK(reg.aliases().size() == 2);
    CHECK(reg.entries().size() == 10);
    CHECK(reg.contains("cw:0.3"));
    CHECK_FALSE(reg.contains("cw:1.5"));
    CHECK_FALSE(reg.contains("sigmoid"));
    const LossSpec cw = reg.resolve("cw:0.25");
    CHECK(cw.parameter.value() == 0.25);
    CHECK(cw.canonical_name() == "cw:0.25");
    CHECK(reg.resolve("cw").parameter.value() == 0.5);
    CHECK_THROWS_AS(reg.resolve("cw:abc"), UnknownLossError);
    CHECK_THROWS_AS(reg.resolve("cw:1.5"), DomainError);
    try {
      reg.resolve("sigmoid");
      FAIL("expected an exception");
    } catch (const UnknownLossError& e) {
      const std::string what = e.what();
      for (const auto& name : reg.names()) {
        CHECK(what.find(name) != std::string::npos);
      }
    }
  }

  TEST_CASE("cw at the extreme costs") {
    for (double c : {0.0, 1.0}) {
      const LossSpec loss = make_cost_weighted_loss(c);
      for (double m : margin_grid()) {
        CHECK(std::abs(potential_well(loss, m) -
                       generic::potential_well(loss, m)) <= 1e-9);
        CHECK(std::abs(predict_one(loss, m) -
                       generic::score_inverse(loss, m)) <= 1e-9);
      }
    }
  }

  TEST_CASE("tabulated losses") {
    LossTable table;
    table.name = "square_table";
    for (int k = 0; k <= 40; ++k) {
      const double g = (k - 20) / 20.0;
      table.grid.push_back(g);
      table.partial_minus.push_back(0.25 * (1 + g) * (1 + g));
      table.partial_plus.push_back(0.25 * (1 - g) * (1 - g));
    }
    const LossSpec loss = make_tabulated_loss(table);
    const LossSpec square = make_square_loss();
    CHECK_FALSE(loss.has_closed_forms());
    CHECK(loss.gamma_lo == Approx(-1.0));
    CHECK(loss.gamma_hi == Approx(1.0));
    for (double m : margin_grid()) {
      CHECK(std::abs(potential_well(loss, m) - potential_well(square, m)) <
            1e-3);
      CHECK(std::abs(predict_one(loss, m) - predict_one(square, m)) < 1e-3);
    }

    LossTable short_table = table;
    short_table.grid = {-1.0, 0.0, 1.0};
    short_table.partial_minus = {0.0, 0.25, 1.0};
    short_table.partial_plus = {1.0, 0.25, 0.0};
    CHECK_THROWS_AS(make_tabulated_loss(short_table), DomainError);

    LossTable wiggly = table;
    wiggly.partial_plus[10] = 5.0;
    CHECK_THROWS_AS(make_tabulated_loss(wiggly), DomainError);

    LossTable ragged = table;
    ragged.partial_plus.pop_back();
    CHECK_THROWS_AS(make_tabulated_loss(ragged), DimensionError);

    LossTable narrow = table;
    narrow.grid.back() = 0.99;
    CHECK_THROWS_AS(make_tabulated_loss(narrow), DomainError);
  }

  TEST_CASE("nan margins are rejected") {
    const LossSpec loss = make_log_loss();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(potential_well(loss, nan), DomainError);
    CHECK_THROWS_AS(score_inverse(loss, nan), DomainError);
  }
}

}  // namespace
}  // namespace minimax_agg
