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

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include <math.h>  // pchip.hpp calls unqualified isnan

#include <boost/math/interpolators/pchip.hpp>

#include "minimax_agg/errors.h"
#include "minimax_agg/losses.h"

namespace minimax_agg {
namespace {

double clip(double x) { return std::clamp(x, -1.0, 1.0); }

double sign_slope(double m, double lo, double hi, double interior) {
  if (m < lo) return -1.0;
  if (m > hi) return 1.0;
  return interior;
}

LossSpec base_spec(std::string name, ScalarFunction minus, ScalarFunction plus,
                   ScalarFunction dminus, ScalarFunction dplus) {
  LossSpec spec;
  spec.name = std::move(name);
  spec.partial_minus = std::move(minus);
  spec.partial_plus = std::move(plus);
  spec.dpartial_minus = std::move(dminus);
  spec.dpartial_plus = std::move(dplus);
  spec.gamma_lo = spec.partial_minus(-1.0) - spec.partial_plus(-1.0);
  spec.gamma_hi = spec.partial_minus(1.0) - spec.partial_plus(1.0);
  return spec;
}

}  // namespace

LossSpec make_zero_one_loss() {
  LossSpec spec = base_spec(
      "zero_one", [](double g) { return 0.5 * (1.0 + g); },
      [](double g) { return 0.5 * (1.0 - g); }, [](double) { return 0.5; },
      [](double) { return -0.5; });
  spec.gamma_lo = -1.0;
  spec.gamma_hi = 1.0;
  spec.closed_score = [](double g) { return g; };
  spec.closed_partial_sum = [](double) { return 1.0; };
  spec.closed_psi = [](double m) { return std::max(1.0, std::abs(m)); };
  spec.closed_psi_slope = [](double m) { return sign_slope(m, -1.0, 1.0, 0.0); };
  spec.closed_predict = [](double m) { return clip(m); };
  spec.symmetric = true;
  return spec;
}

LossSpec make_log_loss() {
  const double ln2 = std::numbers::ln2;
  LossSpec spec = base_spec(
      "log", [ln2](double g) { return ln2 - std::log1p(-g); },
      [ln2](double g) { return ln2 - std::log1p(g); },
      [](double g) { return 1.0 / (1.0 - g); },
      [](double g) { return -1.0 / (1.0 + g); });
  spec.closed_score = [](double g) { return std::log1p(g) - std::log1p(-g); };
  // ln(1 + e^m) + ln(1 + e^-m), written without overflow.
  spec.closed_psi = [](double m) {
    const double a = std::abs(m);
    return a + 2.0 * std::log1p(std::exp(-a));
  };
  spec.closed_psi_slope = [](double m) { return std::tanh(0.5 * m); };
  // (1 - e^-m) / (1 + e^-m).
  spec.closed_predict = [](double m) { return std::tanh(0.5 * m); };
  spec.symmetric = true;
  return spec;
}

LossSpec make_square_loss() {
  LossSpec spec = base_spec(
      "square",
      [](double g) { return 0.25 * (1.0 + g) * (1.0 + g); },
      [](double g) { return 0.25 * (1.0 - g) * (1.0 - g); },
      [](double g) { return 0.5 * (1.0 + g); },
      [](double g) { return -0.5 * (1.0 - g); });
  spec.gamma_lo = -1.0;
  spec.gamma_hi = 1.0;
  spec.closed_score = [](double g) { return g; };
  spec.closed_psi = [](double m) {
    if (m <= -1.0) return -m;
    if (m >= 1.0) return m;
    return 0.5 * (m * m + 1.0);
  };
  spec.closed_psi_slope = [](double m) { return sign_slope(m, -1.0, 1.0, m); };
  spec.closed_predict = [](double m) { return clip(m); };
  spec.symmetric = true;
  return spec;
}

LossSpec make_cost_weighted_loss(double c) {
  if (!(c >= 0.0 && c <= 1.0)) {
    std::ostringstream msg;
    msg << "cost-weighted loss parameter c=" << c << " outside [0, 1]";
    throw DomainError(msg.str());
  }
  LossSpec spec = base_spec(
      "cw", [c](double g) { return c * (1.0 + g); },
      [c](double g) { return (1.0 - c) * (1.0 - g); },
      [c](double) { return c; }, [c](double) { return -(1.0 - c); });
  spec.parameter = c;
  const double lo = 2.0 * c - 2.0;
  const double hi = 2.0 * c;
  spec.gamma_lo = lo;
  spec.gamma_hi = hi;
  spec.closed_score = [c](double g) { return g + 2.0 * c - 1.0; };
  spec.closed_psi = [c, lo, hi](double m) {
    if (m <= lo) return -m;
    if (m >= hi) return m;
    return (2.0 * c - 1.0) * m + 4.0 * c * (1.0 - c);
  };
  spec.closed_psi_slope = [c, lo, hi](double m) {
    return sign_slope(m, lo, hi, 2.0 * c - 1.0);
  };
  spec.closed_predict = [c](double m) { return clip(m + 1.0 - 2.0 * c); };
  spec.symmetric = (c == 0.5);
  return spec;
}

LossSpec make_exponential_loss() {
  LossSpec spec = base_spec(
      "exponential", [](double g) { return std::exp(g); },
      [](double g) { return std::exp(-g); }, [](double g) { return std::exp(g); },
      [](double g) { return -std::exp(-g); });
  const double knot = std::exp(1.0) - std::exp(-1.0);
  const double tail = 2.0 / std::numbers::e;
  spec.gamma_lo = -knot;
  spec.gamma_hi = knot;
  spec.closed_score = [](double g) { return std::exp(g) - std::exp(-g); };
  spec.closed_psi = [knot, tail](double m) {
    if (m <= -knot) return -m + tail;
    if (m >= knot) return m + tail;
    return std::sqrt(4.0 + m * m);
  };
  spec.closed_psi_slope = [knot](double m) {
    return sign_slope(m, -knot, knot, m / std::sqrt(4.0 + m * m));
  };
  // ln(m/2 + sqrt(1 + m^2/4)) is asinh(m/2).
  spec.closed_predict = [](double m) { return clip(std::asinh(0.5 * m)); };
  spec.symmetric = true;
  return spec;
}

LossSpec make_logistic_loss() {
  LossSpec spec = base_spec(
      "logistic", [](double g) { return std::log1p(std::exp(g)); },
      [](double g) { return std::log1p(std::exp(-g)); },
      [](double g) { return 1.0 / (1.0 + std::exp(-g)); },
      [](double g) { return -1.0 / (1.0 + std::exp(g)); });
  spec.gamma_lo = -1.0;
  spec.gamma_hi = 1.0;
  const double tail = 2.0 * std::log1p(1.0 / std::numbers::e);
  spec.closed_score = [](double g) { return g; };
  spec.closed_psi = [tail](double m) {
    if (m <= -1.0) return -m + tail;
    if (m >= 1.0) return m + tail;
    return std::log1p(std::exp(m)) + std::log1p(std::exp(-m));
  };
  spec.closed_psi_slope = [](double m) {
    return sign_slope(m, -1.0, 1.0, std::tanh(0.5 * m));
  };
  spec.closed_predict = [](double m) { return clip(m); };
  spec.symmetric = true;
  return spec;
}

LossSpec make_hellinger_loss() {
  LossSpec spec = base_spec(
      "hellinger", [](double g) { return 1.0 - std::sqrt(0.5 * (1.0 - g)); },
      [](double g) { return 1.0 - std::sqrt(0.5 * (1.0 + g)); },
      [](double g) { return 0.25 / std::sqrt(0.5 * (1.0 - g)); },
      [](double g) { return -0.25 / std::sqrt(0.5 * (1.0 + g)); });
  spec.gamma_lo = -1.0;
  spec.gamma_hi = 1.0;
  spec.closed_score = [](double g) {
    return std::sqrt(0.5 * (1.0 + g)) - std::sqrt(0.5 * (1.0 - g));
  };
  // 2 - ((1 - m s)/2)^1/2 - ((1 + m s)/2)^1/2 with s = sqrt(2 - m^2). The
  // two roots are (s -+ m)/2, which avoids cancellation as |m| -> 1.
  spec.closed_psi = [](double m) {
    if (m <= -1.0) return -m;
    if (m >= 1.0) return m;
    const double s = std::sqrt(2.0 - m * m);
    return 2.0 - 0.5 * (s - m) - 0.5 * (s + m);
  };
  spec.closed_psi_slope = [](double m) {
    return sign_slope(m, -1.0, 1.0, m / std::sqrt(2.0 - m * m));
  };
  spec.closed_predict = [](double m) {
    if (std::abs(m) > 1.0) return m > 0.0 ? 1.0 : -1.0;
    return m * std::sqrt(2.0 - m * m);
  };
  spec.symmetric = true;
  return spec;
}

LossSpec make_adaboost_loss() {
  LossSpec spec = base_spec(
      "adaboost", [](double g) { return std::sqrt((1.0 + g) / (1.0 - g)); },
      [](double g) { return std::sqrt((1.0 - g) / (1.0 + g)); },
      [](double g) { return 1.0 / ((1.0 - g) * std::sqrt(1.0 - g * g)); },
      [](double g) { return -1.0 / ((1.0 + g) * std::sqrt(1.0 - g * g)); });
  spec.closed_score = [](double g) { return 2.0 * g / std::sqrt(1.0 - g * g); };
  spec.closed_psi = [](double m) {
    const double s = std::sqrt(m * m + 4.0);
    // s + m and s - m, each computed without cancellation.
    const double plus = m >= 0.0 ? s + m : 4.0 / (s - m);
    const double minus = m >= 0.0 ? 4.0 / (s + m) : s - m;
    return std::sqrt(plus / minus) + std::sqrt(minus / plus);
  };
  spec.closed_psi_slope = [](double m) { return m / std::sqrt(m * m + 4.0); };
  spec.closed_predict = [](double m) { return m / std::sqrt(m * m + 4.0); };
  spec.symmetric = true;
  return spec;
}

LossSpec make_absolute_loss() {
  LossSpec spec = base_spec(
      "absolute", [](double g) { return 1.0 + g; },
      [](double g) { return 1.0 - g; }, [](double) { return 1.0; },
      [](double) { return -1.0; });
  spec.gamma_lo = -2.0;
  spec.gamma_hi = 2.0;
  spec.closed_score = [](double g) { return 2.0 * g; };
  spec.closed_partial_sum = [](double) { return 2.0; };
  spec.closed_psi = [](double m) { return std::max(2.0, std::abs(m)); };
  spec.closed_psi_slope = [](double m) { return sign_slope(m, -2.0, 2.0, 0.0); };
  spec.closed_predict = [](double m) { return clip(0.5 * m); };
  spec.symmetric = true;
  return spec;
}

LossSpec make_hinge_loss() {
  // On [-1, 1] the hinge kink sits at the endpoints, so the partial losses
  // coincide with the absolute loss.
  LossSpec spec = make_absolute_loss();
  spec.name = "hinge";
  return spec;
}

LossSpec make_tabulated_loss(LossTable table) {
  const auto& grid = table.grid;
  if (grid.size() < 4) {
    throw DomainError("tabulated loss '" + table.name +
                      "' needs at least four grid points");
  }
  if (table.partial_minus.size() != grid.size() ||
      table.partial_plus.size() != grid.size()) {
    throw DimensionError("tabulated loss '" + table.name +
                         "': value columns differ in length from the grid");
  }
  if (grid.front() != -1.0 || grid.back() != 1.0) {
    throw DomainError("tabulated loss '" + table.name +
                      "': grid must run from -1 to 1");
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!std::isfinite(table.partial_minus[k]) ||
        !std::isfinite(table.partial_plus[k])) {
      throw DomainError("tabulated loss '" + table.name +
                        "': non-finite value at grid index " +
                        std::to_string(k));
    }
    if (k == 0) continue;
    if (!(grid[k] > grid[k - 1])) {
      throw DomainError("tabulated loss '" + table.name +
                        "': grid not strictly increasing at index " +
                        std::to_string(k));
    }
    if (table.partial_plus[k] > table.partial_plus[k - 1] ||
        table.partial_minus[k] < table.partial_minus[k - 1]) {
      throw DomainError("tabulated loss '" + table.name +
                        "': partial losses not monotone at index " +
                        std::to_string(k));
    }
  }
  using Pchip = boost::math::interpolators::pchip<std::vector<double>>;
  auto minus = std::make_shared<Pchip>(std::vector<double>(grid),
                                       std::vector<double>(table.partial_minus));
  auto plus = std::make_shared<Pchip>(std::vector<double>(grid),
                                      std::vector<double>(table.partial_plus));
  LossSpec spec = base_spec(
      table.name, [minus](double g) { return (*minus)(g); },
      [plus](double g) { return (*plus)(g); },
      [minus](double g) { return minus->prime(g); },
      [plus](double g) { return plus->prime(g); });
  spec.table = std::move(table);
  return spec;
}

LossRegistry::LossRegistry()
    : names_{"zero_one", "log",      "square",    "cw",
             "exponential", "logistic", "hellinger", "adaboost"},
      aliases_{{"absolute", "zero_one scaled by 2"},
               {"hinge", "zero_one scaled by 2"}} {}

const LossRegistry& LossRegistry::builtin() {
  static const LossRegistry registry;
  return registry;
}

bool LossRegistry::contains(std::string_view name) const {
  try {
    resolve(name);
    return true;
  } catch (const Error&) {
    return false;
  }
}

LossSpec LossRegistry::resolve(std::string_view name) const {
  if (name == "zero_one") return make_zero_one_loss();
  if (name == "log") return make_log_loss();
  if (name == "square") return make_square_loss();
  if (name == "cw") return make_cost_weighted_loss(0.5);
  if (name.starts_with("cw:")) {
    const std::string text(name.substr(3));
    std::size_t used = 0;
    double c = 0.0;
    try {
      c = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size()) {
      throw UnknownLossError("cannot parse cost parameter in '" +
                             std::string(name) + "'; expected cw:<c>");
    }
    return make_cost_weighted_loss(c);
  }
  if (name == "exponential") return make_exponential_loss();
  if (name == "logistic") return make_logistic_loss();
  if (name == "hellinger") return make_hellinger_loss();
  if (name == "adaboost") return make_adaboost_loss();
  if (name == "absolute") return make_absolute_loss();
  if (name == "hinge") return make_hinge_loss();
  throw UnknownLossError("unknown loss '" + std::string(name) +
                         "'; known losses: " + listing());
}

std::vector<LossSpec> LossRegistry::entries() const {
  std::vector<LossSpec> out;
  for (const auto& name : names_) out.push_back(resolve(name));
  for (const auto& [alias, target] : aliases_) out.push_back(resolve(alias));
  return out;
}

std::string LossRegistry::listing() const {
  std::ostringstream out;
  for (std::size_t k = 0; k < names_.size(); ++k) {
    if (k) out << ", ";
    out << names_[k];
  }
  out << " (cw takes cw:<c>)";
  for (const auto& [alias, target] : aliases_) out << ", " << alias;
  return out.str();
}

}  // namespace minimax_agg
