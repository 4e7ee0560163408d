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


#include "minimax_agg/oracle.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <variant>

#include "minimax_agg/errors.h"
#include "minimax_agg/numeric.h"

namespace minimax_agg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kVertexSlack = 1e-12;

// c * value with 0 * inf taken as 0.
double times(double c, double value) { return c == 0.0 ? 0.0 : c * value; }

// Solves the n x n system in place by Gaussian elimination with partial
// pivoting. Returns false when a pivot is negligible.
bool solve_small(std::vector<double>& a, std::vector<double>& rhs,
                 std::size_t n) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    }
    if (std::abs(a[pivot * n + col]) < 1e-12) return false;
    if (pivot != col) {
      for (std::size_t k = 0; k < n; ++k) {
        std::swap(a[col * n + k], a[pivot * n + k]);
      }
      std::swap(rhs[col], rhs[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = a[r * n + col] / a[col * n + col];
      for (std::size_t k = col; k < n; ++k) a[r * n + k] -= factor * a[col * n + k];
      rhs[r] -= factor * rhs[col];
    }
  }
  for (std::size_t r = n; r-- > 0;) {
    double s = rhs[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= a[r * n + k] * rhs[k];
    rhs[r] = s / a[r * n + r];
  }
  return true;
}

bool in_box(std::span<const double> z, double slack) {
  for (double v : z) {
    if (!(v >= -1.0 - slack && v <= 1.0 + slack)) return false;
  }
  return true;
}

// Vertices of {z in [-1, 1]^n : rows z >= rhs}.
std::vector<std::vector<double>> enumerate_vertices(const ConstraintRows& cr,
                                                    std::size_t n) {
  ConstraintRows all = cr;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> up(n, 0.0), down(n, 0.0);
    up[j] = 1.0;
    down[j] = -1.0;
    all.rows.push_back(up);
    all.rhs.push_back(-1.0);
    all.rows.push_back(down);
    all.rhs.push_back(-1.0);
  }
  const std::size_t m = all.rows.size();
  std::vector<std::vector<double>> vertices;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != n) continue;
    std::vector<double> a(n * n);
    std::vector<double> rhs(n);
    std::size_t r = 0;
    for (std::size_t k = 0; k < m; ++k) {
      if (!(mask & (1u << k))) continue;
      std::copy(all.rows[k].begin(), all.rows[k].end(), a.begin() + r * n);
      rhs[r++] = all.rhs[k];
    }
    if (!solve_small(a, rhs, n)) continue;
    if (all.satisfied_by(rhs, kVertexSlack)) vertices.push_back(rhs);
  }
  return vertices;
}

void check_sizes(const EnsembleProblem& problem, const GridSpec& grid) {
  if (problem.examples() > grid.max_n || problem.classifiers() > grid.max_p) {
    std::ostringstream msg;
    msg << "grid oracle handles n <= " << grid.max_n << " and p <= "
        << grid.max_p << "; got n = " << problem.examples()
        << ", p = " << problem.classifiers();
    throw DimensionError(msg.str());
  }
}

struct Sweep {
  double value = kInf;
  std::size_t k[3] = {0, 0, 0};
};

// min over index tuples of max over vertices of sum_j table[v][j][k_j].
// table is laid out as ((v * 3 + j) * K + k); axes beyond n have size 1.
Sweep sweep(const std::vector<double>& table, std::size_t vertices,
            const std::size_t sizes[3], std::size_t stride, int threads) {
  std::vector<Sweep> per_first(sizes[0]);
  parallel_blocks(sizes[0], 1, threads,
                  [&](std::size_t, std::size_t k0, std::size_t) {
                    Sweep local;
                    std::vector<double> partial(vertices);
                    for (std::size_t k1 = 0; k1 < sizes[1]; ++k1) {
                      for (std::size_t v = 0; v < vertices; ++v) {
                        partial[v] = table[(v * 3 + 0) * stride + k0] +
                                     table[(v * 3 + 1) * stride + k1];
                      }
                      for (std::size_t k2 = 0; k2 < sizes[2]; ++k2) {
                        double worst = -kInf;
                        for (std::size_t v = 0; v < vertices; ++v) {
                          worst = std::max(
                              worst,
                              partial[v] + table[(v * 3 + 2) * stride + k2]);
                        }
                        if (worst < local.value) {
                          local.value = worst;
                          local.k[0] = k0;
                          local.k[1] = k1;
                          local.k[2] = k2;
                        }
                      }
                    }
                    per_first[k0] = local;
                  });
  Sweep best;
  for (const Sweep& s : per_first) {
    if (s.value < best.value) best = s;
  }
  return best;
}

}  // namespace

void GridSpec::validate() const {
  if (resolution < 11 || resolution % 2 == 0) {
    throw DomainError("grid resolution must be odd and at least 11");
  }
  if (max_n > kHardLimit || max_p > kHardLimit || max_n == 0 || max_p == 0) {
    throw DomainError("grid oracle limits must lie in [1, 3]");
  }
}

bool ConstraintRows::satisfied_by(std::span<const double> z,
                                  double slack) const {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) s += rows[i][j] * z[j];
    if (!(s >= rhs[i] - slack)) return false;
  }
  return true;
}

ConstraintRows constraint_rows(const EnsembleProblem& problem) {
  const std::size_t p = problem.classifiers();
  const std::size_t n = problem.examples();
  const double inv_n = 1.0 / static_cast<double>(n);
  ConstraintRows out;
  const auto* u = std::get_if<UncertaintyVariant>(&problem.variant());
  const double eps = u ? u->epsilon : 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    std::vector<double> row(n);
    for (std::size_t j = 0; j < n; ++j) row[j] = problem.matrix()(i, j) * inv_n;
    out.rows.push_back(row);
    out.rhs.push_back(problem.b()[i] - eps);
    if (u) {
      for (double& v : row) v = -v;
      out.rows.push_back(row);
      out.rhs.push_back(-problem.b()[i] - eps);
    }
  }
  return out;
}

GridResult grid_minimax(const EnsembleProblem& problem, const GridSpec& grid) {
  grid.validate();
  if (!std::holds_alternative<PlainVariant>(problem.variant()) &&
      !std::holds_alternative<GeneralLossVariant>(problem.variant())) {
    throw DomainError("grid oracle supports the plain and general variants");
  }
  check_sizes(problem, grid);
  const std::size_t n = problem.examples();
  const auto vertices = enumerate_vertices(constraint_rows(problem), n);
  if (vertices.empty()) {
    throw InfeasibleError("no z in [-1, 1]^n satisfies F z / n >= b");
  }

  const LossSpec& loss = problem.loss();
  const std::size_t K = grid.resolution;
  const double half = static_cast<double>(K - 1);
  std::vector<double> g(K), lp(K), lm(K);
  for (std::size_t k = 0; k < K; ++k) {
    // (2k - (K - 1)) / (K - 1) puts 0 and +-1 exactly on the grid.
    g[k] = (2.0 * static_cast<double>(k) - half) / half;
    lp[k] = partial_loss(loss, LabelSign::kPlus, g[k]);
    lm[k] = partial_loss(loss, LabelSign::kMinus, g[k]);
  }

  const std::size_t V = vertices.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> upper_table(V * 3 * K, 0.0);
  std::vector<double> lower_table(V * 3 * K, 0.0);
  for (std::size_t v = 0; v < V; ++v) {
    for (std::size_t j = 0; j < n; ++j) {
      const double cp = 0.5 * (1.0 + vertices[v][j]);
      const double cm = 0.5 * (1.0 - vertices[v][j]);
      for (std::size_t k = 0; k < K; ++k) {
        upper_table[(v * 3 + j) * K + k] =
            inv_n * (times(cp, lp[k]) + times(cm, lm[k]));
        // On [g_k, g_k+1]: l+ >= l+(g_k+1) and l- >= l-(g_k).
        if (k + 1 < K) {
          lower_table[(v * 3 + j) * K + k] =
              inv_n * (times(cp, lp[k + 1]) + times(cm, lm[k]));
        }
      }
    }
  }
  std::size_t upper_sizes[3] = {1, 1, 1};
  std::size_t lower_sizes[3] = {1, 1, 1};
  for (std::size_t j = 0; j < n; ++j) {
    upper_sizes[j] = K;
    lower_sizes[j] = K - 1;
  }
  const Sweep up = sweep(upper_table, V, upper_sizes, K, problem.threads());
  const Sweep low = sweep(lower_table, V, lower_sizes, K, problem.threads());

  GridResult out;
  out.value = up.value;
  out.lower = low.value;
  out.tolerance = up.value - low.value + 1e-9;
  for (std::size_t j = 0; j < n; ++j) out.g_grid.push_back(g[up.k[j]]);
  return out;
}

std::vector<std::vector<double>> feasible_z_sample(
    const EnsembleProblem& problem, std::size_t count, std::uint64_t seed) {
  const std::size_t n = problem.examples();
  const ConstraintRows cr = constraint_rows(problem);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<std::vector<double>> out;
  std::vector<double> z(n);
  constexpr std::size_t kMaxDraws = 1000000;
  for (std::size_t draw = 0; draw < kMaxDraws && out.size() < count; ++draw) {
    for (double& v : z) v = unit(rng);
    if (cr.satisfied_by(z, 0.0)) out.push_back(z);
  }
  if (out.size() < count) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < problem.classifiers(); ++i) {
      std::vector<double> h = problem.matrix().classifier(i);
      if (in_box(h, 0.0) && cr.satisfied_by(h, 0.0)) rows.push_back(h);
    }
    for (std::size_t k = 0; !rows.empty() && out.size() < count; ++k) {
      out.push_back(rows[k % rows.size()]);
    }
  }
  if (out.empty()) throw InfeasibleError("no feasible sample found");
  return out;
}

double pointwise_min_loss(const LossSpec& loss, double z) {
  constexpr int kHalf = 1000;
  auto f = [&](double g) { return pointwise_loss(loss, z, g); };
  double best = std::min(f(-1.0), f(1.0));
  int best_k = 0;
  double best_scan = kInf;
  for (int k = 0; k <= 2 * kHalf; ++k) {
    const double v = f(static_cast<double>(k - kHalf) / kHalf);
    if (v < best_scan) {
      best_scan = v;
      best_k = k;
    }
  }
  best = std::min(best, best_scan);
  double lo = static_cast<double>(std::max(best_k - 1, 0) - kHalf) / kHalf;
  double hi = static_cast<double>(std::min(best_k + 1, 2 * kHalf) - kHalf) / kHalf;
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = f(x2);
    }
  }
  return std::min({best, f1, f2});
}

SandwichResult sandwich_check(const EnsembleProblem& problem,
                              const SolveReport& report,
                              std::span<const double> z0,
                              const ConvexMinimizer& minimizer) {
  const std::size_t n = problem.examples();
  if (z0.size() != n) throw DimensionError("z0 must have one entry per example");
  if (!in_box(z0, 1e-9) || !constraint_rows(problem).satisfied_by(z0, 1e-9)) {
    throw DomainError("z0 violates the constraints");
  }
  const auto* w = std::get_if<WeightedVariant>(&problem.variant());
  std::vector<double> mins(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double weight = w ? w->r[j] : 1.0;
    mins[j] = weight == 0.0 ? 0.0
                            : weight * pointwise_min_loss(problem.loss(), z0[j]);
  }
  SandwichResult out;
  out.lower = pairwise_sum(mins) / static_cast<double>(n);
  const PredictionVector g = predict(problem, report.sigma_star);
  out.upper = adversary_best_response(problem, g.g, minimizer);
  out.value = report.game_value;
  out.pass = out.lower <= out.value + 1e-6 && out.value <= out.upper + 1e-6;
  return out;
}

ObservationResult observation_check(const EnsembleProblem& problem,
                                    std::span<const double> sigma0,
                                    const ConvexMinimizer& minimizer) {
  ObservationResult out;
  const PredictionVector g = predict(problem, sigma0);
  out.best_response = adversary_best_response(problem, g.g, minimizer);
  out.half_slack = 0.5 * slack(problem, sigma0);
  out.pass = out.best_response <= out.half_slack + 1e-6;
  return out;
}

PropositionResult proposition_check(const EnsembleProblem& problem,
                                    const SolveReport& report) {
  const auto* general = std::get_if<GeneralLossVariant>(&problem.variant());
  if (!general) {
    throw DomainError("proposition check needs a general-loss problem");
  }
  PropositionResult out;
  out.value = report.game_value;
  out.min_loss_bound = *std::min_element(general->loss_bounds.begin(),
                                         general->loss_bounds.end());
  out.pass = out.value <= out.min_loss_bound + 1e-6;
  return out;
}

EnsembleProblem random_feasible_problem(const LossSpec& loss,
                                        std::size_t classifiers,
                                        std::size_t examples,
                                        std::uint64_t seed, double margin) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  EnsembleMatrix matrix(classifiers, examples);
  for (std::size_t j = 0; j < examples; ++j) {
    for (std::size_t i = 0; i < classifiers; ++i) matrix.at(i, j) = unit(rng);
  }
  std::vector<double> z(examples);
  for (double& v : z) v = unit(rng);
  std::vector<double> b(classifiers);
  for (std::size_t i = 0; i < classifiers; ++i) {
    const std::vector<double> row = matrix.classifier(i);
    b[i] = pairwise_dot(row, z) / static_cast<double>(examples) - margin;
  }
  return EnsembleProblem::plain(std::move(matrix), std::move(b), loss);
}

}  // namespace minimax_agg
