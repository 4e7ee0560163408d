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


#ifndef MINIMAX_AGG_CONVEX_H_
#define MINIMAX_AGG_CONVEX_H_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace minimax_agg {

// A convex objective f(x) + l1_weight * ||x||_1 over R^dim, or over the
// nonnegative orthant when nonneg is set. eval returns f(x) and writes a
// subgradient of f into grad; the l1 term is handled by the minimizer.
struct ConvexObjective {
  std::size_t dim = 0;
  bool nonneg = true;
  double l1_weight = 0.0;
  std::function<double(std::span<const double> x, std::span<double> grad)>
      eval;
  // Initial step length; 1 / (Lipschitz constant of f) is a good choice.
  double step_scale = 1.0;
};

struct MinimizeResult {
  std::vector<double> argmin;
  double value = 0.0;  // includes the l1 term
  std::size_t iters = 0;
  bool converged = false;
  bool unbounded_suspected = false;
  std::vector<double> history;  // best value at the end of each window
};

using ConvexMinimizer = std::function<MinimizeResult(const ConvexObjective&)>;

}  // namespace minimax_agg

#endif  // MINIMAX_AGG_CONVEX_H_
