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


#ifndef MINIMAX_AGG_SOLVE_REPORT_H_
#define MINIMAX_AGG_SOLVE_REPORT_H_

#include <cstddef>
#include <vector>

namespace minimax_agg {

// Outcome of minimizing a slack function.
struct SolveReport {
  std::vector<double> sigma_star;
  double slack_star = 0.0;
  double game_value = 0.0;  // slack_star / 2
  std::size_t iters_used = 0;
  bool converged = false;
  bool infeasible_suspected = false;
  std::vector<double> history;
};

}  // namespace minimax_agg

#endif  // MINIMAX_AGG_SOLVE_REPORT_H_
