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

#ifndef MINIMAX_AGG_NUMERIC_H_
#define MINIMAX_AGG_NUMERIC_H_

#include <cstddef>
#include <functional>
#include <span>

namespace minimax_agg {

// Pairwise (cascade) summation. The association order depends only on the
// length of the input, so results are reproducible.
double pairwise_sum(std::span<const double> values);

// Pairwise-summed inner product of two equal-length vectors.
double pairwise_dot(std::span<const double> a, std::span<const double> b);

// Runs body(begin, end) over [0, count) split into fixed blocks of
// block_size. Blocks are distributed across up to `threads` workers; the
// block boundaries never depend on the thread count.
void parallel_blocks(std::size_t count, std::size_t block_size, int threads,
                     const std::function<void(std::size_t, std::size_t,
                                              std::size_t)>& body);

}  // namespace minimax_agg

#endif  // MINIMAX_AGG_NUMERIC_H_
