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

#include "minimax_agg/numeric.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "minimax_agg/errors.h"

namespace minimax_agg {
namespace {

constexpr std::size_t kPairwiseBase = 8;

double pairwise_sum_impl(const double* v, std::size_t n) {
  if (n <= kPairwiseBase) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_impl(v, half) + pairwise_sum_impl(v + half, n - half);
}

double pairwise_dot_impl(const double* a, const double* b, std::size_t n) {
  if (n <= kPairwiseBase) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_dot_impl(a, b, half) +
         pairwise_dot_impl(a + half, b + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  return pairwise_sum_impl(values.data(), values.size());
}

double pairwise_dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionError("pairwise_dot: length mismatch");
  }
  return pairwise_dot_impl(a.data(), b.data(), a.size());
}

void parallel_blocks(std::size_t count, std::size_t block_size, int threads,
                     const std::function<void(std::size_t, std::size_t,
                                              std::size_t)>& body) {
  if (count == 0) return;
  block_size = std::max<std::size_t>(block_size, 1);
  const std::size_t blocks = (count + block_size - 1) / block_size;
  auto run_block = [&](std::size_t k) {
    const std::size_t begin = k * block_size;
    body(k, begin, std::min(count, begin + block_size));
  };
  const std::size_t workers =
      std::min<std::size_t>(blocks, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t k = 0; k < blocks; ++k) run_block(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        try {
          for (std::size_t k = next++; k < blocks; k = next++) run_block(k);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = blocks;
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace minimax_agg
