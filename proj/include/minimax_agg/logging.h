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


#ifndef MINIMAX_AGG_LOGGING_H_
#define MINIMAX_AGG_LOGGING_H_

#include <spdlog/logger.h>

namespace minimax_agg {

// The library logger, writing to stderr. Its level is read once from the
// MINIMAX_AGG_LOG environment variable (trace, debug, info, warn, error,
// off); the default is warn.
spdlog::logger& log();

}  // namespace minimax_agg

#endif  // MINIMAX_AGG_LOGGING_H_
