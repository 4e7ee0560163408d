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


#ifndef MINIMAX_AGG_CLI_H_
#define MINIMAX_AGG_CLI_H_

#include <ostream>

namespace minimax_agg {

// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitSuccess = 0,
  kExitUsage = 2,       // bad arguments, unparseable or inconsistent input
  kExitInfeasible = 3,  // the constraint set appears empty
  kExitCheckFailed = 4, // a certification property failed
  kExitNumeric = 5,     // non-finite values or other internal failure
};

// Runs the command line; argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace minimax_agg

#endif  // MINIMAX_AGG_CLI_H_
