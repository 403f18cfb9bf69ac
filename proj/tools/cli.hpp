// Copyright 2026 The hazboost Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HAZBOOST_TOOLS_CLI_HPP_
#define HAZBOOST_TOOLS_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace hazboost::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kValidationError = 1;
inline constexpr int kUsageError = 2;

// Runs the command line `args` (without the program name). CSV and data
// output not sent to a file goes to `out`; usage text, reports and log
// lines go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);
int run(int argc, const char* const* argv);

// Expands `--config FILE` (key=value lines, '#' comments) into `--key=value`
// arguments placed after the subcommand name, skipping keys that are
// already given on the command line.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

}  // namespace hazboost::cli

#endif  // HAZBOOST_TOOLS_CLI_HPP_
