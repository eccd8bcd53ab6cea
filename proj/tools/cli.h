// Copyright 2026 The DivBS Authors
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

// Subcommands of the `divbs` tool. Each returns a process exit code:
//   0 success, 1 a requested check failed, 2 usage error, 3 data/contract error.

#ifndef DIVBS_TOOLS_CLI_H_
#define DIVBS_TOOLS_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "divbs/linalg.h"

namespace divbs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;

// `args` excludes the program name: {"select", "--features", ...}.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int CliSelect(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int CliOracleCheck(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int CliMetrics(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int CliToy(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int CliBench(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// n x d matrix of independent standard normal entries from mt19937_64(seed).
FeatureMatrix GaussianFeatures(std::size_t n, std::size_t d, std::uint64_t seed);

}  // namespace divbs::cli

#endif  // DIVBS_TOOLS_CLI_H_
