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

// JSON renderings of library results, shared by every subcommand.

#ifndef DIVBS_TOOLS_REPORTS_H_
#define DIVBS_TOOLS_REPORTS_H_

#include "json.hpp"

#include "divbs/metrics.h"
#include "divbs/selectors.h"
#include "divbs/toy_lab.h"

namespace divbs::cli {

nlohmann::json SelectionToJson(const SelectionResult& result);
nlohmann::json DiversityToJson(const DiversityReport& report);
nlohmann::json ToyReportToJson(const toy::ToyRunReport& report, const toy::ToyRunConfig& cfg);

}  // namespace divbs::cli

#endif  // DIVBS_TOOLS_REPORTS_H_
