// Copyright 2026 The cvortho Authors
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

// Built-in self-test battery behind `cvortho verify`.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cvortho {

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
  double seconds;
};

std::vector<CheckResult> run_verify_battery();

/// One line per check plus a summary line.
void print_check_table(std::ostream& os, const std::vector<CheckResult>& rows);

}  // namespace cvortho
