// Copyright 2026 The cvrealign Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace cvrealign {

enum class Status { entangled, separable, unresolved };

inline std::string_view to_string(Status s) {
  switch (s) {
    case Status::entangled: return "entangled";
    case Status::separable: return "separable";
    case Status::unresolved: return "unresolved";
  }
  return "unresolved";
}

/// Uniform result of every criterion: detected iff lhs > rhs.
struct CriterionVerdict {
  double lhs = 0.0;
  double rhs = 0.0;
  bool detected = false;
  double margin = 0.0;
  Status status = Status::unresolved;
  std::map<std::string, double> diagnostics;
  std::vector<std::string> flags;

  static CriterionVerdict compare(double lhs, double rhs) {
    CriterionVerdict v;
    v.lhs = lhs;
    v.rhs = rhs;
    v.margin = lhs - rhs;
    v.detected = v.margin > 0.0;
    v.status = v.detected ? Status::entangled : Status::unresolved;
    return v;
  }
};

}  // namespace cvrealign
