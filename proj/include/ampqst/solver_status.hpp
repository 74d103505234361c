// Copyright 2026 The ampqst Authors
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

#ifndef AMPQST_SOLVER_STATUS_HPP
#define AMPQST_SOLVER_STATUS_HPP

#include <string_view>

namespace ampqst {

/// How an iterative reconstruction ended.
enum class SolverStatus {
  kMaxIterations,  // ran the full iteration budget
  kConverged,      // stopping rule met
  kDiverged,       // non-finite values or runaway residual
};

inline std::string_view to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::kMaxIterations:
      return "max_iterations";
    case SolverStatus::kConverged:
      return "converged";
    default:
      return "diverged";
  }
}

}  // namespace ampqst

#endif  // AMPQST_SOLVER_STATUS_HPP
