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

#ifndef AMPQST_MIFGD_HPP
#define AMPQST_MIFGD_HPP

#include <cstdint>
#include <optional>

#include "ampqst/pauli.hpp"
#include "ampqst/solver_status.hpp"
#include "ampqst/states.hpp"

namespace ampqst {

/// Momentum used when none is configured.
inline constexpr double kDefaultMomentum = 0.75;

struct MifgdConfig {
  double eta = 0.001;
  /// Momentum; kDefaultMomentum when unset.
  std::optional<double> mu;
  int rank = 5;
  int max_iter = 1000;
  /// Stop once ||rho_t - rho_{t-1}||_F / ||rho_t||_F falls below this.
  double rel_tol = 1e-4;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on out-of-range values; `dim` bounds the
  /// rank.
  void validate(std::size_t dim) const;
};

/// The momentum a run will use.  Throws std::invalid_argument for mu < 0.
double momentum_schedule(const MifgdConfig& config);

struct MifgdResult {
  /// U U^dagger; PSD with rank <= config.rank but not trace-normalized.
  HermitianMatrix estimate;
  /// d x r factor U.
  ComplexMatrix factor;
  SolverStatus status = SolverStatus::kMaxIterations;
  int iterations = 0;
};

/// Momentum-accelerated factored gradient descent on rho = U U^dagger:
///   U_{t+1} = Z_t - eta A^dagger(A(Z_t Z_t^dagger) - y) Z_t,
///   Z_{t+1} = U_{t+1} + mu (U_{t+1} - U_t),
/// from U_0 = Z_0 with CN(0, 1/d) entries.  Runs on the unnormalized map; a
/// normalized map is converted, with `y` taken on that map's scale.  A
/// non-finite factor ends the run with status kDiverged and the last finite
/// estimate.
MifgdResult run_mifgd(const SensingMap& map, const RealVector& y, const MifgdConfig& config);

}  // namespace ampqst

#endif  // AMPQST_MIFGD_HPP
