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

#include "ampqst/mifgd.hpp"

#include <cmath>
#include <stdexcept>

namespace ampqst {

namespace {

HermitianMatrix gram(int num_qubits, const ComplexMatrix& u) {
  return HermitianMatrix::symmetrized(num_qubits, u * u.adjoint());
}

}  // namespace

void MifgdConfig::validate(std::size_t dim) const {
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw std::invalid_argument("eta must be nonnegative");
  if (rank < 1 || static_cast<std::size_t>(rank) > dim) throw std::invalid_argument("rank must be in [1, d]");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be positive");
  momentum_schedule(*this);
}

double momentum_schedule(const MifgdConfig& config) {
  const double mu = config.mu.value_or(kDefaultMomentum);
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw std::invalid_argument("momentum must be nonnegative");
  return mu;
}

MifgdResult run_mifgd(const SensingMap& map, const RealVector& y, const MifgdConfig& config) {
  const int n = map.num_qubits();
  const auto d = static_cast<Eigen::Index>(map.dim());
  config.validate(map.dim());
  if (static_cast<std::size_t>(y.size()) != map.size()) throw std::invalid_argument("data length differs from map");
  const double mu = momentum_schedule(config);

  const SensingMap work = map.with_normalization(false);
  const RealVector data = y * (work.scale() / map.scale());

  Rng rng = make_rng(config.seed);
  const double init_scale = 1.0 / std::sqrt(static_cast<double>(d));
  ComplexMatrix u(d, config.rank);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < config.rank; ++j) u(i, j) = init_scale * sample_complex_normal(rng);
  }
  ComplexMatrix z = u;
  HermitianMatrix rho = gram(n, u);
  MifgdResult result{rho, u, SolverStatus::kMaxIterations, 0};

  for (int t = 0; t < config.max_iter; ++t) {
    const RealVector misfit = apply_sensing(work, gram(n, z)) - data;
    const HermitianMatrix grad = apply_adjoint(work, misfit);
    ComplexMatrix u_next = z - config.eta * (grad.matrix() * z);
    if (!u_next.allFinite()) {
      result.status = SolverStatus::kDiverged;
      break;
    }
    z = u_next + mu * (u_next - u);
    u = std::move(u_next);
    HermitianMatrix rho_next = gram(n, u);
    if (!rho_next.all_finite() || !z.allFinite()) {
      result.status = SolverStatus::kDiverged;
      break;
    }
    const double norm = rho_next.frobenius_norm();
    const double change = (rho_next - rho).frobenius_norm();
    rho = std::move(rho_next);
    result.estimate = rho;
    result.factor = u;
    result.iterations = t + 1;
    if (norm > 0.0 && change / norm < config.rel_tol) {
      result.status = SolverStatus::kConverged;
      break;
    }
  }
  return result;
}

}  // namespace ampqst
