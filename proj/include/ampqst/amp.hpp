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

#ifndef AMPQST_AMP_HPP
#define AMPQST_AMP_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "ampqst/pauli.hpp"
#include "ampqst/solver_status.hpp"
#include "ampqst/states.hpp"

namespace ampqst {

enum class DenoiserKind { kSvt, kPsvt };

/// Parses "svt" or "psvt".
DenoiserKind parse_denoiser(std::string_view name);
std::string_view to_string(DenoiserKind kind);

struct AmpConfig {
  /// Threshold multiplier: tau = alpha * sigma * sqrt(d).
  double alpha = 2.0;
  /// Weight of the denoised update in the convex blend with the old iterate.
  double damping = 0.01;
  bool damping_enabled = true;
  int max_iter = 2000;
  /// Probe step relative to ||v||_F / d.
  double mc_epsilon = 1e-4;
  int mc_samples = 1;
  DenoiserKind denoiser = DenoiserKind::kPsvt;
  /// Run on the sqrt(d/M)-rescaled map and data.  false gives the plain
  /// variant, which is not expected to converge.
  bool normalize = true;
  /// Stop once ||rho_t - rho_{t-10}||_F / ||rho_t||_F < 1e-9.
  bool early_stop = false;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
  /// The blend weight actually used (1 when damping is disabled).
  double effective_damping() const { return damping_enabled ? damping : 1.0; }
};

/// Soft-thresholds the singular values |lambda_k| of a Hermitian matrix:
/// sum_k sign(lambda_k) (|lambda_k| - tau)_+ |psi_k><psi_k|.
HermitianMatrix svt(const HermitianMatrix& h, double tau);
/// svt followed by projection onto the density matrices.
DensityMatrix psvt(const HermitianMatrix& h, double tau);

using Denoiser = std::function<HermitianMatrix(const HermitianMatrix&, double)>;
Denoiser make_denoiser(DenoiserKind kind);

/// Monte Carlo divergence estimate
///   (1 / (M k)) sum_{j<k} Re<h_j, f(v + eps h_j; tau) - f(v; tau)>_F / eps
/// with h_j Hermitian Gaussian probes (unit-variance real diagonal, CN(0, 1)
/// off-diagonal pairs), so E||h||_F^2 = d^2.  Deterministic for a given seed.
double estimate_onsager(const Denoiser& f, const HermitianMatrix& v, double tau, std::size_t num_measurements,
                        double epsilon, int samples, std::uint64_t seed);

/// Solver state at the start of iteration t.
struct AmpState {
  HermitianMatrix iterate;
  RealVector residual;       // r_{t-1} after a step, empty before the first
  RealVector prev_residual;  // r_{t-2}
  double onsager = 0.0;
  double sigma = 0.0;
  double tau = 0.0;
  int t = 0;
  /// Pseudo-data and its denoised value from the previous iteration, reused
  /// by the divergence probe.
  std::optional<HermitianMatrix> prev_pseudo_data;
  std::optional<HermitianMatrix> prev_denoised;

  static AmpState initial(int num_qubits);
};

struct AmpTraceRow {
  int t = 0;
  double sigma = 0.0;
  double tau = 0.0;
  double onsager = 0.0;
  double residual_norm = 0.0;
  std::optional<double> nmse;
  std::optional<double> fidelity;
};

using AmpTrace = std::vector<AmpTraceRow>;

/// Thrown by amp_step when the iteration produces non-finite values.
class AmpDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One iteration on the map as given (no rescaling):
///   r = y - A(rho) + c r_prev,   v = rho + A^dagger(r),
///   tau = alpha * (||r|| / sqrt(M)) * sqrt(d),
///   rho_next = lambda f(v; tau) + (1 - lambda) rho.
/// The returned state holds rho_next with t incremented; residual, sigma, tau
/// and onsager describe the step just taken.
AmpState amp_step(const AmpState& state, const SensingMap& map, const RealVector& y, const AmpConfig& config);

struct AmpResult {
  /// Final finite iterate.
  HermitianMatrix estimate;
  AmpTrace trace;
  SolverStatus status = SolverStatus::kMaxIterations;
  int iterations = 0;
};

/// Runs AMP from rho = I/d, r_{-1} = 0.  `y` is on the same scale as `map`
/// (raw expectations for an unnormalized map); the rescaling demanded by
/// config.normalize is applied internally.  Divergence (non-finite values or
/// sigma above 1e6 times its first value) ends the run with status kDiverged
/// and the last finite iterate; it never throws.
AmpResult run_amp(const SensingMap& map, const RealVector& y, const AmpConfig& config,
                  const DensityMatrix* truth = nullptr);

/// CSV with header t,sigma,tau,onsager,residual_norm and, when the rows carry
/// them, nmse,fidelity.
void write_trace_csv(std::ostream& out, const AmpTrace& trace);

}  // namespace ampqst

#endif  // AMPQST_AMP_HPP
