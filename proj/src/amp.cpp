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

#include "ampqst/amp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <deque>
#include <ostream>
#include <string>

namespace ampqst {

namespace {

constexpr std::size_t kEarlyStopLag = 10;
constexpr double kEarlyStopTolerance = 1e-9;
constexpr double kSigmaBlowup = 1e6;

HermitianMatrix hermitian_probe(int num_qubits, Rng& rng) {
  const auto d = static_cast<Eigen::Index>(dimension_of(num_qubits));
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix h(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    h(i, i) = Complex(normal(rng), 0.0);
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const Complex z = sample_complex_normal(rng);
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  }
  return HermitianMatrix(num_qubits, std::move(h));
}

// Re<a, b>_F = Re sum conj(a_ij) b_ij.
double real_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

double probe_epsilon(const HermitianMatrix& v, double relative) {
  return relative * std::max(v.frobenius_norm() / static_cast<double>(v.dim()), 1e-12);
}

double onsager_with_base(const Denoiser& f, const HermitianMatrix& v, const HermitianMatrix& fv, double tau,
                         std::size_t num_measurements, double epsilon, int samples, std::uint64_t seed) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("probe step must be positive");
  if (samples < 1) throw std::invalid_argument("probe count must be at least 1");
  if (num_measurements == 0) throw std::invalid_argument("measurement count must be positive");
  Rng rng = make_rng(seed);
  double acc = 0.0;
  for (int s = 0; s < samples; ++s) {
    const HermitianMatrix h = hermitian_probe(v.num_qubits(), rng);
    const HermitianMatrix shifted = f(v + h * epsilon, tau);
    acc += real_inner(h.matrix(), shifted.matrix() - fv.matrix()) / epsilon;
  }
  return acc / (static_cast<double>(num_measurements) * samples);
}

bool finite(const RealVector& v) { return v.allFinite(); }

}  // namespace

DenoiserKind parse_denoiser(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "svt") return DenoiserKind::kSvt;
  if (lower == "psvt") return DenoiserKind::kPsvt;
  throw std::invalid_argument("unknown denoiser '" + std::string(name) + "'");
}

std::string_view to_string(DenoiserKind kind) { return kind == DenoiserKind::kSvt ? "svt" : "psvt"; }

void AmpConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be positive");
  if (!(damping > 0.0 && damping <= 1.0)) throw std::invalid_argument("damping must be in (0, 1]");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  if (!(mc_epsilon > 0.0)) throw std::invalid_argument("mc_epsilon must be positive");
  if (mc_samples < 1) throw std::invalid_argument("mc_samples must be at least 1");
}

HermitianMatrix svt(const HermitianMatrix& h, double tau) {
  if (!(tau >= 0.0)) throw std::invalid_argument("threshold must be nonnegative");
  const SpectralDecomposition eig = spectral_decompose(h);
  ComplexMatrix m = eig.reassemble([tau](double lambda) {
    const double shrunk = std::max(std::abs(lambda) - tau, 0.0);
    return lambda < 0.0 ? -shrunk : shrunk;
  });
  return HermitianMatrix::symmetrized(h.num_qubits(), m);
}

DensityMatrix psvt(const HermitianMatrix& h, double tau) { return project_to_density(svt(h, tau)); }

Denoiser make_denoiser(DenoiserKind kind) {
  if (kind == DenoiserKind::kSvt) return [](const HermitianMatrix& v, double tau) { return svt(v, tau); };
  return [](const HermitianMatrix& v, double tau) { return psvt(v, tau).hermitian(); };
}

double estimate_onsager(const Denoiser& f, const HermitianMatrix& v, double tau, std::size_t num_measurements,
                        double epsilon, int samples, std::uint64_t seed) {
  return onsager_with_base(f, v, f(v, tau), tau, num_measurements, epsilon, samples, seed);
}

AmpState AmpState::initial(int num_qubits) {
  return AmpState{DensityMatrix::maximally_mixed(num_qubits).hermitian(), {}, {}, 0.0, 0.0, 0.0, 0, {}, {}};
}

AmpState amp_step(const AmpState& state, const SensingMap& map, const RealVector& y, const AmpConfig& config) {
  if (static_cast<std::size_t>(y.size()) != map.size()) throw std::invalid_argument("data length differs from map");
  if (state.iterate.num_qubits() != map.num_qubits()) throw std::invalid_argument("dimension mismatch");
  const Denoiser f = make_denoiser(config.denoiser);
  const double m = static_cast<double>(map.size());
  const double d = static_cast<double>(map.dim());

  double onsager = 0.0;
  const bool have_prev = state.residual.size() == y.size() && state.prev_pseudo_data && state.prev_denoised;
  if (have_prev) {
    const HermitianMatrix& v_prev = *state.prev_pseudo_data;
    onsager = onsager_with_base(f, v_prev, *state.prev_denoised, state.tau, map.size(),
                                probe_epsilon(v_prev, config.mc_epsilon), config.mc_samples,
                                config.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(state.t + 1)));
  }

  RealVector r = y - apply_sensing(map, state.iterate);
  if (have_prev) r += onsager * state.residual;
  if (!finite(r) || !std::isfinite(onsager)) throw AmpDivergence("non-finite residual at iteration " + std::to_string(state.t));
  const double sigma = r.norm() / std::sqrt(m);
  const double tau = config.alpha * sigma * std::sqrt(d);

  HermitianMatrix v = state.iterate + apply_adjoint(map, r);
  if (!v.all_finite()) throw AmpDivergence("non-finite pseudo-data at iteration " + std::to_string(state.t));
  HermitianMatrix fv = f(v, tau);
  const double lambda = config.effective_damping();
  HermitianMatrix next = lambda == 1.0 ? fv : fv * lambda + state.iterate * (1.0 - lambda);
  if (!next.all_finite()) throw AmpDivergence("non-finite iterate at iteration " + std::to_string(state.t));

  AmpState out{std::move(next), std::move(r), state.residual, onsager, sigma, tau, state.t + 1, std::move(v),
               std::move(fv)};
  return out;
}

AmpResult run_amp(const SensingMap& map, const RealVector& y, const AmpConfig& config, const DensityMatrix* truth) {
  config.validate();
  if (static_cast<std::size_t>(y.size()) != map.size()) throw std::invalid_argument("data length differs from map");
  if (truth && truth->num_qubits() != map.num_qubits()) throw std::invalid_argument("truth has the wrong dimension");

  // Bring y to the scale of the map the solver runs on.
  const SensingMap work = map.with_normalization(config.normalize);
  const RealVector data = y * (work.scale() / map.scale());

  AmpState state = AmpState::initial(map.num_qubits());
  AmpResult result{state.iterate, {}, SolverStatus::kMaxIterations, 0};
  result.trace.reserve(static_cast<std::size_t>(config.max_iter));
  std::deque<HermitianMatrix> history;
  double sigma0 = 0.0;

  for (int t = 0; t < config.max_iter; ++t) {
    try {
      state = amp_step(state, work, data, config);
    } catch (const AmpDivergence&) {
      result.status = SolverStatus::kDiverged;
      break;
    }
    if (t == 0) sigma0 = state.sigma;
    AmpTraceRow row{t, state.sigma, state.tau, state.onsager, state.residual.norm(), std::nullopt, std::nullopt};
    if (truth) {
      row.nmse = nmse(*truth, state.iterate);
      row.fidelity = state_fidelity(*truth, state.iterate);
    }
    result.trace.push_back(row);
    if (sigma0 > 0.0 && state.sigma > kSigmaBlowup * sigma0) {
      result.status = SolverStatus::kDiverged;
      result.iterations = t + 1;
      break;
    }
    result.estimate = state.iterate;
    result.iterations = t + 1;
    if (config.early_stop) {
      history.push_back(state.iterate);
      if (history.size() > kEarlyStopLag + 1) history.pop_front();
      if (history.size() == kEarlyStopLag + 1) {
        const double norm = state.iterate.frobenius_norm();
        const double change = (state.iterate - history.front()).frobenius_norm();
        if (norm > 0.0 && change / norm < kEarlyStopTolerance) {
          result.status = SolverStatus::kConverged;
          break;
        }
      }
    }
  }
  return result;
}

void write_trace_csv(std::ostream& out, const AmpTrace& trace) {
  const bool metrics = !trace.empty() && trace.front().nmse.has_value();
  out << "t,sigma,tau,onsager,residual_norm" << (metrics ? ",nmse,fidelity" : "") << '\n';
  char buf[64];
  auto field = [&](double v) {
    std::snprintf(buf, sizeof buf, ",%.17g", v);
    out << buf;
  };
  for (const AmpTraceRow& row : trace) {
    out << row.t;
    field(row.sigma);
    field(row.tau);
    field(row.onsager);
    field(row.residual_norm);
    if (metrics) {
      field(row.nmse.value_or(std::nan("")));
      field(row.fidelity.value_or(std::nan("")));
    }
    out << '\n';
  }
}

}  // namespace ampqst
