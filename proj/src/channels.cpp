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

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ampqst/measurement.hpp"
#include "local_ops.hpp"

namespace ampqst {

namespace {

void check_qubit_index(const DensityMatrix& rho, int qubit) {
  if (qubit < 1 || qubit > rho.num_qubits()) {
    throw std::invalid_argument("qubit index " + std::to_string(qubit) + " out of range");
  }
}

DensityMatrix wrap(int n, const ComplexMatrix& m) {
  return DensityMatrix::assume_valid(HermitianMatrix::symmetrized(n, m));
}

ComplexMatrix flipped(const ComplexMatrix& m, std::uint64_t bit) {
  const Eigen::Index d = m.rows();
  ComplexMatrix out(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      out(i, j) = m(static_cast<Eigen::Index>(static_cast<std::uint64_t>(i) ^ bit),
                    static_cast<Eigen::Index>(static_cast<std::uint64_t>(j) ^ bit));
    }
  }
  return out;
}

ComplexMatrix phased(const ComplexMatrix& m, std::uint64_t bit) {
  ComplexMatrix out = m;
  const Eigen::Index d = m.rows();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const bool bi = static_cast<std::uint64_t>(i) & bit;
      const bool bj = static_cast<std::uint64_t>(j) & bit;
      if (bi != bj) out(i, j) = -out(i, j);
    }
  }
  return out;
}

// (1/2) I_q (x) Tr_q(m), with the identity re-inserted at the same position.
ComplexMatrix lost(const ComplexMatrix& m, std::uint64_t bit) {
  const Eigen::Index d = m.rows();
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const auto ui = static_cast<std::uint64_t>(i);
      const auto uj = static_cast<std::uint64_t>(j);
      if ((ui & bit) != (uj & bit)) continue;
      const auto i0 = static_cast<Eigen::Index>(ui & ~bit);
      const auto j0 = static_cast<Eigen::Index>(uj & ~bit);
      const auto i1 = static_cast<Eigen::Index>(ui | bit);
      const auto j1 = static_cast<Eigen::Index>(uj | bit);
      out(i, j) = 0.5 * (m(i0, j0) + m(i1, j1));
    }
  }
  return out;
}

}  // namespace

PhotonicNoise PhotonicNoise::uniform(int num_qubits, FlipLossWeights weights) {
  PhotonicNoise noise;
  noise.per_qubit.assign(static_cast<std::size_t>(num_qubits), weights);
  noise.identity_weight = 1.0 - num_qubits * (weights.bit_flip + weights.phase_flip + weights.loss);
  noise.validate(num_qubits);
  return noise;
}

void PhotonicNoise::validate(int num_qubits) const {
  if (static_cast<int>(per_qubit.size()) != num_qubits) {
    throw std::invalid_argument("photonic noise needs one weight triple per qubit");
  }
  double total = identity_weight;
  bool nonneg = identity_weight >= 0.0;
  for (const FlipLossWeights& w : per_qubit) {
    nonneg = nonneg && w.bit_flip >= 0.0 && w.phase_flip >= 0.0 && w.loss >= 0.0;
    total += w.bit_flip + w.phase_flip + w.loss;
  }
  if (!nonneg) throw std::invalid_argument("photonic noise weights must be nonnegative");
  if (std::abs(total - 1.0) > 1e-10) throw std::invalid_argument("photonic noise weights must sum to 1");
}

void NoiseModel::validate(int num_qubits) const {
  if (!(depolarizing >= 0.0 && depolarizing <= 1.0)) throw std::invalid_argument("depolarizing must be in [0, 1]");
  if (!(readout_q >= 0.0 && readout_q <= 0.5)) throw std::invalid_argument("readout q must be in [0, 0.5]");
  if (!std::isfinite(coherent_theta) || !std::isfinite(coherent_prep_theta)) {
    throw std::invalid_argument("coherent angles must be finite");
  }
  if (photonic) photonic->validate(num_qubits);
}

DensityMatrix apply_depolarizing(const DensityMatrix& rho, double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("depolarizing strength must be in [0, 1]");
  const auto d = static_cast<Eigen::Index>(rho.dim());
  ComplexMatrix m = (1.0 - eps) * rho.matrix();
  m.diagonal().array() += eps / static_cast<double>(d);
  return wrap(rho.num_qubits(), m);
}

DensityMatrix apply_coherent(const DensityMatrix& rho, const ComplexMatrix& unitary) {
  const auto d = static_cast<Eigen::Index>(rho.dim());
  if (unitary.rows() != d || unitary.cols() != d) throw std::invalid_argument("unitary has the wrong shape");
  const double defect = (unitary.adjoint() * unitary - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (defect > 1e-10) throw std::invalid_argument("matrix is not unitary");
  return wrap(rho.num_qubits(), unitary * rho.matrix() * unitary.adjoint());
}

OutcomeDistribution apply_readout(const OutcomeDistribution& dist, double q) {
  if (!(q >= 0.0 && q <= 0.5)) throw std::invalid_argument("readout q must be in [0, 0.5]");
  RealVector p = dist.probs;
  const auto size = static_cast<std::uint64_t>(p.size());
  for (std::uint64_t bit = 1; bit < size; bit <<= 1) {
    RealVector next(p.size());
    for (std::uint64_t b = 0; b < size; ++b) {
      next[static_cast<Eigen::Index>(b)] =
          (1.0 - q) * p[static_cast<Eigen::Index>(b)] + q * p[static_cast<Eigen::Index>(b ^ bit)];
    }
    p = std::move(next);
  }
  return OutcomeDistribution{dist.setting, std::move(p)};
}

DensityMatrix apply_pauli_flip(const DensityMatrix& rho, int qubit, FlipKind kind) {
  check_qubit_index(rho, qubit);
  const std::uint64_t bit = detail::qubit_bit(rho.num_qubits(), qubit);
  const ComplexMatrix m = kind == FlipKind::kBit ? flipped(rho.matrix(), bit) : phased(rho.matrix(), bit);
  return wrap(rho.num_qubits(), m);
}

DensityMatrix apply_loss(const DensityMatrix& rho, int qubit) {
  check_qubit_index(rho, qubit);
  return wrap(rho.num_qubits(), lost(rho.matrix(), detail::qubit_bit(rho.num_qubits(), qubit)));
}

DensityMatrix apply_composite(const DensityMatrix& rho, const PhotonicNoise& noise) {
  const int n = rho.num_qubits();
  noise.validate(n);
  ComplexMatrix out = noise.identity_weight * rho.matrix();
  for (int q = 1; q <= n; ++q) {
    const FlipLossWeights& w = noise.per_qubit[static_cast<std::size_t>(q - 1)];
    const std::uint64_t bit = detail::qubit_bit(n, q);
    if (w.bit_flip > 0.0) out += w.bit_flip * flipped(rho.matrix(), bit);
    if (w.phase_flip > 0.0) out += w.phase_flip * phased(rho.matrix(), bit);
    if (w.loss > 0.0) out += w.loss * lost(rho.matrix(), bit);
  }
  return wrap(n, out);
}

ComplexMatrix rx(double theta) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  ComplexMatrix m(2, 2);
  m << Complex(c, 0.0), Complex(0.0, -s), Complex(0.0, -s), Complex(c, 0.0);
  return m;
}

ComplexMatrix rx_product(int num_qubits, double theta) {
  check_qubit_count(num_qubits);
  const ComplexMatrix single = rx(theta);
  const auto d = static_cast<Eigen::Index>(dimension_of(num_qubits));
  ComplexMatrix u(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      Complex v{1.0, 0.0};
      for (int q = 0; q < num_qubits; ++q) v *= single((i >> q) & 1, (j >> q) & 1);
      u(i, j) = v;
    }
  }
  return u;
}

DensityMatrix prepare_noisy_state(const DensityMatrix& target, const NoiseModel& noise) {
  noise.validate(target.num_qubits());
  DensityMatrix rho = target;
  if (noise.photonic) rho = apply_composite(rho, *noise.photonic);
  if (noise.coherent_prep_theta != 0.0) {
    rho = apply_coherent(rho, rx_product(rho.num_qubits(), noise.coherent_prep_theta));
  }
  if (noise.depolarizing != 0.0) rho = apply_depolarizing(rho, noise.depolarizing);
  return rho;
}

}  // namespace ampqst
