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

#include "ampqst/states.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace ampqst {

namespace {

double max_asymmetry(const ComplexMatrix& m) {
  double worst = 0.0;
  const Eigen::Index d = m.rows();
  for (Eigen::Index k = 0; k < d; ++k) {
    for (Eigen::Index l = k; l < d; ++l) {
      const double diff = std::abs(m(k, l) - std::conj(m(l, k)));
      // NaN propagates as "infinitely asymmetric".
      if (!(diff <= worst)) worst = std::isnan(diff) ? INFINITY : diff;
    }
  }
  return worst;
}

// Lexicographic comparison of two eigenvectors by (re, im) of the first
// differing coordinate.

bool lex_less(const ComplexMatrix& vecs, Eigen::Index a, Eigen::Index b) {
  for (Eigen::Index i = 0; i < vecs.rows(); ++i) {
    const Complex x = vecs(i, a);
    const Complex y = vecs(i, b);
    if (x.real() != y.real()) return x.real() < y.real();
    if (x.imag() != y.imag()) return x.imag() < y.imag();
  }
  return false;
}

}  // namespace

void check_qubit_count(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw std::invalid_argument("qubit count must be in [1, " + std::to_string(kMaxQubits) +
                                "], got " + std::to_string(num_qubits));
  }
}

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

Complex sample_complex_normal(Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

// ---------------------------------------------------------------------------

StateVector::StateVector(int num_qubits, ComplexVector amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
  check_qubit_count(num_qubits);
  if (static_cast<std::size_t>(amplitudes_.size()) != dimension_of(num_qubits)) {
    throw std::invalid_argument("state vector length does not match 2^n");
  }
  if (std::abs(amplitudes_.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("state vector is not normalized");
  }
}

HermitianMatrix::HermitianMatrix(int num_qubits, ComplexMatrix entries)
    : num_qubits_(num_qubits), entries_(std::move(entries)) {
  check_qubit_count(num_qubits);
  const auto d = static_cast<Eigen::Index>(dimension_of(num_qubits));
  if (entries_.rows() != d || entries_.cols() != d) {
    throw std::invalid_argument("matrix is not 2^n x 2^n");
  }
  const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
  if (!(max_asymmetry(entries_) <= 1e-12 * scale)) {
    throw std::invalid_argument("matrix is not Hermitian");
  }
}

HermitianMatrix HermitianMatrix::symmetrized(int num_qubits, const ComplexMatrix& m) {
  check_qubit_count(num_qubits);
  const auto d = static_cast<Eigen::Index>(dimension_of(num_qubits));
  if (m.rows() != d || m.cols() != d) throw std::invalid_argument("matrix is not 2^n x 2^n");
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  for (Eigen::Index k = 0; k < d; ++k) h(k, k) = h(k, k).real();
  return HermitianMatrix(num_qubits, std::move(h), Trusted{});
}

HermitianMatrix HermitianMatrix::zero(int num_qubits) {
  check_qubit_count(num_qubits);
  const auto d = static_cast<Eigen::Index>(dimension_of(num_qubits));
  return HermitianMatrix(num_qubits, ComplexMatrix::Zero(d, d), Trusted{});
}

bool HermitianMatrix::all_finite() const { return entries_.allFinite(); }

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& other) const {
  if (other.num_qubits_ != num_qubits_) throw std::invalid_argument("dimension mismatch");
  return HermitianMatrix(num_qubits_, entries_ + other.entries_, Trusted{});
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& other) const {
  if (other.num_qubits_ != num_qubits_) throw std::invalid_argument("dimension mismatch");
  return HermitianMatrix(num_qubits_, entries_ - other.entries_, Trusted{});
}

HermitianMatrix HermitianMatrix::operator*(double scale) const {
  return HermitianMatrix(num_qubits_, entries_ * scale, Trusted{});
}

DensityMatrix::DensityMatrix(HermitianMatrix h) : h_(std::move(h)) {
  if (std::abs(h_.trace() - 1.0) > kTraceTolerance) {
    throw std::invalid_argument("density matrix trace is not 1");
  }
  const SpectralDecomposition spec = spectral_decompose(h_);
  if (spec.eigenvalues.minCoeff() < -kEigenvalueTolerance) {
    throw std::invalid_argument("density matrix is not positive semidefinite");
  }
}

DensityMatrix DensityMatrix::assume_valid(HermitianMatrix h) { return DensityMatrix(std::move(h), Trusted{}); }

DensityMatrix DensityMatrix::maximally_mixed(int num_qubits) {
  check_qubit_count(num_qubits);
  const auto d = static_cast<Eigen::Index>(dimension_of(num_qubits));
  ComplexMatrix m = ComplexMatrix::Identity(d, d) / static_cast<double>(d);
  return assume_valid(HermitianMatrix(num_qubits, std::move(m)));
}

// ---------------------------------------------------------------------------

NamedState parse_named_state(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "ghz") return NamedState::kGhz;
  if (lower == "hadamard") return NamedState::kHadamard;
  if (lower == "w") return NamedState::kW;
  throw std::invalid_argument("unknown state kind '" + std::string(name) + "'");
}

std::string_view to_string(NamedState kind) {
  switch (kind) {
    case NamedState::kGhz:
      return "ghz";
    case NamedState::kHadamard:
      return "hadamard";
    case NamedState::kW:
      return "w";
  }
  return "?";
}

StateVector make_named_state(NamedState kind, int num_qubits) {
  check_qubit_count(num_qubits);
  const std::size_t d = dimension_of(num_qubits);
  ComplexVector amp = ComplexVector::Zero(static_cast<Eigen::Index>(d));
  switch (kind) {
    case NamedState::kGhz:
      amp[0] = amp[static_cast<Eigen::Index>(d - 1)] = 1.0 / std::sqrt(2.0);
      break;
    case NamedState::kHadamard:
      amp.setConstant(1.0 / std::sqrt(static_cast<double>(d)));
      break;
    case NamedState::kW:
      for (int q = 0; q < num_qubits; ++q) {
        amp[Eigen::Index{1} << q] = 1.0 / std::sqrt(static_cast<double>(num_qubits));
      }
      break;
  }
  return StateVector(num_qubits, std::move(amp));
}

DensityMatrix pure_density(const StateVector& psi) {
  const ComplexVector& a = psi.amplitudes();
  ComplexMatrix rho = a * a.adjoint();
  return DensityMatrix::assume_valid(HermitianMatrix::symmetrized(psi.num_qubits(), rho));
}

DensityMatrix make_random_state(int num_qubits, int rank, Rng& rng) {
  check_qubit_count(num_qubits);
  const std::size_t d = dimension_of(num_qubits);
  if (rank < 1 || static_cast<std::size_t>(rank) > d) {
    throw std::invalid_argument("rank must be in [1, 2^n]");
  }
  const auto dd = static_cast<Eigen::Index>(d);
  std::vector<ComplexVector> vectors;
  vectors.reserve(static_cast<std::size_t>(rank));
  for (int k = 0; k < rank; ++k) {
    ComplexVector v(dd);
    for (Eigen::Index j = 0; j < dd; ++j) v[j] = sample_complex_normal(rng);
    vectors.push_back(v / v.norm());
  }
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> weights(static_cast<std::size_t>(rank));
  for (double& w : weights) w = uniform(rng);
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);

  ComplexMatrix rho = ComplexMatrix::Zero(dd, dd);
  for (int k = 0; k < rank; ++k) {
    const auto& v = vectors[static_cast<std::size_t>(k)];
    rho.noalias() += (weights[static_cast<std::size_t>(k)] / total) * v * v.adjoint();
  }
  return DensityMatrix::assume_valid(HermitianMatrix::symmetrized(num_qubits, rho));
}

// ---------------------------------------------------------------------------

SpectralDecomposition spectral_decompose(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.matrix());
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");

  const Eigen::Index d = h.matrix().rows();
  const Eigen::VectorXd& ascending = solver.eigenvalues();
  Eigen::MatrixXcd vecs = solver.eigenvectors();

  // Fix the phase of every eigenvector: first coordinate of non-negligible
  // magnitude is real positive.
  for (Eigen::Index k = 0; k < d; ++k) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const double mag = std::abs(vecs(i, k));
      if (mag > 1e-8) {
        vecs.col(k) *= std::conj(vecs(i, k)) / mag;
        break;
      }
    }
  }

  SpectralDecomposition out;
  out.eigenvalues.resize(d);
  out.eigenvectors.resize(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    out.eigenvalues[k] = ascending[d - 1 - k];
    out.eigenvectors.col(k) = vecs.col(d - 1 - k);
  }

  // Reorder runs of (numerically) tied eigenvalues by eigenvector coordinates.
  const double tie = 1e-12 * std::max(1.0, out.eigenvalues.cwiseAbs().maxCoeff());
  Eigen::Index start = 0;
  while (start < d) {
    Eigen::Index end = start + 1;
    while (end < d && out.eigenvalues[end - 1] - out.eigenvalues[end] <= tie) ++end;
    if (end - start > 1) {
      std::vector<Eigen::Index> order(static_cast<std::size_t>(end - start));
      std::iota(order.begin(), order.end(), start);
      std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return lex_less(out.eigenvectors, a, b);
      });
      const ComplexMatrix block_vecs = out.eigenvectors.middleCols(start, end - start);
      const RealVector block_vals = out.eigenvalues.segment(start, end - start);
      for (std::size_t i = 0; i < order.size(); ++i) {
        const Eigen::Index src = order[i] - start;
        out.eigenvectors.col(start + static_cast<Eigen::Index>(i)) = block_vecs.col(src);
        out.eigenvalues[start + static_cast<Eigen::Index>(i)] = block_vals[src];
      }
    }
    start = end;
  }
  return out;
}

SpectralDecomposition spectral_decompose(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix is not square");
  const Eigen::Index d = m.rows();
  if (d < 2 || (d & (d - 1)) != 0) throw std::invalid_argument("dimension is not a power of two");
  if (!(max_asymmetry(m) <= 1e-8)) throw std::invalid_argument("matrix is not Hermitian");
  int n = 0;
  while ((Eigen::Index{1} << n) < d) ++n;
  return spectral_decompose(HermitianMatrix::symmetrized(n, m));
}

namespace {

ComplexMatrix psd_sqrt(const HermitianMatrix& h) {
  const SpectralDecomposition spec = spectral_decompose(h);
  const double cutoff = 1e-14 * std::max(1.0, spec.eigenvalues.cwiseAbs().maxCoeff());
  return spec.reassemble([cutoff](double lambda) { return lambda > cutoff ? std::sqrt(lambda) : 0.0; });
}

}  // namespace

DensityMatrix project_to_density(const HermitianMatrix& h) {
  const SpectralDecomposition spec = spectral_decompose(h);
  double positive_sum = 0.0;
  for (Eigen::Index k = 0; k < spec.eigenvalues.size(); ++k) {
    if (spec.eigenvalues[k] > 0.0) positive_sum += spec.eigenvalues[k];
  }
  if (!(positive_sum > 0.0) || !std::isfinite(positive_sum)) {
    return DensityMatrix::maximally_mixed(h.num_qubits());
  }
  const ComplexMatrix m =
      spec.reassemble([&](double mu) { return mu > 0.0 ? mu / positive_sum : 0.0; });
  return DensityMatrix::assume_valid(HermitianMatrix::symmetrized(h.num_qubits(), m));
}

bool is_density_matrix(const HermitianMatrix& h) {
  if (!h.all_finite()) return false;
  if (std::abs(h.trace() - 1.0) > DensityMatrix::kTraceTolerance) return false;
  return spectral_decompose(h).eigenvalues.minCoeff() >= -DensityMatrix::kEigenvalueTolerance;
}

int numerical_rank(const HermitianMatrix& h, double threshold) {
  const SpectralDecomposition spec = spectral_decompose(h);
  return static_cast<int>((spec.eigenvalues.array() > threshold).count());
}

double nmse(const DensityMatrix& truth, const HermitianMatrix& estimate) {
  if (truth.dim() != estimate.dim()) throw std::invalid_argument("dimension mismatch");
  const double err = (estimate.matrix() - truth.matrix()).squaredNorm();
  return err / truth.matrix().squaredNorm();
}

double state_fidelity(const DensityMatrix& rho, const HermitianMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw std::invalid_argument("dimension mismatch");
  const HermitianMatrix sigma_phys =
      is_density_matrix(sigma) ? sigma : project_to_density(sigma).hermitian();
  // F = (sum of singular values of sqrt(rho) sqrt(sigma))^2.  Eigenvalues at
  // rounding level are dropped so that rank-deficient states do not pick up
  // sqrt(1e-17)-sized contributions.
  const ComplexMatrix product = psd_sqrt(rho.hermitian()) * psd_sqrt(sigma_phys);
  const Eigen::BDCSVD<Eigen::MatrixXcd> svd(product);
  const double root_trace = svd.singularValues().sum();
  return std::clamp(root_trace * root_trace, 0.0, 1.0);
}

}  // namespace ampqst
