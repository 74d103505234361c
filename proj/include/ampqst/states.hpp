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

#ifndef AMPQST_STATES_HPP
#define AMPQST_STATES_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <string_view>

#include <Eigen/Dense>

namespace ampqst {

using Complex = std::complex<double>;
// Row-major so that data()[k * d + l] is entry (k, l), i.e. the vectorization
// used by the sensing map.
using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Rng = std::mt19937_64;

/// Largest qubit count accepted anywhere in the library (d = 2^12).
inline constexpr int kMaxQubits = 12;

inline std::size_t dimension_of(int num_qubits) { return std::size_t{1} << num_qubits; }

/// Throws std::invalid_argument unless 1 <= n <= kMaxQubits.
void check_qubit_count(int num_qubits);

/// Derives an independent generator from a master seed and a stream index.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// Complex normal draw with real and imaginary parts each N(0, 1/2), so that
/// E|z|^2 = 1.
Complex sample_complex_normal(Rng& rng);

/// Normalized pure-state amplitudes over d = 2^n basis states.  Qubit 1 is the
/// most significant bit of the basis index.
class StateVector {
 public:
  StateVector(int num_qubits, ComplexVector amplitudes);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const ComplexVector& amplitudes() const { return amplitudes_; }

 private:
  int num_qubits_;
  ComplexVector amplitudes_;
};

/// A d x d complex Hermitian matrix over n qubits.
class HermitianMatrix {
 public:
  /// Validates that `entries` is d x d and conjugate-symmetric to 1e-12
  /// (relative to its largest entry when that exceeds 1).
  HermitianMatrix(int num_qubits, ComplexMatrix entries);

  /// Returns (m + m^dagger) / 2; never throws on asymmetry.
  static HermitianMatrix symmetrized(int num_qubits, const ComplexMatrix& m);
  static HermitianMatrix zero(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const ComplexMatrix& matrix() const { return entries_; }

  double trace() const { return entries_.trace().real(); }
  double frobenius_norm() const { return entries_.norm(); }
  bool all_finite() const;

  HermitianMatrix operator+(const HermitianMatrix& other) const;
  HermitianMatrix operator-(const HermitianMatrix& other) const;
  HermitianMatrix operator*(double scale) const;

 private:
  struct Trusted {};
  HermitianMatrix(int num_qubits, ComplexMatrix entries, Trusted)
      : num_qubits_(num_qubits), entries_(std::move(entries)) {}

  int num_qubits_;
  ComplexMatrix entries_;
};

/// Hermitian, positive semidefinite (eigenvalues >= -1e-10), unit trace
/// (within 1e-10).
class DensityMatrix {
 public:
  static constexpr double kEigenvalueTolerance = 1e-10;
  static constexpr double kTraceTolerance = 1e-10;

  /// Validates the density-matrix invariants; throws std::invalid_argument.
  explicit DensityMatrix(HermitianMatrix h);

  /// Skips validation.  Only for matrices that are density matrices by
  /// construction (projections, convex mixtures, unitary conjugations).
  static DensityMatrix assume_valid(HermitianMatrix h);
  static DensityMatrix maximally_mixed(int num_qubits);

  int num_qubits() const { return h_.num_qubits(); }
  std::size_t dim() const { return h_.dim(); }
  const HermitianMatrix& hermitian() const { return h_; }
  const ComplexMatrix& matrix() const { return h_.matrix(); }
  operator const HermitianMatrix&() const { return h_; }

 private:
  struct Trusted {};
  DensityMatrix(HermitianMatrix h, Trusted) : h_(std::move(h)) {}

  HermitianMatrix h_;
};

/// Eigenvalues in descending order with matching orthonormal eigenvectors
/// stored as columns.
struct SpectralDecomposition {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;

  /// sum_k f(lambda_k) |psi_k><psi_k|.
  template <typename F>
  ComplexMatrix reassemble(F&& f) const {
    const Eigen::Index d = eigenvectors.rows();
    ComplexMatrix out = ComplexMatrix::Zero(d, d);
    for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) {
      const double w = f(eigenvalues[k]);
      if (w == 0.0) continue;
      out.noalias() += w * eigenvectors.col(k) * eigenvectors.col(k).adjoint();
    }
    return out;
  }
};

enum class NamedState { kGhz, kHadamard, kW };

/// Parses "ghz", "hadamard" or "w" (case-insensitive).
NamedState parse_named_state(std::string_view name);
std::string_view to_string(NamedState kind);

StateVector make_named_state(NamedState kind, int num_qubits);
DensityMatrix pure_density(const StateVector& psi);

/// sum_k p_k |psi_k><psi_k| with p drawn U(0,1) then normalized and each
/// |psi_k> drawn coordinate-wise complex normal then normalized.  Draws the r
/// vectors first, then the r weights.
DensityMatrix make_random_state(int num_qubits, int rank, Rng& rng);

SpectralDecomposition spectral_decompose(const HermitianMatrix& h);
/// Accepts an arbitrary square matrix; rejects conjugate-asymmetry > 1e-8.
SpectralDecomposition spectral_decompose(const ComplexMatrix& m);

/// Keeps the positive part of the spectrum and renormalizes it to unit trace.
/// Eigenvalues in (-1e-10, 0) count as zero.  With no positive eigenvalue the
/// result is I/d.
DensityMatrix project_to_density(const HermitianMatrix& h);

/// True when eigenvalues >= -1e-10 and |trace - 1| <= 1e-10.
bool is_density_matrix(const HermitianMatrix& h);

/// Number of eigenvalues strictly above `threshold`.
int numerical_rank(const HermitianMatrix& h, double threshold = 1e-9);

/// ||estimate - truth||_F^2 / ||truth||_F^2.
double nmse(const DensityMatrix& truth, const HermitianMatrix& estimate);

/// (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, clamped to [0, 1].  `sigma` is
/// first projected onto the density matrices when it is not one already.
double state_fidelity(const DensityMatrix& rho, const HermitianMatrix& sigma);

// DMAT v1 text format: header line `DMAT v1 n=<n>` followed by d^2 lines
// `<re> <im>` in row-major order with 17 significant digits.
void write_dmat(std::ostream& out, const HermitianMatrix& h);
/// Throws std::runtime_error with a line number on malformed input and
/// std::invalid_argument when the loaded matrix is not Hermitian.
HermitianMatrix read_dmat(std::istream& in);

}  // namespace ampqst

#endif  // AMPQST_STATES_HPP
