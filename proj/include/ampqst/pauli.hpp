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

#ifndef AMPQST_PAULI_HPP
#define AMPQST_PAULI_HPP

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ampqst/states.hpp"

namespace ampqst {

enum class PauliLetter : std::uint8_t { kI = 0, kX = 1, kY = 2, kZ = 3 };

char to_char(PauliLetter letter);

/// One nonzero of a vectorized Pauli row: column of vec(P) and the value of
/// conj(vec P) there.
struct SparseEntry {
  std::uint32_t column;
  Complex value;
};

/// An n-qubit Pauli string.  Letter 0 acts on qubit 1, the most significant bit
/// of the computational-basis index.
class PauliString {
 public:
  /// Parses a word over {I, X, Y, Z}; throws std::invalid_argument otherwise.
  static PauliString parse(std::string_view word);
  /// Inverse of index().
  static PauliString from_index(int num_qubits, std::uint64_t index);

  explicit PauliString(std::vector<PauliLetter> letters);

  int num_qubits() const { return static_cast<int>(letters_.size()); }
  std::size_t dim() const { return dimension_of(num_qubits()); }
  const std::vector<PauliLetter>& letters() const { return letters_; }
  std::string word() const;

  /// Number of Y letters.
  int y_count() const { return y_count_; }
  /// Basis-index bits flipped by the string (X or Y letters).
  std::uint64_t x_mask() const { return x_mask_; }
  /// Basis-index bits that pick up a sign (Y or Z letters).
  std::uint64_t z_mask() const { return z_mask_; }
  bool is_identity() const { return x_mask_ == 0 && z_mask_ == 0; }

  /// Base-4 code (I=0, X=1, Y=2, Z=3), letter 0 most significant.
  std::uint64_t index() const;

  /// (vec P)^dagger as d nonzeros, one per matrix row, built from the bit
  /// structure of the string without forming P.
  std::vector<SparseEntry> sparse_row() const;
  /// i^{y_count} (vec P)^dagger; every value is +1 or -1.
  std::vector<std::int8_t> integer_row() const;
  /// Column of the nonzero in matrix row `row`, as an index into vec(P).
  std::uint64_t column_of_row(std::uint64_t row) const {
    return row * dim() + (row ^ x_mask_);
  }

  /// Dense d x d matrix; for tests and small n only.
  ComplexMatrix dense() const;

  friend bool operator==(const PauliString& a, const PauliString& b) { return a.letters_ == b.letters_; }

 private:
  std::vector<PauliLetter> letters_;
  int y_count_ = 0;
  std::uint64_t x_mask_ = 0;
  std::uint64_t z_mask_ = 0;
};

/// A word over {X, Y, Z} choosing the measurement basis of every qubit.
class MeasurementSetting {
 public:
  static MeasurementSetting parse(std::string_view word);
  /// Base-3 code (X=0, Y=1, Z=2), letter 0 most significant.
  static MeasurementSetting from_index(int num_qubits, std::uint64_t index);

  explicit MeasurementSetting(std::vector<PauliLetter> letters);

  int num_qubits() const { return static_cast<int>(letters_.size()); }
  const std::vector<PauliLetter>& letters() const { return letters_; }
  std::string word() const;

  /// P(S, a): letter q is S_q where bit q of `mask` is set and I elsewhere.
  /// Bits follow the basis-index convention (qubit 1 is the MSB).
  PauliString observable(std::uint64_t mask) const;
  /// The mask a with P(S, a) == p, or -1 when p is not covered by this setting.
  std::int64_t mask_of(const PauliString& p) const;

  friend bool operator==(const MeasurementSetting& a, const MeasurementSetting& b) {
    return a.letters_ == b.letters_;
  }

 private:
  std::vector<PauliLetter> letters_;
};

/// All 2^n observables P(S, a), ordered by mask a.
std::vector<PauliString> observables_of_setting(const MeasurementSetting& setting);

/// The linear map X -> (scale * Tr[P_k X])_k over an ordered list of distinct
/// Pauli strings, scale = sqrt(d/M) when normalized and 1 otherwise.
///
/// Stored as the factorization row_k = D_kk * R_k, where R_k = i^{n_k} (vec
/// P_k)^dagger is a sparse +-1 row and D_kk = scale * (-i)^{n_k}.  Storage is
/// O(M d); the dense M x d^2 matrix is never formed.  Copies share storage.
class SensingMap {
 public:
  SensingMap(std::vector<PauliString> paulis, bool normalized);

  int num_qubits() const { return storage_->num_qubits; }
  std::size_t dim() const { return dimension_of(num_qubits()); }
  std::size_t size() const { return storage_->paulis.size(); }
  bool normalized() const { return normalized_; }
  double scale() const { return scale_; }
  const std::vector<PauliString>& paulis() const { return storage_->paulis; }

  /// Same Paulis, other normalization.
  SensingMap with_normalization(bool normalized) const;

  Complex diagonal_factor(std::size_t k) const;
  std::span<const std::uint32_t> row_columns(std::size_t k) const;
  std::span<const std::int8_t> row_values(std::size_t k) const;

 private:
  struct Storage {
    int num_qubits = 0;
    std::vector<PauliString> paulis;
    std::vector<std::uint8_t> y_phase;  // n_k mod 4
    std::vector<std::uint32_t> columns;
    std::vector<std::int8_t> values;
  };
  SensingMap(std::shared_ptr<const Storage> storage, bool normalized);

  std::shared_ptr<const Storage> storage_;
  bool normalized_;
  double scale_;
};

/// Throws std::invalid_argument when a Pauli repeats.
SensingMap build_sensing_map(std::vector<PauliString> paulis, bool normalized);

/// scale * Tr[P_k X] for every k.  The imaginary residue of each trace is
/// checked to be below 1e-10 (relative to the row magnitude) and dropped.
RealVector apply_sensing(const SensingMap& map, const HermitianMatrix& x);

/// scale * sum_k y_k P_k.
HermitianMatrix apply_adjoint(const SensingMap& map, const RealVector& y);

/// M distinct Pauli strings drawn uniformly without replacement from all 4^n.
std::vector<PauliString> sample_observables(int num_qubits, std::size_t count, Rng& rng);

struct SettingsSample {
  std::vector<MeasurementSetting> settings;
  /// Union of the covered observables in order of first coverage.
  std::vector<PauliString> observables;
  std::size_t num_settings() const { return settings.size(); }
};

/// Draws settings uniformly without replacement from {X,Y,Z}^n until the
/// covered observables number at least `target`.
SettingsSample sample_settings_until(int num_qubits, std::size_t target, Rng& rng);

/// Union of the observables covered by `settings`, in order of first coverage.
std::vector<PauliString> covered_observables(const std::vector<MeasurementSetting>& settings);

// ---------------------------------------------------------------------------
// PLAN v1 text format: header `PLAN v1 n=<n> mode=<observables|settings>`
// followed by one word per line.

enum class PlanMode { kObservables, kSettings };

std::string_view to_string(PlanMode mode);

struct MeasurementPlan {
  int num_qubits = 0;
  PlanMode mode = PlanMode::kObservables;
  std::vector<PauliString> observables;     // observables mode
  std::vector<MeasurementSetting> settings;  // settings mode
};

void write_plan(std::ostream& out, const MeasurementPlan& plan);
/// Throws std::runtime_error with a line number on malformed input.
MeasurementPlan read_plan(std::istream& in);

}  // namespace ampqst

#endif  // AMPQST_PAULI_HPP
