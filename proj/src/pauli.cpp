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

#include "ampqst/pauli.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace ampqst {

namespace {

PauliLetter letter_from_char(char c) {
  switch (c) {
    case 'I':
      return PauliLetter::kI;
    case 'X':
      return PauliLetter::kX;
    case 'Y':
      return PauliLetter::kY;
    case 'Z':
      return PauliLetter::kZ;
    default:
      throw std::invalid_argument(std::string("invalid Pauli letter '") + c + "'");
  }
}

std::uint64_t ipow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

// Lazily evaluated Fisher-Yates shuffle of [0, population); only touched
// positions are stored.
class SparseShuffle {
 public:
  explicit SparseShuffle(std::uint64_t population) : population_(population) {}

  bool exhausted() const { return drawn_ == population_; }

  std::uint64_t next(Rng& rng) {
    std::uniform_int_distribution<std::uint64_t> pick(drawn_, population_ - 1);
    const std::uint64_t j = pick(rng);
    const std::uint64_t at_j = value_at(j);
    swapped_[j] = value_at(drawn_);
    ++drawn_;
    return at_j;
  }

 private:
  std::uint64_t value_at(std::uint64_t i) const {
    const auto it = swapped_.find(i);
    return it == swapped_.end() ? i : it->second;
  }

  std::uint64_t population_;
  std::uint64_t drawn_ = 0;
  std::unordered_map<std::uint64_t, std::uint64_t> swapped_;
};

// i^k for k mod 4.
Complex i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {0.0, 1.0};
    case 2:
      return {-1.0, 0.0};
    default:
      return {0.0, -1.0};
  }
}

}  // namespace

char to_char(PauliLetter letter) { return "IXYZ"[static_cast<int>(letter)]; }

// ---------------------------------------------------------------------------

PauliString PauliString::parse(std::string_view word) {
  std::vector<PauliLetter> letters;
  letters.reserve(word.size());
  for (char c : word) letters.push_back(letter_from_char(c));
  return PauliString(std::move(letters));
}

PauliString PauliString::from_index(int num_qubits, std::uint64_t index) {
  check_qubit_count(num_qubits);
  if (index >= ipow(4, num_qubits)) throw std::invalid_argument("Pauli index out of range");
  std::vector<PauliLetter> letters(static_cast<std::size_t>(num_qubits));
  for (int q = num_qubits - 1; q >= 0; --q) {
    letters[static_cast<std::size_t>(q)] = static_cast<PauliLetter>(index & 3);
    index >>= 2;
  }
  return PauliString(std::move(letters));
}

PauliString::PauliString(std::vector<PauliLetter> letters) : letters_(std::move(letters)) {
  check_qubit_count(num_qubits());
  const int n = num_qubits();
  for (int q = 0; q < n; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
    switch (letters_[static_cast<std::size_t>(q)]) {
      case PauliLetter::kI:
        break;
      case PauliLetter::kX:
        x_mask_ |= bit;
        break;
      case PauliLetter::kY:
        x_mask_ |= bit;
        z_mask_ |= bit;
        ++y_count_;
        break;
      case PauliLetter::kZ:
        z_mask_ |= bit;
        break;
      default:
        throw std::invalid_argument("invalid Pauli letter");
    }
  }
}

std::string PauliString::word() const {
  std::string w;
  for (PauliLetter l : letters_) w.push_back(to_char(l));
  return w;
}

std::uint64_t PauliString::index() const {
  std::uint64_t code = 0;
  for (PauliLetter l : letters_) code = (code << 2) | static_cast<std::uint64_t>(l);
  return code;
}

// Row i of P has its single nonzero in column i ^ x_mask.  Each Y contributes
// (-i)(-1)^{bit} and each Z contributes (-1)^{bit}, so
//   P[i, i ^ x] = (-i)^{n_y} (-1)^{popcount(i & z)}
// and the conjugate row value is i^{n_y} (-1)^{popcount(i & z)}.
std::vector<SparseEntry> PauliString::sparse_row() const {
  const std::uint64_t d = dim();
  const Complex phase = i_power(y_count_);
  std::vector<SparseEntry> row;
  row.reserve(d);
  for (std::uint64_t i = 0; i < d; ++i) {
    const double sign = (std::popcount(i & z_mask_) & 1) ? -1.0 : 1.0;
    row.push_back({static_cast<std::uint32_t>(column_of_row(i)), sign * phase});
  }
  return row;
}

std::vector<std::int8_t> PauliString::integer_row() const {
  const std::uint64_t d = dim();
  // i^{n_y} * i^{n_y} = (-1)^{n_y}
  const int base = (y_count_ & 1) ? -1 : 1;
  std::vector<std::int8_t> row(d);
  for (std::uint64_t i = 0; i < d; ++i) {
    row[i] = static_cast<std::int8_t>((std::popcount(i & z_mask_) & 1) ? -base : base);
  }
  return row;
}

ComplexMatrix PauliString::dense() const {
  const auto d = static_cast<Eigen::Index>(dim());
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (const SparseEntry& e : sparse_row()) {
    m.data()[e.column] = std::conj(e.value);
  }
  return m;
}

// ---------------------------------------------------------------------------

MeasurementSetting MeasurementSetting::parse(std::string_view word) {
  std::vector<PauliLetter> letters;
  letters.reserve(word.size());
  for (char c : word) letters.push_back(letter_from_char(c));
  return MeasurementSetting(std::move(letters));
}

MeasurementSetting MeasurementSetting::from_index(int num_qubits, std::uint64_t index) {
  check_qubit_count(num_qubits);
  if (index >= ipow(3, num_qubits)) throw std::invalid_argument("setting index out of range");
  std::vector<PauliLetter> letters(static_cast<std::size_t>(num_qubits));
  for (int q = num_qubits - 1; q >= 0; --q) {
    letters[static_cast<std::size_t>(q)] = static_cast<PauliLetter>(1 + index % 3);
    index /= 3;
  }
  return MeasurementSetting(std::move(letters));
}

MeasurementSetting::MeasurementSetting(std::vector<PauliLetter> letters) : letters_(std::move(letters)) {
  check_qubit_count(num_qubits());
  for (PauliLetter l : letters_) {
    if (l != PauliLetter::kX && l != PauliLetter::kY && l != PauliLetter::kZ) {
      throw std::invalid_argument("measurement settings use only X, Y and Z");
    }
  }
}

std::string MeasurementSetting::word() const {
  std::string w;
  for (PauliLetter l : letters_) w.push_back(to_char(l));
  return w;
}

PauliString MeasurementSetting::observable(std::uint64_t mask) const {
  const int n = num_qubits();
  if (mask >> n) throw std::invalid_argument("mask has bits beyond the qubit count");
  std::vector<PauliLetter> letters(letters_);
  for (int q = 0; q < n; ++q) {
    if (!((mask >> (n - 1 - q)) & 1)) letters[static_cast<std::size_t>(q)] = PauliLetter::kI;
  }
  return PauliString(std::move(letters));
}

std::int64_t MeasurementSetting::mask_of(const PauliString& p) const {
  const int n = num_qubits();
  if (p.num_qubits() != n) return -1;
  std::int64_t mask = 0;
  for (int q = 0; q < n; ++q) {
    const PauliLetter l = p.letters()[static_cast<std::size_t>(q)];
    if (l == PauliLetter::kI) continue;
    if (l != letters_[static_cast<std::size_t>(q)]) return -1;
    mask |= std::int64_t{1} << (n - 1 - q);
  }
  return mask;
}

std::vector<PauliString> observables_of_setting(const MeasurementSetting& setting) {
  const std::uint64_t count = dimension_of(setting.num_qubits());
  std::vector<PauliString> out;
  out.reserve(count);
  for (std::uint64_t a = 0; a < count; ++a) out.push_back(setting.observable(a));
  return out;
}

// ---------------------------------------------------------------------------

SensingMap::SensingMap(std::vector<PauliString> paulis, bool normalized) : normalized_(normalized) {
  if (paulis.empty()) throw std::invalid_argument("sensing map needs at least one Pauli");
  auto storage = std::make_shared<Storage>();
  storage->num_qubits = paulis.front().num_qubits();
  const std::size_t d = dimension_of(storage->num_qubits);
  std::unordered_set<std::uint64_t> seen;
  storage->columns.reserve(paulis.size() * d);
  storage->values.reserve(paulis.size() * d);
  for (const PauliString& p : paulis) {
    if (p.num_qubits() != storage->num_qubits) {
      throw std::invalid_argument("Pauli strings have different qubit counts");
    }
    if (!seen.insert(p.index()).second) {
      throw std::invalid_argument("duplicate Pauli string " + p.word());
    }
    storage->y_phase.push_back(static_cast<std::uint8_t>(p.y_count() % 4));
    for (std::uint64_t i = 0; i < d; ++i) {
      storage->columns.push_back(static_cast<std::uint32_t>(p.column_of_row(i)));
    }
    const std::vector<std::int8_t> r = p.integer_row();
    storage->values.insert(storage->values.end(), r.begin(), r.end());
  }
  storage->paulis = std::move(paulis);
  storage_ = std::move(storage);
  scale_ = normalized_ ? std::sqrt(static_cast<double>(dim()) / static_cast<double>(size())) : 1.0;
}

SensingMap::SensingMap(std::shared_ptr<const Storage> storage, bool normalized)
    : storage_(std::move(storage)), normalized_(normalized) {
  scale_ = normalized_ ? std::sqrt(static_cast<double>(dim()) / static_cast<double>(size())) : 1.0;
}

SensingMap SensingMap::with_normalization(bool normalized) const { return SensingMap(storage_, normalized); }

Complex SensingMap::diagonal_factor(std::size_t k) const {
  return scale_ * i_power(-static_cast<int>(storage_->y_phase.at(k)));
}

std::span<const std::uint32_t> SensingMap::row_columns(std::size_t k) const {
  const std::size_t d = dim();
  return std::span<const std::uint32_t>(storage_->columns).subspan(k * d, d);
}

std::span<const std::int8_t> SensingMap::row_values(std::size_t k) const {
  const std::size_t d = dim();
  return std::span<const std::int8_t>(storage_->values).subspan(k * d, d);
}

SensingMap build_sensing_map(std::vector<PauliString> paulis, bool normalized) {
  return SensingMap(std::move(paulis), normalized);
}

RealVector apply_sensing(const SensingMap& map, const HermitianMatrix& x) {
  if (x.num_qubits() != map.num_qubits()) throw std::invalid_argument("dimension mismatch");
  const Complex* flat = x.matrix().data();
  const std::size_t m = map.size();
  const double tol = 1e-10 * std::max(1.0, x.matrix().cwiseAbs().maxCoeff() * static_cast<double>(map.dim()));
  const bool finite = x.all_finite();
  RealVector y(static_cast<Eigen::Index>(m));
  for (std::size_t k = 0; k < m; ++k) {
    const auto cols = map.row_columns(k);
    const auto vals = map.row_values(k);
    Complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < cols.size(); ++j) {
      acc += static_cast<double>(vals[j]) * flat[cols[j]];
    }
    // D_kk / scale = (-i)^{n_y}
    const Complex tr = map.diagonal_factor(k) * acc;
    if (finite && std::abs(tr.imag()) > tol * map.scale()) {
      throw std::domain_error("sensing produced a complex trace; input is not Hermitian");
    }
    y[static_cast<Eigen::Index>(k)] = tr.real();
  }
  return y;
}

HermitianMatrix apply_adjoint(const SensingMap& map, const RealVector& y) {
  if (static_cast<std::size_t>(y.size()) != map.size()) throw std::invalid_argument("length mismatch");
  const auto d = static_cast<Eigen::Index>(map.dim());
  ComplexMatrix x = ComplexMatrix::Zero(d, d);
  Complex* flat = x.data();
  for (std::size_t k = 0; k < map.size(); ++k) {
    // conj(D_kk) * y_k; entries of P_k are conj(D_kk / scale) * R_kj.
    const Complex w = std::conj(map.diagonal_factor(k)) * y[static_cast<Eigen::Index>(k)];
    const auto cols = map.row_columns(k);
    const auto vals = map.row_values(k);
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (vals[j] > 0) {
        flat[cols[j]] += w;
      } else {
        flat[cols[j]] -= w;
      }
    }
  }
  return HermitianMatrix::symmetrized(map.num_qubits(), x);
}

// ---------------------------------------------------------------------------

std::vector<PauliString> sample_observables(int num_qubits, std::size_t count, Rng& rng) {
  check_qubit_count(num_qubits);
  const std::uint64_t population = ipow(4, num_qubits);
  if (count > population) throw std::invalid_argument("cannot sample more than 4^n observables");
  SparseShuffle shuffle(population);
  std::vector<PauliString> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(PauliString::from_index(num_qubits, shuffle.next(rng)));
  return out;
}

SettingsSample sample_settings_until(int num_qubits, std::size_t target, Rng& rng) {
  check_qubit_count(num_qubits);
  const std::uint64_t total_paulis = ipow(4, num_qubits);
  if (target > total_paulis) throw std::invalid_argument("target exceeds 4^n observables");
  const std::uint64_t per_setting = dimension_of(num_qubits);
  SparseShuffle shuffle(ipow(3, num_qubits));
  std::vector<bool> covered(total_paulis, false);
  SettingsSample out;
  while (out.observables.size() < target) {
    MeasurementSetting s = MeasurementSetting::from_index(num_qubits, shuffle.next(rng));
    for (std::uint64_t a = 0; a < per_setting; ++a) {
      PauliString p = s.observable(a);
      const std::uint64_t idx = p.index();
      if (!covered[idx]) {
        covered[idx] = true;
        out.observables.push_back(std::move(p));
      }
    }
    out.settings.push_back(std::move(s));
  }
  return out;
}

std::vector<PauliString> covered_observables(const std::vector<MeasurementSetting>& settings) {
  std::vector<PauliString> out;
  std::unordered_set<std::uint64_t> seen;
  for (const MeasurementSetting& s : settings) {
    const std::uint64_t count = dimension_of(s.num_qubits());
    for (std::uint64_t a = 0; a < count; ++a) {
      PauliString p = s.observable(a);
      if (seen.insert(p.index()).second) out.push_back(std::move(p));
    }
  }
  return out;
}

}  // namespace ampqst
