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

#include "ampqst/measurement.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "local_ops.hpp"

namespace ampqst {

namespace {

// Unitary taking the +1 eigenvector of the letter to |0>, followed by the
// optional overrotation.
Eigen::Matrix2cd basis_change(PauliLetter letter, double theta) {
  const double s = 1.0 / std::sqrt(2.0);
  const Complex i{0.0, 1.0};
  Eigen::Matrix2cd b;
  switch (letter) {
    case PauliLetter::kX:
      b << s, s, s, -s;
      break;
    case PauliLetter::kY:
      b << s, -i * s, s, i * s;
      break;
    default:
      return Eigen::Matrix2cd::Identity();
  }
  if (theta == 0.0) return b;
  Eigen::Matrix2cd r = rx(theta);
  return r * b;
}

// Averages parity estimates of every setting into the covered Paulis.
MeasurementData expectations_from_frequencies(const std::vector<MeasurementSetting>& settings,
                                              const std::vector<RealVector>& freqs) {
  std::vector<PauliString> paulis = covered_observables(settings);
  std::unordered_map<std::uint64_t, std::size_t> position;
  for (std::size_t k = 0; k < paulis.size(); ++k) position.emplace(paulis[k].index(), k);

  RealVector sums = RealVector::Zero(static_cast<Eigen::Index>(paulis.size()));
  std::vector<int> hits(paulis.size(), 0);
  for (std::size_t s = 0; s < settings.size(); ++s) {
    const RealVector est = parity_estimates(as_span(freqs[s]));
    for (Eigen::Index a = 0; a < est.size(); ++a) {
      const std::size_t pos = position.at(settings[s].observable(static_cast<std::uint64_t>(a)).index());
      sums[static_cast<Eigen::Index>(pos)] += est[a];
      ++hits[pos];
    }
  }
  for (std::size_t k = 0; k < paulis.size(); ++k) sums[static_cast<Eigen::Index>(k)] /= hits[k];
  return MeasurementData{SensingMap(std::move(paulis), false), std::move(sums), 0, 0, std::nullopt};
}

OutcomeDistribution measure_with_noise(const DensityMatrix& rho, const MeasurementSetting& setting,
                                       const NoiseModel& noise) {
  OutcomeDistribution dist = noisy_basis_measurement(rho, setting, noise.coherent_theta);
  if (noise.readout_q != 0.0) dist = apply_readout(dist, noise.readout_q);
  return dist;
}

// Expectation of one Pauli measured through its own basis-change circuit,
// with unmeasured (I) qubits read out in Z and marginalized away.
double noisy_pauli_expectation(const DensityMatrix& rho, const PauliString& p, const NoiseModel& noise) {
  std::vector<PauliLetter> letters = p.letters();
  for (PauliLetter& l : letters) {
    if (l == PauliLetter::kI) l = PauliLetter::kZ;
  }
  const MeasurementSetting setting(std::move(letters));
  const OutcomeDistribution dist = measure_with_noise(rho, setting, noise);
  return estimate_from_setting(as_span(dist.probs), p.x_mask() | p.z_mask());
}

}  // namespace

double pauli_expectation(const HermitianMatrix& rho, const PauliString& p) {
  if (rho.num_qubits() != p.num_qubits()) throw std::invalid_argument("dimension mismatch");
  const std::uint64_t d = rho.dim();
  const ComplexMatrix& m = rho.matrix();
  double acc = 0.0;
  // Tr[P rho] = sum_i P[i, i^x] rho[i^x, i]; the imaginary parts cancel.
  for (std::uint64_t i = 0; i < d; ++i) {
    const std::uint64_t j = i ^ p.x_mask();
    const Complex v = m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
    const double sign = (std::popcount(i & p.z_mask()) & 1) ? -1.0 : 1.0;
    // (-i)^{n_y} * v, real part only
    switch (p.y_count() % 4) {
      case 0:
        acc += sign * v.real();
        break;
      case 1:
        acc += sign * v.imag();
        break;
      case 2:
        acc -= sign * v.real();
        break;
      default:
        acc -= sign * v.imag();
        break;
    }
  }
  return acc;
}

RealVector exact_expectations(const DensityMatrix& rho, const SensingMap& map) {
  RealVector y(static_cast<Eigen::Index>(map.size()));
  for (std::size_t k = 0; k < map.size(); ++k) {
    y[static_cast<Eigen::Index>(k)] = pauli_expectation(rho.hermitian(), map.paulis()[k]);
  }
  return y;
}

double sample_shots_observable(double expectation, std::int64_t shots, Rng& rng) {
  if (shots < 1) throw std::invalid_argument("shot count must be positive");
  double p = 0.5 * (expectation + 1.0);
  if (!(p >= -1e-10 && p <= 1.0 + 1e-10)) {
    throw std::domain_error("outcome probability outside [0, 1]; the state is corrupted");
  }
  p = std::clamp(p, 0.0, 1.0);
  std::binomial_distribution<std::int64_t> binomial(shots, p);
  const std::int64_t plus = binomial(rng);
  return 2.0 * static_cast<double>(plus) / static_cast<double>(shots) - 1.0;
}

double sample_shots_observable(const DensityMatrix& rho, const PauliString& p, std::int64_t shots, Rng& rng) {
  return sample_shots_observable(pauli_expectation(rho.hermitian(), p), shots, rng);
}

OutcomeDistribution outcome_distribution(const DensityMatrix& rho, const MeasurementSetting& setting) {
  return noisy_basis_measurement(rho, setting, 0.0);
}

OutcomeDistribution noisy_basis_measurement(const DensityMatrix& rho, const MeasurementSetting& setting,
                                            double theta) {
  const int n = rho.num_qubits();
  if (setting.num_qubits() != n) throw std::invalid_argument("dimension mismatch");
  ComplexMatrix m = rho.matrix();
  for (int q = 1; q <= n; ++q) {
    const PauliLetter letter = setting.letters()[static_cast<std::size_t>(q - 1)];
    if (letter == PauliLetter::kZ) continue;
    detail::conjugate_local(m, basis_change(letter, theta), detail::qubit_bit(n, q));
  }
  return OutcomeDistribution{setting, m.diagonal().real()};
}

double estimate_from_setting(std::span<const double> probs, std::uint64_t mask) {
  const std::size_t size = probs.size();
  if (size == 0 || (size & (size - 1)) != 0) throw std::invalid_argument("distribution length is not 2^n");
  if (mask >= size) throw std::invalid_argument("mask length exceeds the distribution");
  double acc = 0.0;
  for (std::size_t b = 0; b < size; ++b) {
    acc += (std::popcount(b & mask) & 1) ? -probs[b] : probs[b];
  }
  return acc;
}

RealVector parity_estimates(std::span<const double> probs) {
  const std::size_t size = probs.size();
  if (size == 0 || (size & (size - 1)) != 0) throw std::invalid_argument("distribution length is not 2^n");
  RealVector v = Eigen::Map<const RealVector>(probs.data(), static_cast<Eigen::Index>(size));
  for (std::size_t len = 1; len < size; len <<= 1) {
    for (std::size_t start = 0; start < size; start += 2 * len) {
      for (std::size_t j = start; j < start + len; ++j) {
        const double a = v[static_cast<Eigen::Index>(j)];
        const double b = v[static_cast<Eigen::Index>(j + len)];
        v[static_cast<Eigen::Index>(j)] = a + b;
        v[static_cast<Eigen::Index>(j + len)] = a - b;
      }
    }
  }
  return v;
}

std::vector<std::int64_t> sample_counts(const RealVector& probs, std::int64_t shots, Rng& rng) {
  if (shots < 1) throw std::invalid_argument("shot count must be positive");
  const auto size = static_cast<std::size_t>(probs.size());
  std::vector<std::int64_t> counts(size, 0);
  double remaining_mass = 0.0;
  for (Eigen::Index b = 0; b < probs.size(); ++b) remaining_mass += std::max(0.0, probs[b]);
  std::int64_t remaining = shots;
  for (std::size_t b = 0; b + 1 < size && remaining > 0; ++b) {
    const double pb = std::max(0.0, probs[static_cast<Eigen::Index>(b)]);
    const double cond = remaining_mass > 0.0 ? std::clamp(pb / remaining_mass, 0.0, 1.0) : 0.0;
    std::binomial_distribution<std::int64_t> binomial(remaining, cond);
    counts[b] = binomial(rng);
    remaining -= counts[b];
    remaining_mass -= pb;
  }
  counts[size - 1] += remaining;
  return counts;
}

// ---------------------------------------------------------------------------

MeasurementData build_measurements(const DensityMatrix& rho, const MeasurementPlan& plan, ShotCount shots,
                                   const NoiseModel& noise, std::uint64_t seed) {
  const int n = rho.num_qubits();
  if (plan.num_qubits != n) throw std::invalid_argument("plan and state have different qubit counts");
  if (shots && *shots < 1) throw std::invalid_argument("shot count must be positive");
  noise.validate(n);

  ShotRecord record;
  record.num_qubits = n;
  record.shots = shots;
  record.mode = plan.mode;

  if (plan.mode == PlanMode::kObservables) {
    SensingMap map(plan.observables, false);
    RealVector y(static_cast<Eigen::Index>(map.size()));
    std::size_t draws = 0;
    for (std::size_t k = 0; k < map.size(); ++k) {
      const PauliString& p = map.paulis()[k];
      const double expectation = noise.has_measurement_noise() ? noisy_pauli_expectation(rho, p, noise)
                                                               : pauli_expectation(rho.hermitian(), p);
      double value = expectation;
      if (shots) {
        Rng rng = make_rng(seed, k);
        value = sample_shots_observable(expectation, *shots, rng);
        ++draws;
      }
      y[static_cast<Eigen::Index>(k)] = value;
      record.observable_values.emplace_back(p, value);
    }
    return MeasurementData{std::move(map), std::move(y), draws, 0, std::move(record)};
  }

  std::vector<RealVector> freqs;
  freqs.reserve(plan.settings.size());
  for (std::size_t s = 0; s < plan.settings.size(); ++s) {
    const MeasurementSetting& setting = plan.settings[s];
    const OutcomeDistribution dist = noise.has_measurement_noise() ? measure_with_noise(rho, setting, noise)
                                                                   : outcome_distribution(rho, setting);
    if (!shots) {
      freqs.push_back(dist.probs);
      continue;
    }
    Rng rng = make_rng(seed, s);
    const std::vector<std::int64_t> counts = sample_counts(dist.probs, *shots, rng);
    RealVector f(static_cast<Eigen::Index>(counts.size()));
    SettingCounts sc{setting, {}};
    for (std::size_t b = 0; b < counts.size(); ++b) {
      f[static_cast<Eigen::Index>(b)] = static_cast<double>(counts[b]) / static_cast<double>(*shots);
      if (counts[b] > 0) sc.counts.emplace_back(b, counts[b]);
    }
    freqs.push_back(std::move(f));
    record.setting_counts.push_back(std::move(sc));
  }
  MeasurementData data = expectations_from_frequencies(plan.settings, freqs);
  data.distributions_simulated = plan.settings.size();
  if (shots) data.record = std::move(record);
  return data;
}

MeasurementData measurements_from_record(const ShotRecord& record) {
  if (record.mode == PlanMode::kObservables) {
    std::vector<PauliString> paulis;
    RealVector y(static_cast<Eigen::Index>(record.observable_values.size()));
    for (std::size_t k = 0; k < record.observable_values.size(); ++k) {
      paulis.push_back(record.observable_values[k].first);
      y[static_cast<Eigen::Index>(k)] = record.observable_values[k].second;
    }
    return MeasurementData{SensingMap(std::move(paulis), false), std::move(y), 0, 0, record};
  }
  std::vector<MeasurementSetting> settings;
  std::vector<RealVector> freqs;
  const auto d = static_cast<Eigen::Index>(dimension_of(record.num_qubits));
  for (const SettingCounts& sc : record.setting_counts) {
    std::int64_t total = 0;
    for (const auto& [b, c] : sc.counts) total += c;
    if (total <= 0) throw std::invalid_argument("setting " + sc.setting.word() + " has no shots");
    RealVector f = RealVector::Zero(d);
    for (const auto& [b, c] : sc.counts) f[static_cast<Eigen::Index>(b)] += static_cast<double>(c) / static_cast<double>(total);
    settings.push_back(sc.setting);
    freqs.push_back(std::move(f));
  }
  MeasurementData data = expectations_from_frequencies(settings, freqs);
  data.record = record;
  return data;
}

}  // namespace ampqst
