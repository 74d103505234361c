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

#ifndef AMPQST_MEASUREMENT_HPP
#define AMPQST_MEASUREMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ampqst/pauli.hpp"
#include "ampqst/states.hpp"

namespace ampqst {

/// Shots per circuit; std::nullopt means infinitely many (exact expectations).
using ShotCount = std::optional<std::int64_t>;

/// Probabilities of the 2^n outcome bitstrings of one measurement setting.
/// Bitstring b uses the basis-index convention: qubit 1 is the MSB.
struct OutcomeDistribution {
  MeasurementSetting setting;
  RealVector probs;
};

// ---------------------------------------------------------------------------
// Ideal measurement

/// Tr[P rho].
double pauli_expectation(const HermitianMatrix& rho, const PauliString& p);

/// Tr[P_k rho] for every Pauli of the map, without the map's scale.
RealVector exact_expectations(const DensityMatrix& rho, const SensingMap& map);

/// (2/N) B(N, p) - 1 with p = (expectation + 1) / 2.  Throws
/// std::domain_error when p lies outside [-1e-10, 1 + 1e-10].
double sample_shots_observable(double expectation, std::int64_t shots, Rng& rng);
double sample_shots_observable(const DensityMatrix& rho, const PauliString& p, std::int64_t shots, Rng& rng);

/// probs[b] = Tr[(S_1)_{b_1} x ... x (S_n)_{b_n} rho].
OutcomeDistribution outcome_distribution(const DensityMatrix& rho, const MeasurementSetting& setting);

inline std::span<const double> as_span(const RealVector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

/// sum_b f(b & mask) probs[b] with f the parity sign; `probs` may hold exact
/// probabilities or empirical frequencies.
double estimate_from_setting(std::span<const double> probs, std::uint64_t mask);

/// All 2^n parity estimates at once (Walsh-Hadamard transform of `probs`);
/// entry a equals estimate_from_setting(probs, a).
RealVector parity_estimates(std::span<const double> probs);

/// One multinomial draw of `shots` outcomes from the distribution.
std::vector<std::int64_t> sample_counts(const RealVector& probs, std::int64_t shots, Rng& rng);

// ---------------------------------------------------------------------------
// Noise channels

/// Per-qubit weights of the photonic error mixture.
struct FlipLossWeights {
  double bit_flip = 0.0;
  double phase_flip = 0.0;
  double loss = 0.0;
};

/// p0 rho + sum_i (p_i X_i rho X_i + q_i Z_i rho Z_i + r_i loss_i[rho]).
struct PhotonicNoise {
  double identity_weight = 1.0;
  std::vector<FlipLossWeights> per_qubit;

  /// The same (p, q, r) on every qubit and p0 = 1 - n (p + q + r).
  static PhotonicNoise uniform(int num_qubits, FlipLossWeights weights);
  /// Throws std::invalid_argument unless every weight is >= 0 and they sum
  /// to 1 within 1e-10.
  void validate(int num_qubits) const;
};

struct NoiseModel {
  /// State-level depolarization strength.
  double depolarizing = 0.0;
  /// Overrotation RX(theta) appended to every X/Y basis change at readout.
  double coherent_theta = 0.0;
  /// State-level coherent error C = RX(theta)^{x n}.
  double coherent_prep_theta = 0.0;
  /// Classical per-bit readout flip probability.
  double readout_q = 0.0;
  std::optional<PhotonicNoise> photonic;

  bool has_measurement_noise() const { return coherent_theta != 0.0 || readout_q != 0.0; }
  void validate(int num_qubits) const;
};

/// (1 - eps) rho + (eps / d) I.
DensityMatrix apply_depolarizing(const DensityMatrix& rho, double eps);
/// C rho C^dagger; throws unless C^dagger C = I within 1e-10.
DensityMatrix apply_coherent(const DensityMatrix& rho, const ComplexMatrix& unitary);
/// Independent per-bit flips with probability q, convolved into the
/// distribution.
OutcomeDistribution apply_readout(const OutcomeDistribution& dist, double q);

enum class FlipKind { kBit, kPhase };

/// X_i rho X_i or Z_i rho Z_i for qubit i in [1, n].
DensityMatrix apply_pauli_flip(const DensityMatrix& rho, int qubit, FlipKind kind);
/// Loss of qubit i in [1, n]: trace the qubit out and replace it by I/2.
DensityMatrix apply_loss(const DensityMatrix& rho, int qubit);
DensityMatrix apply_composite(const DensityMatrix& rho, const PhotonicNoise& noise);

/// 2x2 RX(theta).
ComplexMatrix rx(double theta);
/// RX(theta) on every qubit.
ComplexMatrix rx_product(int num_qubits, double theta);

/// Outcome distribution when each X/Y basis change is followed by an extra
/// RX(theta) before the computational-basis readout.  Z letters are read out
/// directly; theta = 0 reproduces outcome_distribution.
OutcomeDistribution noisy_basis_measurement(const DensityMatrix& rho, const MeasurementSetting& setting,
                                            double theta);

/// Applies the state-level parts of the model in the order: photonic mixture,
/// coherent preparation error, depolarization.
DensityMatrix prepare_noisy_state(const DensityMatrix& target, const NoiseModel& noise);

// ---------------------------------------------------------------------------
// Shot records and the SHOTS v1 text format:
//   SHOTS v1 n=<n> N=<N|inf> mode=<observables|settings>
//   <pauli_word> <y_k>                            (observables mode)
//   <setting_word> <bitstring>:<count> ...         (settings mode)

struct SettingCounts {
  MeasurementSetting setting;
  /// (bitstring, count) pairs with nonzero count, bitstrings ascending.
  std::vector<std::pair<std::uint64_t, std::int64_t>> counts;
};

struct ShotRecord {
  int num_qubits = 0;
  ShotCount shots;
  PlanMode mode = PlanMode::kObservables;
  std::vector<std::pair<PauliString, double>> observable_values;
  std::vector<SettingCounts> setting_counts;
};

void write_shots(std::ostream& out, const ShotRecord& record);
/// Throws std::runtime_error with a line number on malformed input.
ShotRecord read_shots(std::istream& in);

// ---------------------------------------------------------------------------

struct MeasurementData {
  /// Unnormalized map over the measured Paulis, aligned with y.
  SensingMap map;
  RealVector y;
  std::size_t binomial_draws = 0;
  std::size_t distributions_simulated = 0;
  /// Raw data, absent for settings mode with infinite shots.
  std::optional<ShotRecord> record;
};

/// Simulates the data of a measurement plan on the prepared state `rho`.
/// Only the measurement-side parts of `noise` (coherent_theta, readout_q) are
/// used here; state-level noise belongs in prepare_noisy_state.
///
/// Observables mode draws one binomial per Pauli.  Settings mode draws one
/// multinomial of N shots per setting and estimates every covered Pauli from
/// those shared shots; a Pauli covered by several settings gets the mean of
/// their estimates.  Random streams are keyed by (seed, circuit index).
MeasurementData build_measurements(const DensityMatrix& rho, const MeasurementPlan& plan, ShotCount shots,
                                   const NoiseModel& noise, std::uint64_t seed);

/// Rebuilds (map, y) from recorded data.
MeasurementData measurements_from_record(const ShotRecord& record);

}  // namespace ampqst

#endif  // AMPQST_MEASUREMENT_HPP
