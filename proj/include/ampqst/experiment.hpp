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

// End-to-end experiment driver shared by the command-line tool and the tests.

#ifndef AMPQST_EXPERIMENT_HPP
#define AMPQST_EXPERIMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ampqst/amp.hpp"
#include "ampqst/measurement.hpp"
#include "ampqst/mifgd.hpp"

namespace ampqst {

enum class Algorithm { kAmp, kMifgd };
std::string_view to_string(Algorithm a);

/// Channel strengths as given by the user; turned into a NoiseModel once the
/// qubit count is known.
struct NoiseSpec {
  double depolarizing = 0.0;
  double coherent = 0.0;
  double coherent_prep = 0.0;
  double readout = 0.0;
  double bit_flip = 0.0;
  double phase_flip = 0.0;
  double loss = 0.0;

  NoiseModel to_model(int num_qubits) const;
  /// Sets one channel by key (depolarizing, coherent, coherent_prep, readout,
  /// bitflip, phaseflip, loss).
  void set(std::string_view key, double value);
};

/// Parses "key=val,key=val".
NoiseSpec parse_noise(std::string_view text);

/// "inf" or a positive integer.
ShotCount parse_shot_count(std::string_view text);
std::string format_shot_count(ShotCount shots);

struct ExperimentConfig {
  // State.
  std::string state = "random";  // ghz | hadamard | w | random
  int qubits = 3;
  std::optional<int> rank;  // random states only; default 1
  std::string truth_in;     // DMAT file replacing the generated target

  // Measurement plan.  Exactly one of observables / settings_target /
  // fraction, unless plan_in is set.
  PlanMode mode = PlanMode::kObservables;
  std::optional<std::size_t> observables;
  std::optional<std::size_t> settings_target;
  std::optional<double> fraction;
  ShotCount shots = std::int64_t{1024};
  std::string plan_in;
  std::string plan_out;
  std::string shots_in;
  std::string shots_out;

  // Reconstruction.
  Algorithm algorithm = Algorithm::kAmp;
  AmpConfig amp;
  MifgdConfig mifgd;
  std::optional<int> max_iter;

  NoiseSpec noise;

  int trials = 1;
  std::uint64_t seed = 1;
  int threads = 0;  // 0: hardware concurrency
  std::string out;
  std::string trace;
  std::string gnuplot;
  bool timing = false;

  // settings-table
  std::vector<int> qubit_list{3, 4, 5};
  std::vector<double> fraction_list{0.25, 0.5, 0.75, 1.0};

  // noise-study
  std::string sweep_key;
  std::vector<double> sweep_levels;

  /// Throws std::invalid_argument when the options contradict each other.
  void validate() const;
  /// Measurement budget M implied by the plan options (observables mode) or
  /// the coverage target (settings mode).
  std::size_t target_measurements() const;
};

/// Sets one option by its command-line name (without dashes), e.g.
/// ("max-iter", "500").  Throws std::invalid_argument on unknown keys or
/// malformed values.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Every key accepted by apply_setting.
const std::vector<std::string>& setting_keys();

/// Reads `key = value` lines; `#` starts a comment.  Errors are
/// std::runtime_error naming the line.
void load_config(ExperimentConfig& config, std::istream& in);

struct TrialResult {
  int trial = 0;
  std::string state;
  int qubits = 0;
  std::size_t measurements = 0;  // M
  std::size_t circuits = 0;      // T
  ShotCount shots;
  Algorithm algorithm = Algorithm::kAmp;
  double nmse = 0.0;
  double fidelity_truth = 0.0;
  double fidelity_target = 0.0;
  int iterations = 0;
  SolverStatus status = SolverStatus::kMaxIterations;
  double seconds = 0.0;
  /// F(target, prepared state); 1 without state-level noise.
  double preparation_fidelity = 1.0;
};

struct Range {
  double min = 0.0;
  double mean = 0.0;
  double max = 0.0;
};

Range summarize(const std::vector<double>& values);

struct ReconstructReport {
  std::vector<TrialResult> trials;
  Range nmse;
  Range fidelity_truth;
  Range fidelity_target;
};

/// Per trial: build the target, prepare it under the state-level noise, plan
/// and simulate the measurements, reconstruct, and score.  Trials run on a
/// worker pool with random streams keyed by (seed, trial); results are in
/// trial order.  Writes trace, plan and shot files when configured.  A
/// diverged reconstruction scores fidelity 0.
ReconstructReport cmd_reconstruct(const ExperimentConfig& config);

/// Columns trial,state,n,M,T,N,algorithm,nmse,fidelity_truth,
/// fidelity_target,iters,seconds.  `seconds` stays empty unless timing is on,
/// so repeated runs give identical files.
void write_results_csv(std::ostream& out, const std::vector<TrialResult>& results, bool timing);
void write_summary(std::ostream& out, const ReconstructReport& report);

struct SettingsTableRow {
  int qubits = 0;
  double fraction = 0.0;
  std::size_t measurements = 0;
  double mean_settings = 0.0;
  std::size_t min_settings = 0;
  std::size_t max_settings = 0;
  double stddev_settings = 0.0;
};

/// Mean number of settings drawn before the covered observables reach
/// round(fraction * 4^n), over `trials` seeds.
std::vector<SettingsTableRow> cmd_settings_table(const std::vector<int>& qubits, const std::vector<double>& fractions,
                                                 int trials, std::uint64_t seed);
void write_settings_table_csv(std::ostream& out, const std::vector<SettingsTableRow>& rows);

struct NoiseStudyRow {
  std::string key;
  double level = 0.0;
  Range fidelity_estimate;  // F(target, reconstruction)
  Range fidelity_true;      // F(target, prepared state)
};

/// Runs cmd_reconstruct once per sweep level with the swept channel set to
/// that level on top of config.noise.
std::vector<NoiseStudyRow> cmd_noise_study(const ExperimentConfig& config);
void write_noise_study_csv(std::ostream& out, const std::vector<NoiseStudyRow>& rows);

/// The target state of trial 0, or the prepared state when `prepared`.
DensityMatrix cmd_dump_state(const ExperimentConfig& config, bool prepared);

/// Path of the per-trial file: `base` unchanged for a single trial, else with
/// `_trial<k>` before the extension.
std::string trial_path(const std::string& base, int trial, int trials);

/// gnuplot scripts for the CSV outputs.
void write_trace_gnuplot(std::ostream& out, const std::string& trace_csv, bool with_metrics);
void write_noise_study_gnuplot(std::ostream& out, const std::string& study_csv);

}  // namespace ampqst

#endif  // AMPQST_EXPERIMENT_HPP
