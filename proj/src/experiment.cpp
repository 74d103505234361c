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

#include "ampqst/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace ampqst {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw std::invalid_argument("bad value '" + std::string(value) + "' for " + std::string(key));
}

double parse_double(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) bad_value(key, text);
  return v;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) bad_value(key, text);
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  const std::string s = lowercase(trim(text));
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  bad_value(key, text);
}

std::vector<int> parse_int_list(std::string_view key, std::string_view text) {
  std::vector<int> out;
  for (const std::string& part : split(text, ',')) {
    const auto dash = part.find('-');
    if (dash != std::string::npos && dash > 0) {
      const int lo = parse_int<int>(key, part.substr(0, dash));
      const int hi = parse_int<int>(key, part.substr(dash + 1));
      if (hi < lo) bad_value(key, text);
      for (int v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(parse_int<int>(key, part));
    }
  }
  return out;
}

std::vector<double> parse_double_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  for (const std::string& part : split(text, ',')) out.push_back(parse_double(key, part));
  return out;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct TrialSeeds {
  std::uint64_t state;
  std::uint64_t plan;
  std::uint64_t shots;
  std::uint64_t solver;
};

TrialSeeds trial_seeds(std::uint64_t seed, int trial) {
  Rng rng = make_rng(seed, static_cast<std::uint64_t>(trial));
  TrialSeeds s{};
  s.state = rng();
  s.plan = rng();
  s.shots = rng();
  s.solver = rng();
  return s;
}

// Inputs loaded once and shared read-only by every trial.
struct SharedInputs {
  std::optional<DensityMatrix> truth;
  std::optional<MeasurementPlan> plan;
  std::optional<ShotRecord> record;
};

SharedInputs load_inputs(const ExperimentConfig& c) {
  SharedInputs in;
  if (!c.truth_in.empty()) {
    std::ifstream f(c.truth_in);
    if (!f) throw std::runtime_error("cannot open " + c.truth_in);
    HermitianMatrix h = read_dmat(f);
    if (h.num_qubits() != c.qubits) throw std::invalid_argument(c.truth_in + " does not have n = " + std::to_string(c.qubits));
    in.truth = DensityMatrix(std::move(h));
  }
  if (!c.plan_in.empty()) {
    std::ifstream f(c.plan_in);
    if (!f) throw std::runtime_error("cannot open " + c.plan_in);
    in.plan = read_plan(f);
    if (in.plan->num_qubits != c.qubits) throw std::invalid_argument(c.plan_in + " does not have n = " + std::to_string(c.qubits));
  }
  if (!c.shots_in.empty()) {
    std::ifstream f(c.shots_in);
    if (!f) throw std::runtime_error("cannot open " + c.shots_in);
    in.record = read_shots(f);
    if (in.record->num_qubits != c.qubits) throw std::invalid_argument(c.shots_in + " does not have n = " + std::to_string(c.qubits));
  }
  return in;
}

DensityMatrix make_target(const ExperimentConfig& c, const SharedInputs& in, std::uint64_t state_seed) {
  if (in.truth) return *in.truth;
  if (c.state == "random") {
    Rng rng = make_rng(state_seed);
    return make_random_state(c.qubits, c.rank.value_or(1), rng);
  }
  return pure_density(make_named_state(parse_named_state(c.state), c.qubits));
}

MeasurementPlan make_plan(const ExperimentConfig& c, const SharedInputs& in, std::uint64_t plan_seed) {
  if (in.plan) return *in.plan;
  Rng rng = make_rng(plan_seed);
  MeasurementPlan plan;
  plan.num_qubits = c.qubits;
  plan.mode = c.mode;
  if (c.mode == PlanMode::kObservables) {
    plan.observables = sample_observables(c.qubits, c.target_measurements(), rng);
  } else {
    plan.settings = sample_settings_until(c.qubits, c.target_measurements(), rng).settings;
  }
  return plan;
}

template <typename Writer>
void write_file(const std::string& path, Writer&& writer) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  writer(f);
  if (!f) throw std::runtime_error("error writing " + path);
}

TrialResult run_trial(const ExperimentConfig& c, const SharedInputs& in, int trial) {
  const auto start = std::chrono::steady_clock::now();
  const TrialSeeds seeds = trial_seeds(c.seed, trial);
  const DensityMatrix target = make_target(c, in, seeds.state);
  const NoiseModel model = c.noise.to_model(c.qubits);
  const DensityMatrix prepared = prepare_noisy_state(target, model);

  TrialResult r;
  r.trial = trial;
  r.state = in.truth ? "file" : c.state;
  r.qubits = c.qubits;
  r.algorithm = c.algorithm;

  MeasurementData data = [&] {
    if (in.record) {
      r.shots = in.record->shots;
      r.circuits = in.record->mode == PlanMode::kSettings ? in.record->setting_counts.size()
                                                          : in.record->observable_values.size();
      return measurements_from_record(*in.record);
    }
    const MeasurementPlan plan = make_plan(c, in, seeds.plan);
    if (!c.plan_out.empty()) {
      write_file(trial_path(c.plan_out, trial, c.trials), [&](std::ostream& o) { write_plan(o, plan); });
    }
    r.shots = c.shots;
    r.circuits = plan.mode == PlanMode::kSettings ? plan.settings.size() : plan.observables.size();
    return build_measurements(prepared, plan, c.shots, model, seeds.shots);
  }();
  r.measurements = data.map.size();
  if (!c.shots_out.empty() && data.record) {
    write_file(trial_path(c.shots_out, trial, c.trials), [&](std::ostream& o) { write_shots(o, *data.record); });
  }

  std::optional<HermitianMatrix> estimate;
  if (c.algorithm == Algorithm::kAmp) {
    AmpConfig amp = c.amp;
    amp.seed = seeds.solver;
    if (c.max_iter) amp.max_iter = *c.max_iter;
    const bool tracing = !c.trace.empty();
    AmpResult res = run_amp(data.map, data.y, amp, tracing ? &prepared : nullptr);
    if (tracing) {
      write_file(trial_path(c.trace, trial, c.trials), [&](std::ostream& o) { write_trace_csv(o, res.trace); });
    }
    r.iterations = res.iterations;
    r.status = res.status;
    estimate = std::move(res.estimate);
  } else {
    MifgdConfig mifgd = c.mifgd;
    mifgd.seed = seeds.solver;
    if (c.max_iter) mifgd.max_iter = *c.max_iter;
    MifgdResult res = run_mifgd(data.map, data.y, mifgd);
    r.iterations = res.iterations;
    r.status = res.status;
    estimate = std::move(res.estimate);
  }

  r.nmse = nmse(prepared, *estimate);
  if (!std::isfinite(r.nmse)) r.nmse = HUGE_VAL;
  if (r.status == SolverStatus::kDiverged) {
    r.fidelity_truth = 0.0;
    r.fidelity_target = 0.0;
  } else {
    r.fidelity_truth = state_fidelity(prepared, *estimate);
    r.fidelity_target = state_fidelity(target, *estimate);
  }
  r.preparation_fidelity = state_fidelity(target, prepared);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<TrialResult> run_pool(const ExperimentConfig& c) {
  c.validate();
  const SharedInputs inputs = load_inputs(c);
  const auto n_trials = static_cast<std::size_t>(c.trials);
  std::vector<std::optional<TrialResult>> slots(n_trials);
  std::vector<std::exception_ptr> errors(n_trials);
  std::atomic<int> next{0};
  unsigned workers = c.threads > 0 ? static_cast<unsigned>(c.threads) : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(c.trials));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int k = next++; k < c.trials; k = next++) {
          try {
            slots[static_cast<std::size_t>(k)] = run_trial(c, inputs, k);
          } catch (...) {
            errors[static_cast<std::size_t>(k)] = std::current_exception();
          }
        }
      });
    }
  }
  std::vector<TrialResult> results;
  for (std::size_t k = 0; k < n_trials; ++k) {
    if (errors[k]) std::rethrow_exception(errors[k]);
    results.push_back(std::move(*slots[k]));
  }
  return results;
}

}  // namespace

std::string_view to_string(Algorithm a) { return a == Algorithm::kAmp ? "amp" : "mifgd"; }

NoiseModel NoiseSpec::to_model(int num_qubits) const {
  NoiseModel m;
  m.depolarizing = depolarizing;
  m.coherent_theta = coherent;
  m.coherent_prep_theta = coherent_prep;
  m.readout_q = readout;
  if (bit_flip != 0.0 || phase_flip != 0.0 || loss != 0.0) {
    m.photonic = PhotonicNoise::uniform(num_qubits, FlipLossWeights{bit_flip, phase_flip, loss});
  }
  return m;
}

void NoiseSpec::set(std::string_view key, double value) {
  const std::string k = lowercase(key);
  if (k == "depolarizing") {
    depolarizing = value;
  } else if (k == "coherent") {
    coherent = value;
  } else if (k == "coherent_prep") {
    coherent_prep = value;
  } else if (k == "readout") {
    readout = value;
  } else if (k == "bitflip") {
    bit_flip = value;
  } else if (k == "phaseflip") {
    phase_flip = value;
  } else if (k == "loss") {
    loss = value;
  } else {
    throw std::invalid_argument("unknown noise channel '" + std::string(key) + "'");
  }
}

NoiseSpec parse_noise(std::string_view text) {
  NoiseSpec spec;
  if (trim(text).empty() || lowercase(trim(text)) == "none") return spec;
  for (const std::string& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("noise entry '" + item + "' is not key=value");
    spec.set(trim(item.substr(0, eq)), parse_double("noise", item.substr(eq + 1)));
  }
  return spec;
}

ShotCount parse_shot_count(std::string_view text) {
  const std::string s = lowercase(trim(text));
  if (s == "inf" || s == "infinite") return std::nullopt;
  const auto n = parse_int<std::int64_t>("shots", s);
  if (n < 1) bad_value("shots", text);
  return n;
}

std::string format_shot_count(ShotCount shots) { return shots ? std::to_string(*shots) : "inf"; }

void ExperimentConfig::validate() const {
  check_qubit_count(qubits);
  const std::size_t d = dimension_of(qubits);
  if (state != "random" && state != "ghz" && state != "hadamard" && state != "w") {
    throw std::invalid_argument("unknown state '" + state + "'");
  }
  if (rank) {
    if (state != "random") throw std::invalid_argument("rank applies to random states only");
    if (*rank < 1 || static_cast<std::size_t>(*rank) > d) throw std::invalid_argument("rank must be in [1, d]");
  }
  if (shots_in.empty() && plan_in.empty()) {
    const int given = observables.has_value() + settings_target.has_value() + fraction.has_value();
    if (given != 1) throw std::invalid_argument("give exactly one of observables, settings-target, fraction");
    if (observables && mode != PlanMode::kObservables) throw std::invalid_argument("observables needs mode=observables");
    if (settings_target && mode != PlanMode::kSettings) throw std::invalid_argument("settings-target needs mode=settings");
    if (fraction && !(*fraction > 0.0 && *fraction <= 1.0)) throw std::invalid_argument("fraction must be in (0, 1]");
    const std::size_t m = target_measurements();
    if (m < 1 || m > d * d) throw std::invalid_argument("measurement count must be in [1, 4^n]");
  }
  if (!shots_out.empty() && mode == PlanMode::kSettings && !shots && shots_in.empty()) {
    throw std::invalid_argument("shots-out needs a finite shot count in settings mode");
  }
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (threads < 0) throw std::invalid_argument("threads must be nonnegative");
  if (max_iter && *max_iter < 1) throw std::invalid_argument("max-iter must be at least 1");
  if (algorithm == Algorithm::kAmp) {
    amp.validate();
  } else {
    mifgd.validate(d);
  }
  noise.to_model(qubits).validate(qubits);
}

std::size_t ExperimentConfig::target_measurements() const {
  if (observables) return *observables;
  if (settings_target) return *settings_target;
  if (fraction) {
    const double d2 = static_cast<double>(dimension_of(qubits) * dimension_of(qubits));
    return static_cast<std::size_t>(std::max(1LL, std::llround(*fraction * d2)));
  }
  return 0;
}

const std::vector<std::string>& setting_keys() {
  static const std::vector<std::string> keys{
      "qubits",     "state",       "rank",      "truth-in",  "mode",       "observables", "settings-target",
      "fraction",   "shots",       "plan-in",   "plan-out",  "shots-in",   "shots-out",   "algorithm",
      "denoiser",   "alpha",       "damping",   "max-iter",  "normalize",  "mc-samples",  "mc-epsilon",
      "early-stop", "eta",         "mu",        "mifgd-rank", "rel-tol",   "noise",       "trials",
      "seed",       "threads",     "out",       "trace",     "gnuplot",    "timing",      "qubit-range",
      "fractions",  "sweep"};
  return keys;
}

void apply_setting(ExperimentConfig& c, std::string_view key_in, std::string_view value_in) {
  const std::string key = lowercase(trim(key_in));
  const std::string value = trim(value_in);
  if (key == "qubits") {
    c.qubits = parse_int<int>(key, value);
  } else if (key == "state") {
    c.state = lowercase(value);
  } else if (key == "rank") {
    c.rank = parse_int<int>(key, value);
  } else if (key == "truth-in") {
    c.truth_in = value;
  } else if (key == "mode") {
    const std::string m = lowercase(value);
    if (m == "observables") {
      c.mode = PlanMode::kObservables;
    } else if (m == "settings") {
      c.mode = PlanMode::kSettings;
    } else {
      bad_value(key, value);
    }
  } else if (key == "observables") {
    c.observables = parse_int<std::size_t>(key, value);
  } else if (key == "settings-target") {
    c.settings_target = parse_int<std::size_t>(key, value);
    c.mode = PlanMode::kSettings;
  } else if (key == "fraction") {
    c.fraction = parse_double(key, value);
  } else if (key == "shots") {
    c.shots = parse_shot_count(value);
  } else if (key == "plan-in") {
    c.plan_in = value;
  } else if (key == "plan-out") {
    c.plan_out = value;
  } else if (key == "shots-in") {
    c.shots_in = value;
  } else if (key == "shots-out") {
    c.shots_out = value;
  } else if (key == "algorithm") {
    const std::string a = lowercase(value);
    if (a == "amp") {
      c.algorithm = Algorithm::kAmp;
    } else if (a == "mifgd") {
      c.algorithm = Algorithm::kMifgd;
    } else {
      bad_value(key, value);
    }
  } else if (key == "denoiser") {
    c.amp.denoiser = parse_denoiser(value);
  } else if (key == "alpha") {
    c.amp.alpha = parse_double(key, value);
  } else if (key == "damping") {
    const std::string v = lowercase(value);
    if (v == "off" || v == "none") {
      c.amp.damping_enabled = false;
    } else {
      c.amp.damping = parse_double(key, value);
      c.amp.damping_enabled = true;
    }
  } else if (key == "max-iter") {
    c.max_iter = parse_int<int>(key, value);
  } else if (key == "normalize") {
    c.amp.normalize = parse_bool(key, value);
  } else if (key == "mc-samples") {
    c.amp.mc_samples = parse_int<int>(key, value);
  } else if (key == "mc-epsilon") {
    c.amp.mc_epsilon = parse_double(key, value);
  } else if (key == "early-stop") {
    c.amp.early_stop = parse_bool(key, value);
  } else if (key == "eta") {
    c.mifgd.eta = parse_double(key, value);
  } else if (key == "mu") {
    c.mifgd.mu = parse_double(key, value);
  } else if (key == "mifgd-rank") {
    c.mifgd.rank = parse_int<int>(key, value);
  } else if (key == "rel-tol") {
    c.mifgd.rel_tol = parse_double(key, value);
  } else if (key == "noise") {
    c.noise = parse_noise(value);
  } else if (key == "trials") {
    c.trials = parse_int<int>(key, value);
  } else if (key == "seed") {
    c.seed = parse_int<std::uint64_t>(key, value);
  } else if (key == "threads") {
    c.threads = parse_int<int>(key, value);
  } else if (key == "out") {
    c.out = value;
  } else if (key == "trace") {
    c.trace = value;
  } else if (key == "gnuplot") {
    c.gnuplot = value;
  } else if (key == "timing") {
    c.timing = parse_bool(key, value);
  } else if (key == "qubit-range") {
    c.qubit_list = parse_int_list(key, value);
  } else if (key == "fractions") {
    c.fraction_list = parse_double_list(key, value);
  } else if (key == "sweep") {
    const auto eq = value.find('=');
    if (eq == std::string::npos) bad_value(key, value);
    c.sweep_key = lowercase(trim(value.substr(0, eq)));
    NoiseSpec probe;
    probe.set(c.sweep_key, 0.0);
    c.sweep_levels = parse_double_list(key, value.substr(eq + 1));
  } else {
    throw std::invalid_argument("unknown option '" + key + "'");
  }
}

void load_config(ExperimentConfig& config, std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config line " + std::to_string(line_no) + ": expected key = value");
    }
    try {
      apply_setting(config, body.substr(0, eq), body.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

Range summarize(const std::vector<double>& values) {
  if (values.empty()) return {};
  Range r{values.front(), 0.0, values.front()};
  for (double v : values) {
    r.min = std::min(r.min, v);
    r.max = std::max(r.max, v);
    r.mean += v;
  }
  r.mean /= static_cast<double>(values.size());
  return r;
}

ReconstructReport cmd_reconstruct(const ExperimentConfig& config) {
  ReconstructReport report;
  report.trials = run_pool(config);
  std::vector<double> nm, ft, fg;
  for (const TrialResult& r : report.trials) {
    nm.push_back(r.nmse);
    ft.push_back(r.fidelity_truth);
    fg.push_back(r.fidelity_target);
  }
  report.nmse = summarize(nm);
  report.fidelity_truth = summarize(ft);
  report.fidelity_target = summarize(fg);
  if (!config.gnuplot.empty() && !config.trace.empty()) {
    write_file(config.gnuplot, [&](std::ostream& o) {
      write_trace_gnuplot(o, trial_path(config.trace, 0, config.trials), true);
    });
  }
  return report;
}

void write_results_csv(std::ostream& out, const std::vector<TrialResult>& results, bool timing) {
  out << "trial,state,n,M,T,N,algorithm,nmse,fidelity_truth,fidelity_target,iters,seconds\n";
  for (const TrialResult& r : results) {
    out << r.trial << ',' << r.state << ',' << r.qubits << ',' << r.measurements << ',' << r.circuits << ','
        << format_shot_count(r.shots) << ',' << to_string(r.algorithm) << ',' << format_number(r.nmse) << ','
        << format_number(r.fidelity_truth) << ',' << format_number(r.fidelity_target) << ',' << r.iterations << ',';
    if (timing) out << format_number(r.seconds);
    out << '\n';
  }
}

void write_summary(std::ostream& out, const ReconstructReport& report) {
  auto line = [&](const char* name, const Range& r) {
    out << name << " min=" << format_number(r.min) << " mean=" << format_number(r.mean)
        << " max=" << format_number(r.max) << '\n';
  };
  out << "trials " << report.trials.size() << '\n';
  line("nmse", report.nmse);
  line("fidelity_truth", report.fidelity_truth);
  line("fidelity_target", report.fidelity_target);
}

std::vector<SettingsTableRow> cmd_settings_table(const std::vector<int>& qubits, const std::vector<double>& fractions,
                                                 int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  std::vector<SettingsTableRow> rows;
  for (int n : qubits) {
    check_qubit_count(n);
    const double d2 = static_cast<double>(dimension_of(n) * dimension_of(n));
    for (double f : fractions) {
      if (!(f > 0.0 && f <= 1.0)) throw std::invalid_argument("fraction must be in (0, 1]");
      SettingsTableRow row;
      row.qubits = n;
      row.fraction = f;
      row.measurements = static_cast<std::size_t>(std::max(1LL, std::llround(f * d2)));
      double sum = 0.0, sum_sq = 0.0;
      row.min_settings = SIZE_MAX;
      for (int t = 0; t < trials; ++t) {
        Rng rng = make_rng(seed, static_cast<std::uint64_t>(t));
        const std::size_t count = sample_settings_until(n, row.measurements, rng).num_settings();
        sum += static_cast<double>(count);
        sum_sq += static_cast<double>(count) * static_cast<double>(count);
        row.min_settings = std::min(row.min_settings, count);
        row.max_settings = std::max(row.max_settings, count);
      }
      row.mean_settings = sum / trials;
      row.stddev_settings = std::sqrt(std::max(0.0, sum_sq / trials - row.mean_settings * row.mean_settings));
      rows.push_back(row);
    }
  }
  return rows;
}

void write_settings_table_csv(std::ostream& out, const std::vector<SettingsTableRow>& rows) {
  out << "n,fraction,M,mean_T,min_T,max_T,std_T,T_over_M_percent\n";
  for (const SettingsTableRow& r : rows) {
    out << r.qubits << ',' << format_number(r.fraction) << ',' << r.measurements << ','
        << format_number(r.mean_settings) << ',' << r.min_settings << ',' << r.max_settings << ','
        << format_number(r.stddev_settings) << ','
        << format_number(100.0 * r.mean_settings / static_cast<double>(r.measurements)) << '\n';
  }
}

std::vector<NoiseStudyRow> cmd_noise_study(const ExperimentConfig& config) {
  if (config.sweep_key.empty() || config.sweep_levels.empty()) {
    throw std::invalid_argument("noise study needs sweep=<channel>=<level>,...");
  }
  std::vector<NoiseStudyRow> rows;
  for (double level : config.sweep_levels) {
    ExperimentConfig c = config;
    c.noise.set(c.sweep_key, level);
    c.trace.clear();
    c.plan_out.clear();
    c.shots_out.clear();
    c.gnuplot.clear();
    const ReconstructReport report = cmd_reconstruct(c);
    std::vector<double> prepared;
    for (const TrialResult& r : report.trials) prepared.push_back(r.preparation_fidelity);
    rows.push_back(NoiseStudyRow{config.sweep_key, level, report.fidelity_target, summarize(prepared)});
  }
  return rows;
}

void write_noise_study_csv(std::ostream& out, const std::vector<NoiseStudyRow>& rows) {
  out << "channel,level,estimate_min,estimate_mean,estimate_max,true_min,true_mean,true_max\n";
  for (const NoiseStudyRow& r : rows) {
    out << r.key << ',' << format_number(r.level) << ',' << format_number(r.fidelity_estimate.min) << ','
        << format_number(r.fidelity_estimate.mean) << ',' << format_number(r.fidelity_estimate.max) << ','
        << format_number(r.fidelity_true.min) << ',' << format_number(r.fidelity_true.mean) << ','
        << format_number(r.fidelity_true.max) << '\n';
  }
}

DensityMatrix cmd_dump_state(const ExperimentConfig& config, bool prepared) {
  check_qubit_count(config.qubits);
  const SharedInputs inputs = load_inputs(config);
  const DensityMatrix target = make_target(config, inputs, trial_seeds(config.seed, 0).state);
  if (!prepared) return target;
  return prepare_noisy_state(target, config.noise.to_model(config.qubits));
}

std::string trial_path(const std::string& base, int trial, int trials) {
  if (trials <= 1) return base;
  const auto slash = base.find_last_of('/');
  const auto dot = base.find_last_of('.');
  const std::string suffix = "_trial" + std::to_string(trial);
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash) || dot == 0) return base + suffix;
  return base.substr(0, dot) + suffix + base.substr(dot);
}

void write_trace_gnuplot(std::ostream& out, const std::string& trace_csv, bool with_metrics) {
  out << "set datafile separator ','\n"
      << "set key top right\n"
      << "set xlabel 'iteration'\n"
      << "set logscale y\n";
  if (with_metrics) {
    out << "set multiplot layout 1,2\n"
        << "set ylabel 'NMSE'\n"
        << "plot '" << trace_csv << "' using 1:6 skip 1 with lines title 'NMSE'\n"
        << "unset logscale y\n"
        << "set ylabel 'fidelity'\n"
        << "plot '" << trace_csv << "' using 1:7 skip 1 with lines title 'fidelity'\n"
        << "unset multiplot\n";
  } else {
    out << "set ylabel 'sigma'\n"
        << "plot '" << trace_csv << "' using 1:2 skip 1 with lines title 'sigma'\n";
  }
}

void write_noise_study_gnuplot(std::ostream& out, const std::string& study_csv) {
  out << "set datafile separator ','\n"
      << "set xlabel 'true fidelity F(target, prepared)'\n"
      << "set ylabel 'estimated fidelity F(target, reconstruction)'\n"
      << "set key top left\n"
      << "plot '" << study_csv << "' using 7:4:3:5 skip 1 with yerrorbars title 'estimate', x with lines title 'y = x'\n";
}

}  // namespace ampqst
