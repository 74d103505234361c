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

// Acceptance suite: one PASS/FAIL line per criterion.  Exits nonzero when any
// criterion fails.
//
//   acceptance [path/to/ampqst]   # the CLI path enables the CLI replay check

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ampqst/amp.hpp"
#include "ampqst/experiment.hpp"
#include "ampqst/measurement.hpp"
#include "ampqst/mifgd.hpp"

namespace {

using namespace ampqst;

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

HermitianMatrix random_hermitian(int n, Rng& rng) {
  const auto d = static_cast<Eigen::Index>(dimension_of(n));
  ComplexMatrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = sample_complex_normal(rng);
  }
  return HermitianMatrix::symmetrized(n, m);
}

std::vector<PauliString> all_paulis(int n) {
  std::vector<PauliString> out;
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << (2 * n)); ++k) out.push_back(PauliString::from_index(n, k));
  return out;
}

// ---------------------------------------------------------------------------

ExperimentConfig fig1_config() {
  ExperimentConfig c;
  apply_setting(c, "qubits", "5");
  apply_setting(c, "rank", "3");
  apply_setting(c, "observables", "384");
  apply_setting(c, "shots", "1024");
  apply_setting(c, "max-iter", "2000");
  apply_setting(c, "trials", "5");
  apply_setting(c, "seed", "1");
  return c;
}

Verdict fig1_ordering() {
  struct Variant {
    const char* name;
    const char* denoiser;
    bool normalize;
    bool damped;
    ReconstructReport report;
    int diverged = 0;
  };
  std::vector<Variant> variants{{"svt", "svt", false, false, {}},
                                {"normalized svt", "svt", true, false, {}},
                                {"psvt", "psvt", true, false, {}},
                                {"psvt+damping", "psvt", true, true, {}}};
  std::ostringstream detail;
  for (Variant& v : variants) {
    ExperimentConfig c = fig1_config();
    apply_setting(c, "denoiser", v.denoiser);
    apply_setting(c, "normalize", v.normalize ? "true" : "false");
    apply_setting(c, "damping", v.damped ? "0.01" : "off");
    const auto start = std::chrono::steady_clock::now();
    v.report = cmd_reconstruct(c);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const TrialResult& r : v.report.trials) v.diverged += r.status == SolverStatus::kDiverged;
    detail << "\n      " << v.name << ": diverged " << v.diverged << "/" << v.report.trials.size()
           << fmt(", mean F=%.4f", v.report.fidelity_truth.mean) << fmt(" (min %.4f)", v.report.fidelity_truth.min)
           << fmt(", mean NMSE=%.4g", v.report.nmse.mean) << fmt(" [%.0f s]", secs);
  }
  const int trials = static_cast<int>(variants[0].report.trials.size());
  const bool a = variants[0].diverged == trials;
  const bool b = variants[1].diverged == 0 && variants[1].report.fidelity_truth.mean > 0.9;
  const bool c = variants[2].report.nmse.mean >= 2.0 * variants[3].report.nmse.mean;
  const bool d = variants[3].report.fidelity_truth.mean > 0.95 && variants[3].report.nmse.mean < 0.05;
  detail << "\n      (a) " << (a ? "ok" : "no") << "  (b) " << (b ? "ok" : "no") << "  (c) " << (c ? "ok" : "no")
         << fmt(" [ratio %.2f]", variants[2].report.nmse.mean / variants[3].report.nmse.mean) << "  (d) "
         << (d ? "ok" : "no");
  return {a && b && c && d, "5 trials per variant, means over trials" + detail.str()};
}

Verdict settings_table_rows() {
  bool exact = true;
  double mean16 = 0.0, mean256 = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng r1 = make_rng(seed, 1), r2 = make_rng(seed, 2), r3 = make_rng(seed, 3), r4 = make_rng(seed, 4);
    exact = exact && sample_settings_until(3, 64, r1).num_settings() == 27;
    exact = exact && sample_settings_until(4, 256, r2).num_settings() == 81;
    mean16 += static_cast<double>(sample_settings_until(3, 16, r3).num_settings()) / 100.0;
    mean256 += static_cast<double>(sample_settings_until(5, 256, r4).num_settings()) / 100.0;
  }
  const bool pass = exact && mean16 >= 2.0 && mean16 <= 4.0 && mean256 >= 10.0 && mean256 <= 16.0;
  return {pass, std::string(exact ? "T=27 (n=3) and T=81 (n=4) on all 100 seeds" : "full coverage count wrong") +
                    fmt("; mean T(3,16)=%.2f", mean16) + fmt(", mean T(5,256)=%.2f", mean256)};
}

Verdict parity_marginalization() {
  Rng rng = make_rng(3);
  const std::vector<DensityMatrix> states{pure_density(make_named_state(NamedState::kGhz, 3)),
                                          pure_density(make_named_state(NamedState::kW, 3)),
                                          make_random_state(3, 2, rng)};
  double worst = 0.0;
  for (const DensityMatrix& rho : states) {
    for (std::uint64_t s = 0; s < 27; ++s) {
      const MeasurementSetting setting = MeasurementSetting::from_index(3, s);
      const OutcomeDistribution dist = outcome_distribution(rho, setting);
      for (std::uint64_t a = 0; a < 8; ++a) {
        const double dense = (setting.observable(a).dense() * rho.matrix()).trace().real();
        worst = std::max(worst, std::abs(estimate_from_setting(as_span(dist.probs), a) - dense));
      }
    }
  }
  return {worst <= 1e-12, fmt("max deviation %.3g over 3 states x 27 settings x 8 masks", worst)};
}

Verdict rank_bounds() {
  Rng rng = make_rng(4);
  int worst_loss = 0;
  for (int k = 0; k < 50; ++k) {
    const DensityMatrix rho = make_random_state(2, 1, rng);
    for (int q = 1; q <= 2; ++q) worst_loss = std::max(worst_loss, numerical_rank(apply_loss(rho, q), 1e-9));
  }
  bool composite_ok = true;
  std::string composite_detail;
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  for (int n : {2, 3}) {
    int worst = 0;
    for (int k = 0; k < 50; ++k) {
      const DensityMatrix rho = make_random_state(n, 1, rng);
      PhotonicNoise noise;
      std::vector<double> raw(static_cast<std::size_t>(3 * n + 1));
      double total = 0.0;
      for (double& w : raw) total += (w = weight(rng));
      noise.identity_weight = raw[0] / total;
      for (int q = 0; q < n; ++q) {
        const std::size_t i = static_cast<std::size_t>(1 + 3 * q);
        noise.per_qubit.push_back({raw[i] / total, raw[i + 1] / total, raw[i + 2] / total});
      }
      worst = std::max(worst, numerical_rank(apply_composite(rho, noise), 1e-9));
    }
    composite_ok = composite_ok && worst <= 6 * n + 1;
    composite_detail += "; composite n=" + std::to_string(n) + " max rank " + std::to_string(worst) + " (bound " +
                        std::to_string(6 * n + 1) + ")";
  }
  return {worst_loss <= 4 && composite_ok, "loss max rank " + std::to_string(worst_loss) + composite_detail};
}

Verdict adjoint_and_gram() {
  Rng rng = make_rng(5);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst_adjoint = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int n = 1 + k % 3;
    const std::size_t m = 1 + static_cast<std::size_t>(rng() % (std::uint64_t{1} << (2 * n)));
    const SensingMap map(sample_observables(n, m, rng), k % 2 == 0);
    const HermitianMatrix x = random_hermitian(n, rng);
    RealVector y(static_cast<Eigen::Index>(m));
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = normal(rng);
    const double lhs = apply_sensing(map, x).dot(y);
    const double rhs = (x.matrix().adjoint() * apply_adjoint(map, y).matrix()).trace().real();
    worst_adjoint = std::max(worst_adjoint, std::abs(lhs - rhs));
  }
  double worst_gram = 0.0;
  for (int n : {1, 2}) {
    const SensingMap map(all_paulis(n), false);
    for (int k = 0; k < 10; ++k) {
      const HermitianMatrix x = random_hermitian(n, rng);
      const ComplexMatrix back = apply_adjoint(map, apply_sensing(map, x)).matrix();
      const double d = static_cast<double>(dimension_of(n));
      worst_gram = std::max(worst_gram, (back - d * x.matrix()).cwiseAbs().maxCoeff());
    }
  }
  return {worst_adjoint <= 1e-10 && worst_gram <= 1e-10,
          fmt("adjoint gap %.3g", worst_adjoint) + fmt(", Gram gap %.3g", worst_gram)};
}

Verdict denoisers() {
  Rng rng = make_rng(6);
  std::uniform_real_distribution<double> tau_dist(0.0, 3.0);
  int invalid = 0;
  for (int k = 0; k < 1000; ++k) {
    const int n = 1 + k % 3;
    const HermitianMatrix h = random_hermitian(n, rng);
    try {
      DensityMatrix checked(psvt(h, tau_dist(rng)).hermitian());
    } catch (const std::invalid_argument&) {
      ++invalid;
    }
  }
  double worst_svt = 0.0;
  for (int k = 0; k < 50; ++k) {
    const HermitianMatrix h = random_hermitian(3, rng);
    const double tau = tau_dist(rng);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Eigen::MatrixXcd(h.matrix()), Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::VectorXd s = svd.singularValues();
    for (Eigen::Index i = 0; i < s.size(); ++i) s[i] = std::max(s[i] - tau, 0.0);
    const Eigen::MatrixXcd ref = svd.matrixU() * s.asDiagonal() * svd.matrixV().adjoint();
    worst_svt = std::max(worst_svt, (Eigen::MatrixXcd(svt(h, tau).matrix()) - ref).cwiseAbs().maxCoeff());
  }
  double worst_pure = 0.0;
  for (int k = 0; k < 20; ++k) {
    const DensityMatrix rho = make_random_state(3, 1, rng);
    worst_pure = std::max(worst_pure, (psvt(rho, 0.5).matrix() - rho.matrix()).cwiseAbs().maxCoeff());
  }
  return {invalid == 0 && worst_svt <= 1e-9 && worst_pure <= 1e-12,
          std::to_string(invalid) + "/1000 invalid psvt outputs" + fmt(", svt vs SVD %.3g", worst_svt) +
              fmt(", psvt(pure) gap %.3g", worst_pure)};
}

Verdict onsager_calibration() {
  Rng rng = make_rng(7);
  const int n = 6;
  const std::size_t m = dimension_of(n) * dimension_of(n);
  const HermitianMatrix v = random_hermitian(n, rng);
  const Denoiser identity = [](const HermitianMatrix& x, double) { return x; };
  const Denoiser zero = [](const HermitianMatrix& x, double) { return x * 0.0; };
  const double c = estimate_onsager(identity, v, 0.1, m, 1e-4, 8, 11);
  const double z = estimate_onsager(zero, v, 0.1, m, 1e-4, 8, 11);
  return {c >= 0.9 && c <= 1.1 && z == 0.0, fmt("identity c=%.4f", c) + fmt(", zero c=%g", z)};
}

Verdict exact_recovery() {
  Rng rng = make_rng(8);
  const int n = 3;
  const DensityMatrix truth = make_random_state(n, 1, rng);
  const SensingMap map(all_paulis(n), false);
  const MeasurementPlan plan{n, PlanMode::kObservables, map.paulis(), {}};
  const MeasurementData data = build_measurements(truth, plan, std::nullopt, {}, 1);

  ComplexMatrix inversion = ComplexMatrix::Zero(8, 8);
  for (std::size_t k = 0; k < data.map.size(); ++k) {
    inversion += data.y[static_cast<Eigen::Index>(k)] * data.map.paulis()[k].dense() / 8.0;
  }
  const DensityMatrix oracle(HermitianMatrix::symmetrized(n, inversion));

  AmpConfig amp;
  amp.seed = 1;
  const double amp_nmse = nmse(oracle, run_amp(data.map, data.y, amp).estimate);
  MifgdConfig gd;
  gd.rank = 1;
  gd.mu = 0.0;
  gd.seed = 1;
  const double gd_fidelity = state_fidelity(oracle, run_mifgd(data.map, data.y, gd).estimate);
  return {amp_nmse < 1e-6 && gd_fidelity > 0.99,
          fmt("AMP NMSE %.3g", amp_nmse) + fmt(", MiFGD fidelity %.6f", gd_fidelity)};
}

Verdict noise_direction() {
  ExperimentConfig base;
  apply_setting(base, "qubits", "3");
  apply_setting(base, "state", "ghz");
  apply_setting(base, "mode", "settings");
  apply_setting(base, "fraction", "1.0");
  apply_setting(base, "shots", "1024");
  apply_setting(base, "trials", "10");
  apply_setting(base, "seed", "1");
  std::ostringstream detail;
  bool pass = true;

  ExperimentConfig dep = base;
  apply_setting(dep, "sweep", "depolarizing=0.001,0.005,0.01");
  detail << "\n      depolarizing:";
  for (const NoiseStudyRow& row : cmd_noise_study(dep)) {
    const bool ok = row.fidelity_estimate.mean >= row.fidelity_true.mean;
    pass = pass && ok;
    detail << fmt(" eps=%g", row.level) << fmt(" est %.5f", row.fidelity_estimate.mean)
           << fmt(" vs true %.5f", row.fidelity_true.mean) << (ok ? " ok;" : " no;");
  }

  ExperimentConfig ro = base;
  apply_setting(ro, "sweep", "readout=0.01,0.03,0.05");
  detail << "\n      readout:";
  for (const NoiseStudyRow& row : cmd_noise_study(ro)) {
    const bool ok = std::abs(row.fidelity_true.mean - 1.0) < 1e-12 && row.fidelity_estimate.mean < 1.0 - row.level / 2.0;
    pass = pass && ok;
    detail << fmt(" q=%g", row.level) << fmt(" est %.5f", row.fidelity_estimate.mean)
           << fmt(" (bound %.3f)", 1.0 - row.level / 2.0) << (ok ? " ok;" : " no;");
  }
  return {pass, "GHZ(3), all 27 settings, N=1024, 10 trials" + detail.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

Verdict reproducibility(const std::string& cli) {
  ExperimentConfig c;
  apply_setting(c, "qubits", "3");
  apply_setting(c, "rank", "2");
  apply_setting(c, "mode", "settings");
  apply_setting(c, "fraction", "0.5");
  apply_setting(c, "shots", "512");
  apply_setting(c, "trials", "4");
  apply_setting(c, "max-iter", "300");
  apply_setting(c, "seed", "42");
  const auto run = [&](int threads) {
    ExperimentConfig k = c;
    k.threads = threads;
    std::ostringstream out;
    write_results_csv(out, cmd_reconstruct(k).trials, false);
    return out.str();
  };
  bool pass = run(1) == run(1) && run(1) == run(3);
  std::string detail = pass ? "library CSV identical across repeats and thread counts" : "library CSV differs";

  if (!cli.empty()) {
    const auto dir = std::filesystem::temp_directory_path() / "ampqst_acceptance_repro";
    std::filesystem::create_directories(dir);
    const std::string args = " reconstruct --qubits 3 --rank 2 --fraction 0.5 --mode settings --shots 512 "
                             "--trials 4 --max-iter 300 --seed 42 --algorithm amp";
    bool cli_ok = true;
    for (int k = 0; k < 2; ++k) {
      const std::string cmd = "\"" + cli + "\"" + args + " --out \"" + (dir / ("run" + std::to_string(k) + ".csv")).string() +
                              "\" 2> /dev/null";
      cli_ok = cli_ok && std::system(cmd.c_str()) == 0;
    }
    cli_ok = cli_ok && slurp(dir / "run0.csv") == slurp(dir / "run1.csv") && !slurp(dir / "run0.csv").empty();
    std::filesystem::remove_all(dir);
    pass = pass && cli_ok;
    detail += cli_ok ? "; CLI output byte-identical" : "; CLI output differs or the run failed";
  }
  return {pass, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"AMP variant ordering (n=5, rank 3, M=384, N=1024)", fig1_ordering},
      {"measurement settings counts", settings_table_rows},
      {"parity marginalization", parity_marginalization},
      {"channel rank bounds", rank_bounds},
      {"adjoint and Gram identities", adjoint_and_gram},
      {"denoisers", denoisers},
      {"divergence estimator calibration", onsager_calibration},
      {"noiseless exact recovery", exact_recovery},
      {"noise direction (n=3)", noise_direction},
      {"reproducibility", [&] { return reproducibility(cli); }},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << k + 1 << ". " << criteria[k].first << ": " << v.detail
              << std::endl;
  }
  std::cout << criteria.size() - static_cast<std::size_t>(failed) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
