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

// ampqst: simulate Pauli measurements of a quantum state and reconstruct it.
//
//   ampqst reconstruct --state random --rank 3 --qubits 5 --observables 384 --shots 1024
//   ampqst settings-table --qubit-range 3-5 --trials 100
//   ampqst noise-study --state ghz --qubits 3 --fraction 0.75 --mode settings \
//       --sweep depolarizing=0.001,0.005,0.01 --trials 10
//   ampqst dump-state --state w --qubits 3 --out w3.dmat

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "ampqst/experiment.hpp"

namespace {

using ampqst::ExperimentConfig;

const std::map<std::string, std::string>& help_texts() {
  static const std::map<std::string, std::string> texts{
      {"qubits", "number of qubits n"},
      {"state", "target state: ghz, hadamard, w or random"},
      {"rank", "rank of a random target state"},
      {"truth-in", "read the target state from a DMAT file"},
      {"mode", "plan mode: observables or settings"},
      {"observables", "number of Pauli observables M"},
      {"settings-target", "draw settings until this many observables are covered"},
      {"fraction", "measurement budget as a fraction of 4^n"},
      {"shots", "shots per circuit, or inf"},
      {"plan-in", "read the measurement plan from a PLAN file"},
      {"plan-out", "write the sampled plan"},
      {"shots-in", "read recorded data from a SHOTS file"},
      {"shots-out", "write the simulated data"},
      {"algorithm", "amp or mifgd"},
      {"denoiser", "svt or psvt"},
      {"alpha", "threshold multiplier"},
      {"damping", "damping weight in (0, 1], or off"},
      {"max-iter", "iteration budget"},
      {"normalize", "rescale the sensing map by sqrt(d/M)"},
      {"mc-samples", "probes per divergence estimate"},
      {"mc-epsilon", "probe step relative to ||v||_F / d"},
      {"early-stop", "stop once the iterate stalls"},
      {"eta", "gradient step size"},
      {"mu", "momentum"},
      {"mifgd-rank", "factor width"},
      {"rel-tol", "relative change stopping tolerance"},
      {"noise", "channels as key=val,... (depolarizing, coherent, coherent_prep, readout, bitflip, phaseflip, loss)"},
      {"trials", "number of independent trials"},
      {"seed", "master seed"},
      {"threads", "worker threads (0: all cores)"},
      {"out", "output file (default: stdout)"},
      {"trace", "per-iteration trace CSV"},
      {"gnuplot", "write a gnuplot script for the output"},
      {"timing", "fill the seconds column"},
      {"qubit-range", "qubit counts, e.g. 3-5 or 3,5"},
      {"fractions", "comma-separated fractions of 4^n"},
      {"sweep", "noise sweep as channel=level,level,..."},
  };
  return texts;
}

struct Bound {
  std::string key;
  CLI::Option* option;
  bool flag;
};

std::vector<Bound> bind_settings(CLI::App& app) {
  std::vector<Bound> bound;
  for (const std::string& key : ampqst::setting_keys()) {
    const auto it = help_texts().find(key);
    const std::string help = it == help_texts().end() ? std::string() : it->second;
    if (key == "timing") {
      bound.push_back({key, app.add_flag("--" + key, help), true});
    } else {
      bound.push_back({key, app.add_option("--" + key, help)->type_name("VALUE"), false});
    }
  }
  return bound;
}

ExperimentConfig build_config(const std::string& config_file, const std::vector<Bound>& bound) {
  ExperimentConfig config;
  if (!config_file.empty()) {
    std::ifstream f(config_file);
    if (!f) throw std::runtime_error("cannot open " + config_file);
    ampqst::load_config(config, f);
  }
  for (const Bound& b : bound) {
    if (b.option->count() == 0) continue;
    ampqst::apply_setting(config, b.key, b.flag ? "true" : b.option->results().back());
  }
  return config;
}

template <typename Writer>
void emit(const std::string& path, Writer&& writer) {
  if (path.empty() || path == "-") {
    writer(std::cout);
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  writer(f);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-rank quantum state tomography by approximate message passing"};
  app.require_subcommand(1);

  struct Command {
    CLI::App* app;
    std::vector<Bound> bound;
    std::string config_file;
  };
  std::vector<std::pair<std::string, std::string>> names{
      {"reconstruct", "simulate measurements and reconstruct the state"},
      {"settings-table", "count measurement settings needed to cover a fraction of the Paulis"},
      {"noise-study", "estimated versus true preparation fidelity under a noise sweep"},
      {"dump-state", "write the target state as a DMAT file"},
  };
  std::vector<Command> commands;
  commands.reserve(names.size());
  bool prepared = false;
  for (const auto& [name, description] : names) {
    CLI::App* sub = app.add_subcommand(name, description);
    commands.push_back({sub, bind_settings(*sub), {}});
    sub->add_option("--config", commands.back().config_file, "key = value configuration file");
    if (name == "dump-state") sub->add_flag("--prepared", prepared, "apply the state-level noise first");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (const Command& cmd : commands) {
      if (!cmd.app->parsed()) continue;
      const std::string name = cmd.app->get_name();
      const ExperimentConfig config = build_config(cmd.config_file, cmd.bound);

      if (name == "reconstruct") {
        const ampqst::ReconstructReport report = ampqst::cmd_reconstruct(config);
        emit(config.out, [&](std::ostream& o) { ampqst::write_results_csv(o, report.trials, config.timing); });
        ampqst::write_summary(std::cerr, report);
      } else if (name == "settings-table") {
        const auto rows = ampqst::cmd_settings_table(config.qubit_list, config.fraction_list, config.trials, config.seed);
        emit(config.out, [&](std::ostream& o) { ampqst::write_settings_table_csv(o, rows); });
      } else if (name == "noise-study") {
        const auto rows = ampqst::cmd_noise_study(config);
        emit(config.out, [&](std::ostream& o) { ampqst::write_noise_study_csv(o, rows); });
        if (!config.gnuplot.empty()) {
          emit(config.gnuplot, [&](std::ostream& o) {
            ampqst::write_noise_study_gnuplot(o, config.out.empty() ? "noise_study.csv" : config.out);
          });
        }
      } else {
        const ampqst::DensityMatrix rho = ampqst::cmd_dump_state(config, prepared);
        emit(config.out, [&](std::ostream& o) { ampqst::write_dmat(o, rho.hermitian()); });
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
