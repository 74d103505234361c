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

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ampqst/pauli.hpp"

namespace ampqst {

namespace {

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw std::runtime_error("PLAN line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::string_view to_string(PlanMode mode) {
  return mode == PlanMode::kObservables ? "observables" : "settings";
}

void write_plan(std::ostream& out, const MeasurementPlan& plan) {
  out << "PLAN v1 n=" << plan.num_qubits << " mode=" << to_string(plan.mode) << '\n';
  if (plan.mode == PlanMode::kObservables) {
    for (const PauliString& p : plan.observables) out << p.word() << '\n';
  } else {
    for (const MeasurementSetting& s : plan.settings) out << s.word() << '\n';
  }
}

MeasurementPlan read_plan(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) parse_error(1, "missing header");
  MeasurementPlan plan;
  {
    std::istringstream header(line);
    std::string magic, version, nfield, modefield;
    header >> magic >> version >> nfield >> modefield;
    if (magic != "PLAN" || version != "v1" || nfield.rfind("n=", 0) != 0 || modefield.rfind("mode=", 0) != 0) {
      parse_error(1, "expected 'PLAN v1 n=<n> mode=<observables|settings>'");
    }
    try {
      plan.num_qubits = std::stoi(nfield.substr(2));
    } catch (const std::exception&) {
      parse_error(1, "bad qubit count '" + nfield + "'");
    }
    if (plan.num_qubits < 1 || plan.num_qubits > kMaxQubits) parse_error(1, "qubit count out of range");
    const std::string mode = modefield.substr(5);
    if (mode == "observables") {
      plan.mode = PlanMode::kObservables;
    } else if (mode == "settings") {
      plan.mode = PlanMode::kSettings;
    } else {
      parse_error(1, "unknown mode '" + mode + "'");
    }
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string word, extra;
    if (!(fields >> word)) continue;
    if (fields >> extra) parse_error(line_no, "expected a single word");
    if (static_cast<int>(word.size()) != plan.num_qubits) parse_error(line_no, "word length differs from n");
    try {
      if (plan.mode == PlanMode::kObservables) {
        plan.observables.push_back(PauliString::parse(word));
      } else {
        plan.settings.push_back(MeasurementSetting::parse(word));
      }
    } catch (const std::invalid_argument& e) {
      parse_error(line_no, e.what());
    }
  }
  return plan;
}

}  // namespace ampqst
