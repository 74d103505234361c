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

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ampqst/measurement.hpp"

namespace ampqst {

namespace {

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw std::runtime_error("SHOTS line " + std::to_string(line) + ": " + what);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Qubit 1 first, which is also the most significant bit of the index.
std::string bitstring(std::uint64_t b, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int q = 0; q < n; ++q) {
    if (b & (std::uint64_t{1} << (n - 1 - q))) s[static_cast<std::size_t>(q)] = '1';
  }
  return s;
}

std::uint64_t parse_bitstring(const std::string& s, int n, std::size_t line) {
  if (static_cast<int>(s.size()) != n) parse_error(line, "bitstring '" + s + "' has the wrong length");
  std::uint64_t b = 0;
  for (char c : s) {
    if (c != '0' && c != '1') parse_error(line, "bad bitstring '" + s + "'");
    b = (b << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return b;
}

}  // namespace

void write_shots(std::ostream& out, const ShotRecord& record) {
  out << "SHOTS v1 n=" << record.num_qubits << " N=" << (record.shots ? std::to_string(*record.shots) : "inf")
      << " mode=" << to_string(record.mode) << '\n';
  if (record.mode == PlanMode::kObservables) {
    for (const auto& [p, y] : record.observable_values) out << p.word() << ' ' << format_double(y) << '\n';
    return;
  }
  for (const SettingCounts& sc : record.setting_counts) {
    out << sc.setting.word();
    for (const auto& [b, c] : sc.counts) out << ' ' << bitstring(b, record.num_qubits) << ':' << c;
    out << '\n';
  }
}

ShotRecord read_shots(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) parse_error(1, "missing header");
  ShotRecord record;
  {
    std::istringstream header(line);
    std::string magic, version, nfield, shotfield, modefield;
    header >> magic >> version >> nfield >> shotfield >> modefield;
    if (magic != "SHOTS" || version != "v1" || nfield.rfind("n=", 0) != 0 || shotfield.rfind("N=", 0) != 0 ||
        modefield.rfind("mode=", 0) != 0) {
      parse_error(1, "expected 'SHOTS v1 n=<n> N=<N|inf> mode=<observables|settings>'");
    }
    try {
      record.num_qubits = std::stoi(nfield.substr(2));
    } catch (const std::exception&) {
      parse_error(1, "bad qubit count '" + nfield + "'");
    }
    if (record.num_qubits < 1 || record.num_qubits > kMaxQubits) parse_error(1, "qubit count out of range");
    const std::string n_shots = shotfield.substr(2);
    if (n_shots != "inf") {
      try {
        std::size_t used = 0;
        record.shots = std::stoll(n_shots, &used);
        if (used != n_shots.size() || *record.shots < 1) throw std::invalid_argument("shots");
      } catch (const std::exception&) {
        parse_error(1, "bad shot count '" + n_shots + "'");
      }
    }
    const std::string mode = modefield.substr(5);
    if (mode == "observables") {
      record.mode = PlanMode::kObservables;
    } else if (mode == "settings") {
      record.mode = PlanMode::kSettings;
    } else {
      parse_error(1, "unknown mode '" + mode + "'");
    }
  }
  const int n = record.num_qubits;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word)) continue;
    if (static_cast<int>(word.size()) != n) parse_error(line_no, "word length differs from n");
    if (record.mode == PlanMode::kObservables) {
      std::string value, extra;
      if (!(fields >> value)) parse_error(line_no, "missing value");
      if (fields >> extra) parse_error(line_no, "trailing fields");
      double y = 0.0;
      try {
        std::size_t used = 0;
        y = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("value");
      } catch (const std::exception&) {
        parse_error(line_no, "bad value '" + value + "'");
      }
      try {
        record.observable_values.emplace_back(PauliString::parse(word), y);
      } catch (const std::invalid_argument& e) {
        parse_error(line_no, e.what());
      }
      continue;
    }
    SettingCounts sc{[&] {
                       try {
                         return MeasurementSetting::parse(word);
                       } catch (const std::invalid_argument& e) {
                         parse_error(line_no, e.what());
                       }
                     }(),
                     {}};
    std::string pair;
    while (fields >> pair) {
      const auto colon = pair.find(':');
      if (colon == std::string::npos) parse_error(line_no, "expected <bitstring>:<count>, got '" + pair + "'");
      const std::uint64_t b = parse_bitstring(pair.substr(0, colon), n, line_no);
      const std::string count = pair.substr(colon + 1);
      std::int64_t c = 0;
      try {
        std::size_t used = 0;
        c = std::stoll(count, &used);
        if (used != count.size() || c < 0) throw std::invalid_argument("count");
      } catch (const std::exception&) {
        parse_error(line_no, "bad count '" + count + "'");
      }
      if (c > 0) sc.counts.emplace_back(b, c);
    }
    record.setting_counts.push_back(std::move(sc));
  }
  return record;
}

}  // namespace ampqst
