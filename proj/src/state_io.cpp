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

#include "ampqst/states.hpp"

namespace ampqst {

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw std::runtime_error("DMAT line " + std::to_string(line) + ": " + what);
}

}  // namespace

void write_dmat(std::ostream& out, const HermitianMatrix& h) {
  out << "DMAT v1 n=" << h.num_qubits() << '\n';
  const ComplexMatrix& m = h.matrix();
  for (Eigen::Index k = 0; k < m.rows(); ++k) {
    for (Eigen::Index l = 0; l < m.cols(); ++l) {
      out << format_double(m(k, l).real()) << ' ' << format_double(m(k, l).imag()) << '\n';
    }
  }
}

HermitianMatrix read_dmat(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) parse_error(1, "missing header");
  int n = 0;
  {
    std::istringstream header(line);
    std::string magic, version, nfield;
    header >> magic >> version >> nfield;
    if (magic != "DMAT" || version != "v1" || nfield.rfind("n=", 0) != 0) {
      parse_error(1, "expected 'DMAT v1 n=<n>'");
    }
    try {
      n = std::stoi(nfield.substr(2));
    } catch (const std::exception&) {
      parse_error(1, "bad qubit count '" + nfield + "'");
    }
    if (n < 1 || n > kMaxQubits) parse_error(1, "qubit count out of range");
  }
  const auto d = static_cast<Eigen::Index>(dimension_of(n));
  ComplexMatrix m(d, d);
  std::size_t line_no = 1;
  for (Eigen::Index idx = 0; idx < d * d; ++idx) {
    ++line_no;
    if (!std::getline(in, line)) parse_error(line_no, "unexpected end of file");
    std::istringstream fields(line);
    double re = 0.0, im = 0.0;
    std::string extra;
    if (!(fields >> re >> im) || (fields >> extra)) parse_error(line_no, "expected '<re> <im>'");
    m(idx / d, idx % d) = Complex(re, im);
  }
  return HermitianMatrix(n, std::move(m));
}

}  // namespace ampqst
