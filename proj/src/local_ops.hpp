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

// Internal helpers for single-qubit operations on dense d x d matrices.

#ifndef AMPQST_SRC_LOCAL_OPS_HPP
#define AMPQST_SRC_LOCAL_OPS_HPP

#include <cstdint>

#include "ampqst/states.hpp"

namespace ampqst::detail {

/// Basis-index bit of qubit `qubit` (1-based; qubit 1 is the MSB).
inline std::uint64_t qubit_bit(int num_qubits, int qubit) {
  return std::uint64_t{1} << (num_qubits - qubit);
}

/// m <- u_q m u_q^dagger for a 2x2 unitary u acting on the qubit with the
/// given basis-index bit.
inline void conjugate_local(ComplexMatrix& m, const Eigen::Matrix2cd& u, std::uint64_t bit) {
  const auto d = static_cast<std::uint64_t>(m.rows());
  // Left multiplication.
  for (std::uint64_t i0 = 0; i0 < d; ++i0) {
    if (i0 & bit) continue;
    const std::uint64_t i1 = i0 | bit;
    for (std::uint64_t c = 0; c < d; ++c) {
      const Complex a = m(i0, c);
      const Complex b = m(i1, c);
      m(i0, c) = u(0, 0) * a + u(0, 1) * b;
      m(i1, c) = u(1, 0) * a + u(1, 1) * b;
    }
  }
  // Right multiplication by u^dagger.
  for (std::uint64_t r = 0; r < d; ++r) {
    for (std::uint64_t j0 = 0; j0 < d; ++j0) {
      if (j0 & bit) continue;
      const std::uint64_t j1 = j0 | bit;
      const Complex a = m(r, j0);
      const Complex b = m(r, j1);
      m(r, j0) = a * std::conj(u(0, 0)) + b * std::conj(u(0, 1));
      m(r, j1) = a * std::conj(u(1, 0)) + b * std::conj(u(1, 1));
    }
  }
}

}  // namespace ampqst::detail

#endif  // AMPQST_SRC_LOCAL_OPS_HPP
