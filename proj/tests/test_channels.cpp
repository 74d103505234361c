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

#include <bit>
#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "ampqst/measurement.hpp"
#include "test_support.hpp"

namespace ampqst {
namespace {

using testing::kron_pauli;
using testing::max_abs_diff;
using testing::min_eigenvalue;

DensityMatrix from_vector(int n, ComplexVector v) { return pure_density(StateVector(n, v / v.norm())); }

TEST(Depolarizing, MixesTowardIdentity) {
  Rng rng = make_rng(41);
  const DensityMatrix rho = make_random_state(3, 1, rng);
  const DensityMatrix out = apply_depolarizing(rho, 0.2);
  const ComplexMatrix expected = 0.8 * rho.matrix() + 0.2 / 8.0 * ComplexMatrix::Identity(8, 8);
  EXPECT_LT(max_abs_diff(out.matrix(), expected), 1e-15);
  EXPECT_LT(max_abs_diff(apply_depolarizing(rho, 1.0).matrix(), DensityMatrix::maximally_mixed(3).matrix()), 1e-15);
  EXPECT_THROW(apply_depolarizing(rho, 1.5), std::invalid_argument);
  EXPECT_THROW(apply_depolarizing(rho, -0.1), std::invalid_argument);
}

TEST(Depolarizing, ShrinksEveryNonIdentityPauli) {
  const DensityMatrix ghz = pure_density(make_named_state(NamedState::kGhz, 3));
  const DensityMatrix out = apply_depolarizing(ghz, 0.1);
  for (const char* w : {"XXX", "ZZI", "XYY"}) {
    const PauliString p = PauliString::parse(w);
    EXPECT_NEAR(pauli_expectation(out, p), 0.9 * pauli_expectation(ghz, p), 1e-14) << w;
  }
}

TEST(Coherent, RxProductReferenceEntries) {
  const ComplexMatrix u = rx_product(2, 0.3);
  EXPECT_LT(std::abs(u(0, 3) - Complex(-0.02233175543719699, 0.0)), 1e-15);
  EXPECT_LT(std::abs(u(0, 1) - Complex(0.0, -0.14776010333066977)), 1e-15);
  EXPECT_LT(max_abs_diff(u.adjoint() * u, ComplexMatrix::Identity(4, 4)), 1e-14);
}

TEST(Coherent, RxMatchesExponential) {
  const double theta = 0.7;
  const Eigen::MatrixXcd expected =
      std::cos(theta / 2) * Eigen::MatrixXcd::Identity(2, 2) - Complex(0.0, std::sin(theta / 2)) * kron_pauli("X");
  EXPECT_LT((Eigen::MatrixXcd(rx(theta)) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Coherent, ConjugatesAndValidates) {
  Rng rng = make_rng(42);
  const DensityMatrix rho = make_random_state(2, 2, rng);
  const ComplexMatrix u = rx_product(2, 0.4);
  const DensityMatrix out = apply_coherent(rho, u);
  EXPECT_LT(max_abs_diff(out.matrix(), u * rho.matrix() * u.adjoint()), 1e-15);
  EXPECT_NEAR(state_fidelity(rho, apply_coherent(out, u.adjoint())), 1.0, 1e-10);
  EXPECT_THROW(apply_coherent(rho, 2.0 * u), std::invalid_argument);
  EXPECT_THROW(apply_coherent(rho, rx(0.1)), std::invalid_argument);
}

TEST(Readout, ReferenceConvolution) {
  RealVector p(4);
  p << 0.5, 0.2, 0.1, 0.2;
  const OutcomeDistribution out = apply_readout({MeasurementSetting::parse("ZZ"), p}, 0.1);
  const std::vector<double> expected{0.434, 0.226, 0.146, 0.194};
  for (Eigen::Index b = 0; b < 4; ++b) EXPECT_NEAR(out.probs[b], expected[static_cast<std::size_t>(b)], 1e-15);
  EXPECT_THROW(apply_readout({MeasurementSetting::parse("ZZ"), p}, 0.6), std::invalid_argument);
}

TEST(Readout, ScalesParityByWeight) {
  Rng rng = make_rng(43);
  const DensityMatrix rho = make_random_state(3, 2, rng);
  const MeasurementSetting s = MeasurementSetting::parse("XYZ");
  const double q = 0.07;
  const OutcomeDistribution out = apply_readout(outcome_distribution(rho, s), q);
  for (std::uint64_t a = 0; a < 8; ++a) {
    const double shrink = std::pow(1.0 - 2.0 * q, std::popcount(a));
    EXPECT_NEAR(estimate_from_setting(as_span(out.probs), a), shrink * pauli_expectation(rho, s.observable(a)), 1e-14);
  }
}

TEST(Flips, MatchDenseConjugation) {
  Rng rng = make_rng(44);
  const DensityMatrix rho = make_random_state(3, 2, rng);
  for (int q = 1; q <= 3; ++q) {
    std::string xw = "III", zw = "III";
    xw[static_cast<std::size_t>(q - 1)] = 'X';
    zw[static_cast<std::size_t>(q - 1)] = 'Z';
    const ComplexMatrix x = kron_pauli(xw);
    const ComplexMatrix z = kron_pauli(zw);
    EXPECT_LT(max_abs_diff(apply_pauli_flip(rho, q, FlipKind::kBit).matrix(), x * rho.matrix() * x), 1e-15);
    EXPECT_LT(max_abs_diff(apply_pauli_flip(rho, q, FlipKind::kPhase).matrix(), z * rho.matrix() * z), 1e-15);
  }
  EXPECT_THROW(apply_pauli_flip(rho, 0, FlipKind::kBit), std::invalid_argument);
  EXPECT_THROW(apply_loss(rho, 4), std::invalid_argument);
}

TEST(Loss, BellStateBecomesMaximallyMixed) {
  ComplexVector v = ComplexVector::Zero(4);
  v[0] = v[3] = 1.0;
  const DensityMatrix out = apply_loss(from_vector(2, v), 1);
  EXPECT_LT(max_abs_diff(out.matrix(), DensityMatrix::maximally_mixed(2).matrix()), 1e-15);
}

TEST(Loss, ReferenceOnSecondQubit) {
  ComplexVector v = ComplexVector::Zero(4);
  v[0] = v[1] = v[3] = 1.0;
  const DensityMatrix out = apply_loss(from_vector(2, v), 2);
  ComplexMatrix expected(4, 4);
  expected << 1.0 / 3, 0, 1.0 / 6, 0, 0, 1.0 / 3, 0, 1.0 / 6, 1.0 / 6, 0, 1.0 / 6, 0, 0, 1.0 / 6, 0, 1.0 / 6;
  EXPECT_LT(max_abs_diff(out.matrix(), expected), 1e-15);
}

TEST(Loss, EqualsAverageOverPaulis) {
  // (1/2) I (x) Tr_q rho = (1/4) sum_P P_q rho P_q.
  Rng rng = make_rng(45);
  const DensityMatrix rho = make_random_state(3, 3, rng);
  ComplexMatrix twirl = ComplexMatrix::Zero(8, 8);
  for (const char* w : {"III", "IXI", "IYI", "IZI"}) {
    const ComplexMatrix p = kron_pauli(w);
    twirl += 0.25 * p * rho.matrix() * p;
  }
  EXPECT_LT(max_abs_diff(apply_loss(rho, 2).matrix(), twirl), 1e-15);
}

TEST(Composite, WeightedSumOfBranches) {
  Rng rng = make_rng(46);
  const DensityMatrix rho = make_random_state(2, 1, rng);
  const PhotonicNoise noise = PhotonicNoise::uniform(2, {0.05, 0.03, 0.02});
  EXPECT_NEAR(noise.identity_weight, 0.8, 1e-15);
  ComplexMatrix expected = 0.8 * rho.matrix();
  for (int q = 1; q <= 2; ++q) {
    expected += 0.05 * apply_pauli_flip(rho, q, FlipKind::kBit).matrix();
    expected += 0.03 * apply_pauli_flip(rho, q, FlipKind::kPhase).matrix();
    expected += 0.02 * apply_loss(rho, q).matrix();
  }
  const DensityMatrix out = apply_composite(rho, noise);
  EXPECT_LT(max_abs_diff(out.matrix(), expected), 1e-15);
  EXPECT_TRUE(is_density_matrix(out));
}

TEST(Composite, ValidatesWeights) {
  EXPECT_THROW(PhotonicNoise::uniform(3, {0.2, 0.1, 0.1}), std::invalid_argument);
  PhotonicNoise noise;
  noise.identity_weight = 0.9;
  noise.per_qubit = {{0.05, 0.0, 0.0}};
  EXPECT_THROW(noise.validate(1), std::invalid_argument);
  EXPECT_THROW(noise.validate(2), std::invalid_argument);
  noise.per_qubit = {{0.15, -0.05, 0.0}};
  EXPECT_THROW(noise.validate(1), std::invalid_argument);
}

TEST(Channels, RankGrowsAtMostAsExpected) {
  Rng rng = make_rng(47);
  const DensityMatrix rho = make_random_state(3, 1, rng);
  EXPECT_EQ(numerical_rank(apply_pauli_flip(rho, 1, FlipKind::kBit)), 1);
  EXPECT_EQ(numerical_rank(apply_coherent(rho, rx_product(3, 0.2))), 1);
  // I/2 (x) Tr_1 rho: twice the rank of the two-qubit marginal.
  EXPECT_EQ(numerical_rank(apply_loss(rho, 1)), 4);
  EXPECT_EQ(numerical_rank(apply_depolarizing(rho, 0.1)), 8);
  for (const DensityMatrix& out : {apply_loss(rho, 3), apply_depolarizing(rho, 0.3)}) {
    EXPECT_NEAR(out.hermitian().trace(), 1.0, 1e-14);
    EXPECT_GE(min_eigenvalue(out), -1e-14);
  }
}

TEST(Prepare, AppliesChannelsInOrder) {
  Rng rng = make_rng(48);
  const DensityMatrix rho = make_random_state(2, 1, rng);
  NoiseModel noise;
  noise.photonic = PhotonicNoise::uniform(2, {0.02, 0.01, 0.03});
  noise.coherent_prep_theta = 0.15;
  noise.depolarizing = 0.05;
  DensityMatrix expected = apply_composite(rho, *noise.photonic);
  expected = apply_coherent(expected, rx_product(2, 0.15));
  expected = apply_depolarizing(expected, 0.05);
  EXPECT_LT(max_abs_diff(prepare_noisy_state(rho, noise).matrix(), expected.matrix()), 1e-15);
  EXPECT_EQ(max_abs_diff(prepare_noisy_state(rho, {}).matrix(), rho.matrix()), 0.0);
}

TEST(Prepare, ValidatesModel) {
  NoiseModel noise;
  noise.readout_q = 0.7;
  EXPECT_THROW(noise.validate(2), std::invalid_argument);
  noise.readout_q = 0.0;
  noise.coherent_theta = std::nan("");
  EXPECT_THROW(noise.validate(2), std::invalid_argument);
}

TEST(MeasurementNoise, OverrotationZeroIsIdeal) {
  Rng rng = make_rng(49);
  const DensityMatrix rho = make_random_state(3, 2, rng);
  const MeasurementSetting s = MeasurementSetting::parse("YXZ");
  EXPECT_LT((noisy_basis_measurement(rho, s, 0.0).probs - outcome_distribution(rho, s).probs).cwiseAbs().maxCoeff(),
            1e-15);
}

TEST(MeasurementNoise, ReadoutShrinksObservableData) {
  const DensityMatrix ghz = pure_density(make_named_state(NamedState::kGhz, 3));
  NoiseModel noise;
  noise.readout_q = 0.03;
  const MeasurementPlan plan{3, PlanMode::kObservables, {PauliString::parse("ZZI"), PauliString::parse("XXX")}, {}};
  const MeasurementData data = build_measurements(ghz, plan, std::nullopt, noise, 1);
  EXPECT_NEAR(data.y[0], std::pow(0.94, 2), 1e-14);
  EXPECT_NEAR(data.y[1], std::pow(0.94, 3), 1e-14);
}

}  // namespace
}  // namespace ampqst
