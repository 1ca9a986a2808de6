// Copyright 2026 The qlab Authors
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

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "qlab/ensemble.hpp"
#include "qlab/experiments.hpp"
#include "qlab/random.hpp"
#include "test_util.hpp"

namespace qlab {
namespace {

using testing::vec;

const QuantumState& ket0() {
  static const QuantumState s = pure_state(vec({1.0, 0.0}));
  return s;
}

TEST(QuantumAverage, Examples) {
  EXPECT_NEAR(quantum_average(ket0(), pauli::z()), 1.0, 1e-15);
  EXPECT_NEAR(quantum_average(ket0(), pauli::x()), 0.0, 1e-15);
  EXPECT_NEAR(quantum_average(maximally_mixed(2), pauli::z()), 0.0, 1e-15);
  EXPECT_THROW(quantum_average(ket0(), AlgebraElement::identity(3)), DimensionError);
}

TEST(QuantumAverage, SingletCorrelationIsMinusCosine) {
  // Oracle: <psi| A x B |psi> computed directly on the state vector.
  Vector psi = Vector::Zero(4);
  psi(1) = 1.0 / std::sqrt(2.0);
  psi(2) = -1.0 / std::sqrt(2.0);
  for (double a : {0.0, 0.3, 1.1, 2.5}) {
    for (double b : {0.0, 0.7, -1.3}) {
      const AlgebraElement m = kron(spin(a), spin(b));
      const double direct = psi.dot(m.matrix() * psi).real();
      EXPECT_NEAR(quantum_average(singlet(), m), direct, 1e-14);
      EXPECT_NEAR(direct, -std::cos(a - b), 1e-14);
    }
  }
}

TEST(QuantumAverage, ComplexExtension) {
  const Complex c = quantum_average_complex(ket0(), pauli::x() * pauli::y());
  // sigma_x sigma_y = i sigma_z
  EXPECT_NEAR(c.real(), 0.0, 1e-15);
  EXPECT_NEAR(c.imag(), 1.0, 1e-15);
}

TEST(QuantumState, RejectsInvalidMatrices) {
  EXPECT_THROW(QuantumState(testing::mat2(1.0, 0.0, 0.0, 1.0)), InvalidStateError);
  EXPECT_THROW(QuantumState(testing::mat2(1.5, 0.0, 0.0, -0.5)), InvalidStateError);
  EXPECT_THROW(QuantumState(testing::mat2(0.5, 0.5, 0.0, 0.5)), InvalidStateError);
  EXPECT_THROW(pure_state(Vector::Zero(2)), InvalidStateError);
}

TEST(QuantumState, MixedStateAndRank) {
  const QuantumState rho = mixed_state({0.25, 0.75}, {vec({1.0, 0.0}), vec({0.0, 2.0})});
  EXPECT_EQ(rho.rank(), 2);
  EXPECT_NEAR(rho.matrix()(1, 1).real(), 0.75, 1e-15);
  EXPECT_NEAR(rho.purity(), 0.625, 1e-15);
  EXPECT_EQ(ket0().rank(), 1);
  EXPECT_NEAR(maximally_mixed(4).purity(), 0.25, 1e-15);
}

TEST(SampleMean, EigenstateIsExact) {
  const SampleStats s = sample_mean(ket0(), pauli::z(), 1000, 7);
  EXPECT_EQ(s.n, 1000u);
  EXPECT_EQ(s.mean, 1.0);
  EXPECT_EQ(s.variance(), 0.0);
}

TEST(SampleMean, HadamardOutcomes) {
  const SampleStats s = sample_mean(ket0(), pauli::x(), 100000, 11);
  EXPECT_LE(std::abs(s.mean), 5.0 / std::sqrt(100000.0));
  EXPECT_NEAR(s.variance(), 1.0, 1e-3);
}

TEST(SampleMean, ZeroTrialsRejected) {
  EXPECT_THROW(sample_mean(ket0(), pauli::z(), 0, 1), ArgumentError);
}

TEST(SampleMean, DeterministicAndCheckpointed) {
  const SampleStats a = sample_mean(maximally_mixed(2), pauli::x(), 500, 3, {1, 10, 100, 500});
  const SampleStats b = sample_mean(maximally_mixed(2), pauli::x(), 500, 3, {500, 100, 10, 1});
  EXPECT_EQ(a.mean, b.mean);
  ASSERT_EQ(a.history.size(), 4u);
  EXPECT_EQ(a.history[0].n, 1u);
  EXPECT_EQ(a.history[3].running_mean, a.mean);
  const SampleStats shorter = sample_mean(maximally_mixed(2), pauli::x(), 100, 3);
  EXPECT_EQ(a.history[2].running_mean, shorter.mean);
}

TEST(SampleStats, MergeMatchesSinglePass) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal(2.0, 3.0);
  SampleStats all, left, right;
  for (int i = 0; i < 1000; ++i) {
    const double x = normal(rng);
    all.push(x);
    (i < 300 ? left : right).push(x);
  }
  left.merge(right);
  EXPECT_EQ(left.n, all.n);
  EXPECT_NEAR(left.mean, all.mean, 1e-12);
  EXPECT_NEAR(left.variance(), all.variance(), 1e-10);

  SampleStats empty;
  empty.merge(all);
  EXPECT_EQ(empty.mean, all.mean);
}

TEST(OutcomeDistribution, MergesDegenerateBranches) {
  const AlgebraElement a = kron(pauli::z(), pauli::i2());
  const OutcomeDistribution dist = outcome_distribution(maximally_mixed(4), a);
  ASSERT_EQ(dist.values.size(), 2u);
  EXPECT_NEAR(dist.probabilities[0], 0.5, 1e-14);
  EXPECT_NEAR(dist.mean(), 0.0, 1e-14);
  EXPECT_NEAR(dist.standard_deviation(), 1.0, 1e-14);
}

TEST(OutcomeCdf, StepFunction) {
  // |0> measured by sigma_x: 1/2 on each of -1, +1.
  EXPECT_EQ(outcome_cdf(ket0(), pauli::x(), -2.0), 0.0);
  EXPECT_NEAR(outcome_cdf(ket0(), pauli::x(), -1.0), 0.5, 1e-14);
  EXPECT_NEAR(outcome_cdf(ket0(), pauli::x(), 0.0), 0.5, 1e-14);
  EXPECT_NEAR(outcome_cdf(ket0(), pauli::x(), 1.0), 1.0, 1e-14);
}

TEST(OutcomeDistribution, MeanEqualsTrace) {
  random::Engine rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + trial % 6;
    const QuantumState rho = random::density(d, 1 + trial % d, rng);
    const AlgebraElement a = random::hermitian(d, rng);
    const OutcomeDistribution dist = outcome_distribution(rho, a);
    EXPECT_NEAR(std::accumulate(dist.probabilities.begin(), dist.probabilities.end(), 0.0), 1.0, 1e-12);
    EXPECT_NEAR(dist.mean(), quantum_average(rho, a), 1e-10);
  }
}

TEST(Linearity, NoncommutingPauliSum) {
  const LinearityReport rep = linearity_check(ket0(), pauli::x(), pauli::z(), 20000, 17);
  EXPECT_TRUE(rep.exact_ok);
  EXPECT_NEAR(rep.exact_sum, 1.0, 1e-14);
  EXPECT_TRUE(rep.sampled_ok) << rep.sampled_residual << " vs " << rep.sigma_combined;
}

TEST(Linearity, RandomCases) {
  random::Engine rng(19);
  for (int trial = 0; trial < 5; ++trial) {
    const int d = 2 + trial;
    const QuantumState rho = random::full_rank_density(d, rng);
    const AlgebraElement a = random::hermitian(d, rng);
    const AlgebraElement b = random::hermitian(d, rng);
    ASSERT_FALSE(compatible(a, b));
    const LinearityReport rep = linearity_check(rho, a, b, 5000, derive_seed(19, trial));
    EXPECT_LE(rep.exact_residual, 1e-10);
    EXPECT_TRUE(rep.passed());
  }
}

TEST(Separation, EqualAndDistinct) {
  EXPECT_TRUE(separation_check(pauli::z(), pauli::z() * pauli::z() * pauli::z()));
  EXPECT_FALSE(separating_context(pauli::z(), pauli::z()).has_value());
  EXPECT_FALSE(separation_check(pauli::z(), pauli::x()));
  EXPECT_THROW(separation_check(pauli::z(), AlgebraElement::identity(3)), DimensionError);
}

TEST(Separation, WitnessContextDistinguishes) {
  random::Engine rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 5;
    const AlgebraElement a1 = random::hermitian(d, rng);
    const AlgebraElement a2 = random::hermitian(d, rng);
    const auto ctx = separating_context(a1, a2);
    ASSERT_TRUE(ctx.has_value());
    double gap = 0.0;
    for (int k = 0; k < d; ++k) {
      const Vector u = ctx->basis().col(k);
      gap = std::max(gap, std::abs(u.dot(a1.matrix() * u).real() - u.dot(a2.matrix() * u).real()));
    }
    EXPECT_NEAR(gap, operator_norm(a1 - a2), 1e-9);
  }
}

TEST(Convergence, ErrorShrinksLikeInverseRoot) {
  random::Engine rng(29);
  const QuantumState rho = random::full_rank_density(3, rng);
  const AlgebraElement a = random::hermitian(3, rng);
  const double exact = quantum_average(rho, a);
  const double sd = outcome_distribution(rho, a).standard_deviation();
  int outside = 0;
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    const SampleStats s = sample_mean(rho, a, 10000, derive_seed(31, rep));
    if (std::abs(s.mean - exact) > 3.0 * sd / 100.0) ++outside;
  }
  EXPECT_LE(outside, 2);
}

TEST(Attainment, EveryBranchReached) {
  random::Engine rng(37);
  for (int d : {2, 3, 4}) {
    const QuantumState rho = random::full_rank_density(d, rng);
    const AlgebraElement a = random::hermitian(d, rng);
    const auto counts = spectrum_attainment(rho, a, 2000, 41);
    EXPECT_EQ(counts.size(), static_cast<std::size_t>(d));
    EXPECT_EQ(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}), 2000u);
    for (auto c : counts) EXPECT_GT(c, 0u);
  }
}

TEST(Mixture, AverageIsAffineInTheState) {
  random::Engine rng(43);
  const QuantumState r1 = random::density(3, 1, rng);
  const QuantumState r2 = random::density(3, 2, rng);
  const AlgebraElement a = random::hermitian(3, rng);
  const double w = 0.3;
  const QuantumState mix(w * r1.matrix() + (1.0 - w) * r2.matrix());
  EXPECT_NEAR(quantum_average(mix, a), w * quantum_average(r1, a) + (1.0 - w) * quantum_average(r2, a),
              1e-12);
}

}  // namespace
}  // namespace qlab
