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

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <gtest/gtest.h>

#include "qlab/experiments.hpp"
#include "qlab/gns.hpp"
#include "qlab/random.hpp"
#include "test_util.hpp"

namespace qlab {
namespace {

using testing::vec;

std::vector<AlgebraElement> matrix_units(int d) {
  std::vector<AlgebraElement> out;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Matrix e = Matrix::Zero(d, d);
      e(i, j) = 1.0;
      out.emplace_back(e);
    }
  return out;
}

RealVector sorted_eigenvalues(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  return solver.eigenvalues();
}

TEST(CStarNorm, Examples) {
  EXPECT_NEAR(cstar_norm(pauli::z()), 1.0, 1e-14);
  EXPECT_NEAR(cstar_norm(AlgebraElement(testing::mat2(0.0, 2.0, 0.0, 0.0))), 2.0, 1e-14);
  EXPECT_EQ(cstar_norm(AlgebraElement::zero(3)), 0.0);
}

TEST(CStarNorm, IdentityOnRandomElements) {
  random::Engine rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + trial % 8;
    const AlgebraElement r = random::element(d, rng);
    const double norm = cstar_norm(r);
    EXPECT_NEAR(norm, Eigen::JacobiSVD<Matrix>(r.matrix()).singularValues()(0), 1e-10 * norm);
    EXPECT_LE(std::abs(cstar_norm(adjoint(r) * r) - norm * norm), 1e-9 * norm * norm);
  }
}

TEST(Gns, PureStateCarrierMatchesDimension) {
  const QuantumState ket0 = pure_state(vec({1.0, 0.0}));
  const GnsRepresentation g = gns_construct(ket0);
  EXPECT_EQ(g.carrier_dim(), 2);
  const GnsReport rep = verify_gns(g, ket0, {pauli::x(), pauli::y(), pauli::z()});
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.expected_carrier_dim, 2);
}

TEST(Gns, MaximallyMixedCarrier) {
  const GnsRepresentation g = gns_construct(maximally_mixed(2));
  EXPECT_EQ(g.carrier_dim(), 4);
  EXPECT_TRUE(verify_gns(g, maximally_mixed(2), matrix_units(2)).passed());
}

TEST(Gns, RankTwoInDimensionThree) {
  const QuantumState rho = mixed_state({0.5, 0.5}, {vec({1.0, 0.0, 0.0}), vec({0.0, 1.0, 0.0})});
  const GnsRepresentation g = gns_construct(rho);
  EXPECT_EQ(g.carrier_dim(), 6);
  EXPECT_TRUE(verify_gns(g, rho, matrix_units(3)).passed());
}

TEST(Gns, AllRanksSmallDimensions) {
  random::Engine rng(7);
  for (int d : {2, 3, 4}) {
    for (int rank = 1; rank <= d; ++rank) {
      const QuantumState rho = random::density(d, rank, rng);
      std::vector<AlgebraElement> elements = matrix_units(d);
      for (int k = 0; k < 10; ++k) elements.push_back(random::element(d, rng));
      const GnsRepresentation g = gns_construct(rho);
      const GnsReport rep = verify_gns(g, rho, elements);
      EXPECT_EQ(rep.carrier_dim, d * rank) << "d=" << d << " rank=" << rank;
      for (const GnsCheck& c : rep.checks) EXPECT_TRUE(c.pass) << c.name << " d=" << d << " rank=" << rank;
    }
  }
}

TEST(Gns, StateReproductionOnRandomElements) {
  random::Engine rng(11);
  const QuantumState rho = random::density(3, 2, rng);
  const GnsRepresentation g = gns_construct(rho);
  for (int k = 0; k < 30; ++k) {
    const AlgebraElement r = random::element(3, rng);
    const Complex via_gns = g.omega().dot(g.rep(r) * g.omega());
    EXPECT_LE(std::abs(via_gns - (rho.matrix() * r.matrix()).trace()), 1e-10);
  }
}

TEST(Gns, VectorOfMatchesRepActingOnOmega) {
  random::Engine rng(13);
  const QuantumState rho = random::full_rank_density(3, rng);
  const GnsRepresentation g = gns_construct(rho);
  for (int k = 0; k < 10; ++k) {
    const AlgebraElement x = random::element(3, rng);
    EXPECT_TRUE(testing::MatrixNear(g.vector_of(x), g.rep(x) * g.omega(), 1e-10));
  }
}

TEST(Gns, PureStateRepresentationIsUnitarilyEquivalent) {
  // For a pure state the carrier is C^d and rep(A) has the spectrum of A.
  random::Engine rng(17);
  for (int d : {2, 3, 5}) {
    const GnsRepresentation g = gns_construct(random::density(d, 1, rng));
    ASSERT_EQ(g.carrier_dim(), d);
    const AlgebraElement a = random::hermitian(d, rng);
    const RealVector lhs = sorted_eigenvalues(g.rep(a));
    const RealVector rhs = sorted_eigenvalues(a.matrix());
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Gns, FullRankRepresentationMatchesLeftRegular) {
  // Full rank: rep(A) is equivalent to A x I on C^(d^2).
  random::Engine rng(19);
  for (int d : {2, 3}) {
    const GnsRepresentation g = gns_construct(random::full_rank_density(d, rng));
    ASSERT_EQ(g.carrier_dim(), d * d);
    const AlgebraElement a = random::hermitian(d, rng);
    const RealVector lhs = sorted_eigenvalues(g.rep(a));
    const RealVector rhs = sorted_eigenvalues(kron(a.matrix(), Matrix::Identity(d, d)));
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Gns, ReportsFailureForWrongState) {
  const QuantumState ket0 = pure_state(vec({1.0, 0.0}));
  const GnsRepresentation g = gns_construct(ket0);
  const GnsReport rep = verify_gns(g, maximally_mixed(2), {pauli::z()});
  EXPECT_FALSE(rep.passed());
  ASSERT_NE(rep.find("state_reproduction"), nullptr);
  EXPECT_FALSE(rep.find("state_reproduction")->pass);
  EXPECT_FALSE(rep.find("carrier_dim")->pass);
  EXPECT_TRUE(rep.find("homomorphism")->pass);
}

}  // namespace
}  // namespace qlab
