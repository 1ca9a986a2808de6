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

#pragma once

#include <random>

#include "qlab/algebra.hpp"
#include "qlab/quantum_state.hpp"

// Seeded random inputs for property checks.

namespace qlab::random {

using Engine = std::mt19937_64;

inline Matrix gaussian_matrix(int rows, int cols, Engine& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = Complex(normal(rng), normal(rng));
  return m;
}

inline AlgebraElement element(int d, Engine& rng) { return AlgebraElement(gaussian_matrix(d, d, rng)); }

inline AlgebraElement hermitian(int d, Engine& rng) {
  const Matrix g = gaussian_matrix(d, d, rng);
  return AlgebraElement(0.5 * (g + g.adjoint()));
}

/// Haar-ish unitary from the QR factor of a complex Gaussian matrix.
inline Matrix unitary(int d, Engine& rng) {
  Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(d, d, rng));
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < d; ++k) {
    const Complex diag = r(k, k);
    if (std::abs(diag) > 0.0) q.col(k) *= diag / std::abs(diag);
  }
  return q;
}

/// Hermitian U diag(values) U* with values uniform in [-scale, scale].
inline AlgebraElement diagonal_in(const Matrix& u, Engine& rng, double scale = 2.0) {
  std::uniform_real_distribution<double> uniform(-scale, scale);
  RealVector values(u.cols());
  for (Eigen::Index k = 0; k < values.size(); ++k) values(k) = uniform(rng);
  return AlgebraElement(u * values.cast<Complex>().asDiagonal() * u.adjoint());
}

/// Density matrix of exactly `rank` nonzero eigenvalues, each in
/// [0.2, 1] before normalization, in a random eigenbasis.
inline QuantumState density(int d, int rank, Engine& rng) {
  std::uniform_real_distribution<double> uniform(0.2, 1.0);
  const Matrix u = unitary(d, rng);
  RealVector w = RealVector::Zero(d);
  for (int k = 0; k < rank; ++k) w(k) = uniform(rng);
  w /= w.sum();
  return QuantumState(u * w.cast<Complex>().asDiagonal() * u.adjoint());
}

/// Full-rank state with every eigenvalue >= 1/(2d).
inline QuantumState full_rank_density(int d, Engine& rng) {
  const Matrix g = gaussian_matrix(d, d, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * rho + 0.5 * Matrix::Identity(d, d) / static_cast<double>(d);
  return QuantumState(rho);
}

inline Vector state_vector(int d, Engine& rng) {
  Vector v = gaussian_matrix(d, 1, rng).col(0);
  return v / v.norm();
}

}  // namespace qlab::random
