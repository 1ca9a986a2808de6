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

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "qlab/error.hpp"

namespace qlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

struct HermitianEigen {
  RealVector values;  // ascending
  Matrix vectors;     // columns match values
  int sweeps = 0;
};

namespace detail {

inline double off_diagonal_mass(const Matrix& a) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) sum += std::norm(a(i, j));
  return std::sqrt(sum);
}

// Zeroes a(p,q) with the unitary G = diag(1, e^{-i arg a_pq}) * [[c, s], [-s, c]].
inline void jacobi_rotate(Matrix& a, Matrix& v, Eigen::Index p, Eigen::Index q) {
  const Complex apq = a(p, q);
  const double r = std::abs(apq);
  if (r == 0.0) return;
  const Complex phase = apq / r;  // e^{i phi}
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double tau = (aqq - app) / (2.0 * r);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const Complex sp = s * std::conj(phase);  // s e^{-i phi}
  const Complex cp = c * std::conj(phase);  // c e^{-i phi}

  // A <- A G
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const Complex ap = a(i, p);
    const Complex aq = a(i, q);
    a(i, p) = c * ap - sp * aq;
    a(i, q) = s * ap + cp * aq;
  }
  // A <- G^* A
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    const Complex ap = a(p, j);
    const Complex aq = a(q, j);
    a(p, j) = c * ap - std::conj(sp) * aq;
    a(q, j) = s * ap + std::conj(cp) * aq;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    const Complex vp = v(i, p);
    const Complex vq = v(i, q);
    v(i, p) = c * vp - sp * vq;
    v(i, q) = s * vp + cp * vq;
  }
}

}  // namespace detail

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized as (A + A*)/2 first. Sweeps stop once the
/// off-diagonal Frobenius mass drops to 1e-13 times the Frobenius norm of A;
/// NumericalError is thrown if that does not happen within `max_sweeps`.
/// Eigenvalues are returned ascending; eigenvectors within a degenerate
/// cluster are whatever the rotations produced (see canonical_eigenbasis).
inline HermitianEigen jacobi_eigen(const Matrix& input, int max_sweeps = 100) {
  if (input.rows() != input.cols())
    throw DimensionError("jacobi_eigen: matrix is not square");
  const Eigen::Index n = input.rows();
  Matrix a = 0.5 * (input + input.adjoint());
  Matrix v = Matrix::Identity(n, n);
  const double scale = a.norm();
  const double target = 1e-13 * scale;

  int sweep = 0;
  while (detail::off_diagonal_mass(a) > target) {
    if (sweep == max_sweeps)
      throw NumericalError("jacobi_eigen: no convergence after " + std::to_string(max_sweeps) +
                           " sweeps");
    for (Eigen::Index p = 0; p + 1 < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) detail::jacobi_rotate(a, v, p, q);
    ++sweep;
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    return a(x, x).real() < a(y, y).real();
  });

  HermitianEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]).real();
    out.vectors.col(k) = v.col(order[k]);
  }
  out.sweeps = sweep;
  return out;
}

}  // namespace qlab
