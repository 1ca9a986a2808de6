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

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "qlab/algebra.hpp"

namespace qlab {

/// Density operator: Hermitian, unit trace, positive semidefinite.
///
/// Storage is shared between copies, so passing a QuantumState by value
/// per Monte-Carlo trial costs one reference count.
class QuantumState {
 public:
  explicit QuantumState(const Matrix& rho) {
    if (rho.rows() != rho.cols() || rho.rows() == 0)
      throw InvalidStateError("density matrix must be a nonempty square matrix");
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-10)
      throw InvalidStateError("density matrix is not Hermitian (residual " + std::to_string(herm) + ")");
    const Complex trace = rho.trace();
    if (std::abs(trace - 1.0) > 1e-10)
      throw InvalidStateError("density matrix trace is " + std::to_string(trace.real()) + ", expected 1");
    const HermitianEigen eig = jacobi_eigen(rho);
    if (eig.values(0) < -1e-10)
      throw InvalidStateError("density matrix has negative eigenvalue " + std::to_string(eig.values(0)));
    rho_ = std::make_shared<const Matrix>(0.5 * (rho + rho.adjoint()));
    eigenvalues_ = std::make_shared<const RealVector>(eig.values);
  }

  int dim() const { return static_cast<int>(rho_->rows()); }
  const Matrix& matrix() const { return *rho_; }
  const RealVector& eigenvalues() const { return *eigenvalues_; }

  /// Number of eigenvalues above `tol`.
  int rank(double tol = 1e-10) const {
    return static_cast<int>((eigenvalues_->array() > tol).count());
  }
  double purity() const { return (matrix() * matrix()).trace().real(); }

 private:
  std::shared_ptr<const Matrix> rho_;
  std::shared_ptr<const RealVector> eigenvalues_;
};

inline QuantumState pure_state(const Vector& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw InvalidStateError("pure_state: zero vector");
  const Vector unit = psi / norm;
  return QuantumState(unit * unit.adjoint());
}

/// Convex mixture sum_i w_i |v_i><v_i| / sum_i w_i, each v_i normalized.
inline QuantumState mixed_state(const std::vector<double>& weights, const std::vector<Vector>& vectors) {
  if (weights.size() != vectors.size() || weights.empty())
    throw InvalidStateError("mixed_state: need one weight per vector");
  const Eigen::Index d = vectors.front().size();
  Matrix rho = Matrix::Zero(d, d);
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0)) throw InvalidStateError("mixed_state: negative weight");
    if (vectors[i].size() != d) throw DimensionError("mixed_state: vector dimension mismatch");
    const double norm = vectors[i].norm();
    if (!(norm > 0.0)) throw InvalidStateError("mixed_state: zero vector");
    const Vector unit = vectors[i] / norm;
    rho += weights[i] * unit * unit.adjoint();
    total += weights[i];
  }
  if (!(total > 0.0)) throw InvalidStateError("mixed_state: weights sum to zero");
  return QuantumState(rho / total);
}

inline QuantumState maximally_mixed(int dim) {
  return QuantumState(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

}  // namespace qlab
