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
#include <string>
#include <vector>

#include "qlab/algebra.hpp"
#include "qlab/ensemble.hpp"
#include "qlab/quantum_state.hpp"

namespace qlab {

/// ||R||^2 = sup over states of Psi(R*R). Over all density operators the
/// supremum of Tr(rho R*R) is lambda_max(R*R), so this is the operator norm.
inline double cstar_norm(const AlgebraElement& r) { return operator_norm(r); }

/// Hilbert-space representation built from a state by the GNS construction.
///
/// The algebra itself (dim d^2, matrix units E_ij at index i*d + j) carries
/// the form <R, S> = Tr(rho R* S). Null vectors of the form are quotiented
/// out and the remaining classes are orthonormalized; the columns of
/// basis_map() are those orthonormal classes written in matrix units.
class GnsRepresentation {
 public:
  GnsRepresentation(int dim, Matrix basis_map, Matrix coordinates, Vector omega)
      : dim_(dim), basis_(std::move(basis_map)), coords_(std::move(coordinates)), omega_(std::move(omega)) {}

  int dim() const { return dim_; }
  int carrier_dim() const { return static_cast<int>(basis_.cols()); }
  const Matrix& basis_map() const { return basis_; }
  const Vector& omega() const { return omega_; }

  /// Coordinates of the class of X in the orthonormal carrier basis.
  Vector vector_of(const AlgebraElement& x) const {
    if (x.dim() != dim_) throw DimensionError("gns vector_of: element dim mismatch");
    Vector flat(dim_ * dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) flat(i * dim_ + j) = x(i, j);
    return coords_ * flat;
  }

  /// Left multiplication by A on the carrier.
  Matrix rep(const AlgebraElement& a) const {
    if (a.dim() != dim_) throw DimensionError("gns rep: element dim mismatch");
    const Matrix left = kron(a.matrix(), Matrix::Identity(dim_, dim_));
    return coords_ * left * basis_;
  }

 private:
  int dim_;
  Matrix basis_;   // d^2 x m
  Matrix coords_;  // m x d^2, maps vec(X) to carrier coordinates
  Vector omega_;
};

/// Builds the carrier, cyclic vector and representation for `rho`.
///
/// Gram entries are <E_ij, E_kl> = delta_ik rho_lj. Gram eigenvalues at or
/// below 1e-10 * lambda_max span the null space; the carrier dimension comes
/// out as d * rank(rho).
inline GnsRepresentation gns_construct(const QuantumState& rho) {
  const int d = rho.dim();
  const int n = d * d;
  Matrix gram = Matrix::Zero(n, n);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int l = 0; l < d; ++l) gram(i * d + j, i * d + l) = rho.matrix()(l, j);

  const HermitianEigen eig = jacobi_eigen(gram);
  const double lambda_max = eig.values(n - 1);
  if (!(lambda_max > 0.0)) throw InvalidStateError("gns_construct: form vanishes identically");
  const double cutoff = 1e-10 * lambda_max;
  std::vector<int> kept;
  for (int k = n - 1; k >= 0; --k)
    if (eig.values(k) > cutoff) kept.push_back(k);

  const int m = static_cast<int>(kept.size());
  Matrix basis(n, m);
  Matrix coords(m, n);
  for (int a = 0; a < m; ++a) {
    const double lambda = eig.values(kept[static_cast<std::size_t>(a)]);
    const Vector v = eig.vectors.col(kept[static_cast<std::size_t>(a)]);
    basis.col(a) = v / std::sqrt(lambda);
    // <f_a, X> = f_a* G x = sqrt(lambda) v*  x
    coords.row(a) = std::sqrt(lambda) * v.adjoint();
  }
  Vector identity_vec = Vector::Zero(n);
  for (int i = 0; i < d; ++i) identity_vec(i * d + i) = 1.0;
  Vector omega = coords * identity_vec;
  if (std::abs(omega.norm() - 1.0) > 1e-10)
    throw NumericalError("gns_construct: cyclic vector norm " + std::to_string(omega.norm()));
  return GnsRepresentation(d, std::move(basis), std::move(coords), std::move(omega));
}

struct GnsCheck {
  std::string name;
  double max_residual = 0.0;
  bool pass = true;
};

struct GnsReport {
  int carrier_dim = 0;
  int expected_carrier_dim = 0;
  std::vector<GnsCheck> checks;
  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const GnsCheck& c) { return c.pass; });
  }
  const GnsCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

/// Certificate that `g` represents the algebra and reproduces `rho`.
///
/// Checks over `elements` (each single element, and consecutive pairs for
/// products): homomorphism, *-preservation, state reproduction, contractivity;
/// plus cyclicity of Omega, unit norm of Omega, rep(I) = I, and the expected
/// carrier dimension d * rank(rho). Failures are reported, never thrown.
inline GnsReport verify_gns(const GnsRepresentation& g, const QuantumState& rho,
                            const std::vector<AlgebraElement>& elements, double tol = 1e-8) {
  const int d = g.dim();
  const int m = g.carrier_dim();
  GnsReport rep;
  rep.carrier_dim = m;
  rep.expected_carrier_dim = d * rho.rank();

  GnsCheck homomorphism{"homomorphism"};
  GnsCheck star{"star_preservation"};
  GnsCheck state{"state_reproduction"};
  GnsCheck contractive{"contractivity"};
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const AlgebraElement& r = elements[i];
    const AlgebraElement& s = elements[(i + 1) % elements.size()];
    const Matrix rep_r = g.rep(r);
    homomorphism.max_residual = std::max(
        homomorphism.max_residual, (g.rep(r * s) - rep_r * g.rep(s)).cwiseAbs().maxCoeff());
    star.max_residual = std::max(star.max_residual, (g.rep(adjoint(r)) - rep_r.adjoint()).cwiseAbs().maxCoeff());
    const Complex reproduced = g.omega().dot(rep_r * g.omega());
    const Complex expected = (rho.matrix() * r.matrix()).trace();
    state.max_residual = std::max(state.max_residual, std::abs(reproduced - expected));
    contractive.max_residual =
        std::max(contractive.max_residual, operator_norm(rep_r) - operator_norm(r));
  }
  homomorphism.pass = homomorphism.max_residual <= tol;
  star.pass = star.max_residual <= tol;
  state.pass = state.max_residual <= tol;
  contractive.pass = contractive.max_residual <= tol;

  // Cyclicity: {rep(E_ij) Omega} must span the carrier. Residual is the
  // number of missing dimensions.
  GnsCheck cyclic{"cyclicity"};
  Matrix orbit(m, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      Matrix unit = Matrix::Zero(d, d);
      unit(i, j) = 1.0;
      orbit.col(i * d + j) = g.rep(AlgebraElement(unit)) * g.omega();
    }
  }
  const HermitianEigen orbit_eig = jacobi_eigen(Matrix(orbit * orbit.adjoint()));
  const double top = orbit_eig.values(m - 1);
  const int orbit_rank = static_cast<int>((orbit_eig.values.array() > 1e-10 * top).count());
  cyclic.max_residual = static_cast<double>(m - orbit_rank);
  cyclic.pass = orbit_rank == m;

  GnsCheck omega_norm{"omega_norm", std::abs(g.omega().squaredNorm() - 1.0)};
  omega_norm.pass = omega_norm.max_residual <= 1e-10;
  GnsCheck unit{"identity", (g.rep(AlgebraElement::identity(d)) - Matrix::Identity(m, m)).cwiseAbs().maxCoeff()};
  unit.pass = unit.max_residual <= 1e-10;
  GnsCheck carrier{"carrier_dim", static_cast<double>(std::abs(m - rep.expected_carrier_dim))};
  carrier.pass = m == rep.expected_carrier_dim;

  rep.checks = {homomorphism, star, state, cyclic, contractive, omega_norm, unit, carrier};
  return rep;
}

}  // namespace qlab
