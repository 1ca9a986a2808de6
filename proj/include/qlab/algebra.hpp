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
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qlab/error.hpp"
#include "qlab/jacobi.hpp"

namespace qlab {

/// Element of the observable algebra, realized as a dense d x d complex matrix.
///
/// Hermitian elements are the observables. Values are immutable; all
/// arithmetic returns new elements and checks dimensions.
class AlgebraElement {
 public:
  explicit AlgebraElement(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols())
      throw DimensionError("algebra element must be square, got " + std::to_string(m_.rows()) +
                           "x" + std::to_string(m_.cols()));
    if (m_.rows() == 0) throw DimensionError("algebra element must have dim >= 1");
  }

  static AlgebraElement identity(int dim) { return AlgebraElement(Matrix::Identity(dim, dim)); }
  static AlgebraElement zero(int dim) { return AlgebraElement(Matrix::Zero(dim, dim)); }
  static AlgebraElement diagonal(const RealVector& values) {
    return AlgebraElement(values.cast<Complex>().asDiagonal().toDenseMatrix());
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

 private:
  Matrix m_;
};

namespace detail {
inline void require_same_dim(const AlgebraElement& a, const AlgebraElement& b, const char* op) {
  if (a.dim() != b.dim())
    throw DimensionError(std::string(op) + ": dimension mismatch " + std::to_string(a.dim()) +
                         " vs " + std::to_string(b.dim()));
}
}  // namespace detail

inline AlgebraElement add(const AlgebraElement& r, const AlgebraElement& s) {
  detail::require_same_dim(r, s, "add");
  return AlgebraElement(r.matrix() + s.matrix());
}

inline AlgebraElement multiply(const AlgebraElement& r, const AlgebraElement& s) {
  detail::require_same_dim(r, s, "multiply");
  return AlgebraElement(r.matrix() * s.matrix());
}

inline AlgebraElement scale(Complex c, const AlgebraElement& r) {
  return AlgebraElement(c * r.matrix());
}

inline AlgebraElement adjoint(const AlgebraElement& r) {
  return AlgebraElement(r.matrix().adjoint());
}

inline AlgebraElement operator+(const AlgebraElement& r, const AlgebraElement& s) { return add(r, s); }
inline AlgebraElement operator-(const AlgebraElement& r, const AlgebraElement& s) {
  return add(r, scale(-1.0, s));
}
inline AlgebraElement operator*(const AlgebraElement& r, const AlgebraElement& s) {
  return multiply(r, s);
}
inline AlgebraElement operator*(Complex c, const AlgebraElement& r) { return scale(c, r); }

/// Kronecker product; composite index is k = k1 * d2 + k2.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline AlgebraElement kron(const AlgebraElement& a, const AlgebraElement& b) {
  return AlgebraElement(kron(a.matrix(), b.matrix()));
}

/// Largest entrywise |R - R*| as the Hermiticity residual.
inline double hermiticity_residual(const AlgebraElement& r) {
  return (r.matrix() - r.matrix().adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const AlgebraElement& r, double tol) {
  if (tol < 0.0) throw ArgumentError("is_hermitian: tol must be >= 0");
  return hermiticity_residual(r) <= tol;
}

/// Largest singular value, computed as sqrt(lambda_max(R*R)).
inline double operator_norm(const Matrix& r) {
  const Matrix rr = r.adjoint() * r;
  const HermitianEigen eig = jacobi_eigen(rr);
  return std::sqrt(std::max(0.0, eig.values(eig.values.size() - 1)));
}

inline double operator_norm(const AlgebraElement& r) { return operator_norm(r.matrix()); }

inline double commutator_norm(const AlgebraElement& a, const AlgebraElement& b) {
  detail::require_same_dim(a, b, "commutator_norm");
  return operator_norm(Matrix(a.matrix() * b.matrix() - b.matrix() * a.matrix()));
}

namespace tolerance {
inline double hermitian(double norm) { return 1e-10 * (1.0 + norm); }
inline double spectral_cluster(double norm) { return 1e-8 * (1.0 + norm); }
inline double diagonal(double norm) { return 1e-9 * (1.0 + norm); }
constexpr double unitary = 1e-10;
constexpr double norm_relative = 1e-9;
}  // namespace tolerance

inline void require_observable(const AlgebraElement& a, const char* where) {
  const double residual = hermiticity_residual(a);
  if (residual > tolerance::hermitian(operator_norm(a)))
    throw NotObservableError(std::string(where) + ": element is not Hermitian (residual " +
                             std::to_string(residual) + ")");
}

struct Spectrum {
  std::vector<double> values;       // strictly ascending
  std::vector<int> multiplicities;  // sums to dim

  /// Index of the spectral value within `tol` of x, or -1.
  int find(double x, double tol) const {
    for (std::size_t i = 0; i < values.size(); ++i)
      if (std::abs(values[i] - x) <= tol) return static_cast<int>(i);
    return -1;
  }
  bool contains(double x, double tol) const { return find(x, tol) >= 0; }
};

struct Eigenbasis {
  Matrix basis;       // unitary, columns ordered as `values`
  RealVector values;  // ascending
};

namespace detail {

/// [begin, end) ranges of ascending values whose consecutive gaps are <= tol.
inline std::vector<std::pair<int, int>> cluster_ranges(const RealVector& values, double tol) {
  std::vector<std::pair<int, int>> out;
  int begin = 0;
  for (int k = 1; k <= values.size(); ++k) {
    if (k == values.size() || values(k) - values(k - 1) > tol) {
      out.emplace_back(begin, k);
      begin = k;
    }
  }
  return out;
}

}  // namespace detail

/// Rotates v so its first component with magnitude above 1e-8 is real positive.
inline void fix_phase(Eigen::Ref<Vector> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > 1e-8) {
      v *= std::conj(v(i)) / mag;
      return;
    }
  }
}

/// Deterministic orthonormal basis for the column span of `span`.
///
/// Computational basis vectors e_0, e_1, ... are projected onto the span in
/// order; the lowest-index vector whose residual (after removing the vectors
/// already chosen) has squared norm >= 1/(2d) is normalized and accepted.
/// Such a vector always exists while the span is not exhausted, because the
/// squared residuals sum to the remaining rank. The result depends only on
/// the span, not on which basis of it was passed in.
inline Matrix canonical_basis(const Matrix& span) {
  const Eigen::Index d = span.rows();
  const Eigen::Index k = span.cols();
  Eigen::HouseholderQR<Matrix> qr(span);
  const Matrix q = qr.householderQ() * Matrix::Identity(d, k);
  Matrix chosen(d, k);
  Eigen::Index found = 0;
  const double threshold = 1.0 / (2.0 * static_cast<double>(d));
  while (found < k) {
    bool accepted = false;
    for (Eigen::Index j = 0; j < d && !accepted; ++j) {
      Vector r = q * q.row(j).adjoint();  // P e_j = Q Q* e_j
      for (Eigen::Index c = 0; c < found; ++c) r -= chosen.col(c) * chosen.col(c).dot(r);
      if (r.squaredNorm() >= threshold) {
        r.normalize();
        fix_phase(r);
        chosen.col(found++) = r;
        accepted = true;
      }
    }
    if (!accepted) throw NumericalError("canonical_basis: span could not be completed");
  }
  return chosen;
}

/// Eigendecomposition of a Hermitian element with deterministic column choice.
///
/// Eigenvalues are ascending. Nondegenerate columns are phase-fixed; each
/// degenerate cluster (gap <= 1e-8 (1 + ||A||)) is replaced by its
/// canonical_basis, so the result depends only on A.
inline Eigenbasis eigenbasis(const AlgebraElement& a) {
  require_observable(a, "eigenbasis");
  const HermitianEigen eig = jacobi_eigen(a.matrix());
  const double norm = std::max(std::abs(eig.values(0)), std::abs(eig.values(eig.values.size() - 1)));
  Eigenbasis out{eig.vectors, eig.values};
  for (const auto& [begin, end] : detail::cluster_ranges(eig.values, tolerance::spectral_cluster(norm))) {
    if (end - begin == 1) {
      fix_phase(out.basis.col(begin));
    } else {
      out.basis.middleCols(begin, end - begin) =
          canonical_basis(eig.vectors.middleCols(begin, end - begin));
    }
  }
  return out;
}

inline Spectrum spectrum(const AlgebraElement& a) {
  require_observable(a, "spectrum");
  const HermitianEigen eig = jacobi_eigen(a.matrix());
  const double norm = std::max(std::abs(eig.values(0)), std::abs(eig.values(eig.values.size() - 1)));
  Spectrum s;
  for (const auto& [begin, end] : detail::cluster_ranges(eig.values, tolerance::spectral_cluster(norm))) {
    s.values.push_back(eig.values.segment(begin, end - begin).mean());
    s.multiplicities.push_back(end - begin);
  }
  return s;
}

struct Postulate1Report {
  Matrix hermitian_root;        // A with A^2 = R*R, A >= 0
  double root_residual = 0.0;   // ||A^2 - R*R||
  double root_min_eigenvalue = 0.0;
  double rstar_r_norm = 0.0;    // ||R*R||
  double frobenius_norm = 0.0;  // ||R||_F
  bool square_root_ok = false;
  bool faithful_ok = false;
  bool passed() const { return square_root_ok && faithful_ok; }
};

/// Checks both algebra axioms for a single element.
///
/// (a) A Hermitian A with A^2 = R*R exists: the positive square root of R*R.
/// (b) ||R*R|| <= tol forces ||R||_F <= sqrt(d tol). For matrices this always
///     holds since ||R||_F^2 = Tr(R*R) <= d ||R*R||.
inline Postulate1Report verify_postulate1(const AlgebraElement& r, double tol) {
  const Matrix rr = r.matrix().adjoint() * r.matrix();
  const HermitianEigen eig = jacobi_eigen(rr);
  const RealVector roots = eig.values.cwiseMax(0.0).cwiseSqrt();
  Postulate1Report rep;
  rep.hermitian_root = eig.vectors * roots.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  rep.root_residual = operator_norm(Matrix(rep.hermitian_root * rep.hermitian_root - rr));
  rep.root_min_eigenvalue = jacobi_eigen(rep.hermitian_root).values(0);
  rep.rstar_r_norm = std::max(0.0, eig.values(eig.values.size() - 1));
  rep.frobenius_norm = r.matrix().norm();
  const double hermitian_residual =
      (rep.hermitian_root - rep.hermitian_root.adjoint()).cwiseAbs().maxCoeff();
  rep.square_root_ok = rep.root_residual <= tol && hermitian_residual <= tol &&
                       rep.root_min_eigenvalue >= -tol;
  rep.faithful_ok = rep.rstar_r_norm > tol ||
                    rep.frobenius_norm <= std::sqrt(static_cast<double>(r.dim()) * tol);
  return rep;
}

}  // namespace qlab
