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
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "qlab/algebra.hpp"

namespace qlab {

using ContextId = std::uint64_t;

/// FNV-1a hash of the basis entries rounded to 1e-8.
inline ContextId fingerprint(const Matrix& basis) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (word >> (8 * byte)) & 0xFFu;
      h *= 0x100000001B3ULL;
    }
  };
  mix(static_cast<std::uint64_t>(basis.rows()));
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    for (Eigen::Index i = 0; i < basis.rows(); ++i) {
      mix(static_cast<std::uint64_t>(std::llround(basis(i, j).real() * 1e8)));
      mix(static_cast<std::uint64_t>(std::llround(basis(i, j).imag() * 1e8)));
    }
  }
  return h;
}

inline std::string to_hex(ContextId id) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(id));
  return buf;
}

/// A maximal commutative subalgebra, stored as the ordered orthonormal basis
/// in which all of its elements are diagonal. Basis index k selects the k-th
/// character of the subalgebra.
class Context {
 public:
  explicit Context(Matrix basis) : u_(std::move(basis)) {
    if (u_.rows() != u_.cols() || u_.rows() == 0)
      throw DimensionError("context basis must be a nonempty square matrix");
    const double residual =
        (u_.adjoint() * u_ - Matrix::Identity(u_.rows(), u_.cols())).cwiseAbs().maxCoeff();
    if (residual > tolerance::unitary)
      throw NumericalError("context basis is not unitary (residual " + std::to_string(residual) +
                           ")");
    id_ = fingerprint(u_);
  }

  int dim() const { return static_cast<int>(u_.rows()); }
  const Matrix& basis() const { return u_; }
  ContextId id() const { return id_; }
  std::string id_hex() const { return to_hex(id_); }

  friend bool operator==(const Context& a, const Context& b) { return a.id_ == b.id_; }

 private:
  Matrix u_;
  ContextId id_ = 0;
};

constexpr double kContextTolerance = 1e-8;

inline void require_context_dim(const Context& ctx, const AlgebraElement& a, const char* where) {
  if (ctx.dim() != a.dim())
    throw DimensionError(std::string(where) + ": context dim " + std::to_string(ctx.dim()) +
                         " vs element dim " + std::to_string(a.dim()));
}

/// U* A U for the context basis U.
inline Matrix rotate_into(const Context& ctx, const AlgebraElement& a) {
  require_context_dim(ctx, a, "rotate_into");
  return ctx.basis().adjoint() * a.matrix() * ctx.basis();
}

/// Computational basis |0>, ..., |d-1> in index order.
inline Context computational_context(int dim) { return Context(Matrix::Identity(dim, dim)); }

/// Eigenbasis of A, eigenvalues ascending (see eigenbasis).
inline Context context_from_observable(const AlgebraElement& a) {
  return Context(eigenbasis(a).basis);
}

inline bool contains(const Context& ctx, const AlgebraElement& a, double tol = kContextTolerance) {
  const Matrix rotated = rotate_into(ctx, a);
  return detail::off_diagonal_mass(rotated) <= tol * (1.0 + operator_norm(a));
}

inline bool compatible(const AlgebraElement& a, const AlgebraElement& b,
                       double tol = kContextTolerance) {
  return commutator_norm(a, b) <= tol * (1.0 + operator_norm(a)) * (1.0 + operator_norm(b));
}

namespace detail {

// Splits span(v) by the eigenspaces of each observable in turn; degenerate
// blocks left after the last observable get canonical_basis.
inline void refine(const Matrix& v, const std::vector<AlgebraElement>& observables,
                   std::size_t next, Matrix& out, Eigen::Index& column) {
  if (v.cols() == 1) {
    Vector col = v.col(0);
    fix_phase(col);
    out.col(column++) = col;
    return;
  }
  if (next == observables.size()) {
    const Matrix completed = canonical_basis(v);
    out.middleCols(column, completed.cols()) = completed;
    column += completed.cols();
    return;
  }
  const Matrix& a = observables[next].matrix();
  const Matrix restricted = v.adjoint() * a * v;
  const HermitianEigen eig = jacobi_eigen(restricted);
  const double norm = operator_norm(observables[next]);
  for (const auto& [begin, end] : cluster_ranges(eig.values, tolerance::spectral_cluster(norm))) {
    const Matrix block = v * eig.vectors.middleCols(begin, end - begin);
    refine(block, observables, next + 1, out, column);
  }
}

}  // namespace detail

/// Context in which every listed observable is diagonal.
///
/// Diagonalizes the first observable, then splits each degenerate eigenspace
/// by the next one, and so on. Columns are ordered by the first observable's
/// eigenvalue, ties broken by the second's, etc.
inline Context joint_context(const std::vector<AlgebraElement>& observables) {
  if (observables.empty()) throw ArgumentError("joint_context: no observables given");
  const int d = observables.front().dim();
  for (std::size_t i = 0; i < observables.size(); ++i) {
    if (observables[i].dim() != d)
      throw DimensionError("joint_context: observable " + std::to_string(i) + " has dim " +
                           std::to_string(observables[i].dim()) + ", expected " +
                           std::to_string(d));
    require_observable(observables[i], "joint_context");
  }
  for (std::size_t i = 0; i < observables.size(); ++i) {
    for (std::size_t j = i + 1; j < observables.size(); ++j) {
      if (!compatible(observables[i], observables[j]))
        throw IncompatibleObservablesError(i, j, commutator_norm(observables[i], observables[j]));
    }
  }
  Matrix out(d, d);
  Eigen::Index column = 0;
  detail::refine(Matrix::Identity(d, d), observables, 0, out, column);
  return Context(std::move(out));
}

inline Context tensor_context(const Context& first, const Context& second) {
  return Context(kron(first.basis(), second.basis()));
}

/// Value of A under the k-th character of the context: (U* A U)_kk.
inline double character_value(const Context& ctx, int k, const AlgebraElement& a) {
  if (k < 0 || k >= ctx.dim())
    throw IndexError("character index " + std::to_string(k) + " out of range [0, " +
                     std::to_string(ctx.dim()) + ")");
  if (!contains(ctx, a))
    throw NotInContextError("character_value: element is not diagonal in context " + ctx.id_hex());
  const Vector u = ctx.basis().col(k);
  const Complex value = u.dot(a.matrix() * u);
  if (std::abs(value.imag()) > tolerance::diagonal(operator_norm(a)))
    throw NotObservableError("character_value: complex character value");
  return value.real();
}

/// Values of one observable under all characters of a context, checked once.
struct CharacterTable {
  ContextId context = 0;
  std::vector<double> values;
};

inline CharacterTable character_table(const Context& ctx, const AlgebraElement& a) {
  require_observable(a, "character_table");
  if (!contains(ctx, a))
    throw NotInContextError("character_table: element is not diagonal in context " + ctx.id_hex());
  const Matrix rotated = rotate_into(ctx, a);
  CharacterTable table{ctx.id(), std::vector<double>(static_cast<std::size_t>(ctx.dim()))};
  for (int k = 0; k < ctx.dim(); ++k) table.values[static_cast<std::size_t>(k)] = rotated(k, k).real();
  return table;
}

}  // namespace qlab
