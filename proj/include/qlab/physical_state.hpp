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

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qlab/context.hpp"
#include "qlab/quantum_state.hpp"
#include "qlab/rng.hpp"

namespace qlab {

constexpr int kMaxDim = 64;

namespace detail {

// p_k = <u_k, rho u_k>, clamped at 0 and renormalized. Writes d entries.
inline void fill_born_weights(const QuantumState& rho, const Context& ctx, double* out) {
  const Matrix& r = rho.matrix();
  const Matrix& u = ctx.basis();
  const Eigen::Index d = u.rows();
  double total = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    Complex acc = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      Complex row = 0.0;
      for (Eigen::Index i = 0; i < d; ++i) row += r(j, i) * u(i, k);
      acc += std::conj(u(j, k)) * row;
    }
    double p = acc.real();
    if (p < -1e-12)
      throw InvalidStateError("born weight " + std::to_string(p) + " is negative");
    if (p < 0.0) p = 0.0;
    out[k] = p;
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw InvalidStateError("born weights sum to " + std::to_string(total));
  for (Eigen::Index k = 0; k < d; ++k) out[k] /= total;
}

}  // namespace detail

/// Outcome probabilities for the characters of `ctx` in state `rho`.
inline std::vector<double> born_weights(const QuantumState& rho, const Context& ctx) {
  if (rho.dim() != ctx.dim())
    throw DimensionError("born_weights: state dim " + std::to_string(rho.dim()) +
                         " vs context dim " + std::to_string(ctx.dim()));
  std::vector<double> p(static_cast<std::size_t>(ctx.dim()));
  detail::fill_born_weights(rho, ctx, p.data());
  return p;
}

/// One individual system: a functional whose restriction to every context is
/// a character of that context.
///
/// The character used in a context is drawn lazily from the Born weights of
/// `rho`, with randomness keyed only by (seed, context id), and then cached.
/// Re-evaluation in the same context therefore always agrees, while two
/// different contexts containing the same observable are sampled
/// independently and may assign it different values.
///
/// Single owner: the cache is mutated on evaluation.
class PhysicalState {
 public:
  PhysicalState(QuantumState rho, std::uint64_t seed) : rho_(std::move(rho)), seed_(seed) {}

  const QuantumState& quantum_state() const { return rho_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<std::pair<ContextId, int>>& cache() const { return cache_; }

  /// Index of the character this state realizes in `ctx`.
  int index(const Context& ctx) {
    for (const auto& [id, k] : cache_)
      if (id == ctx.id()) return k;
    if (ctx.dim() != rho_.dim())
      throw DimensionError("physical state dim " + std::to_string(rho_.dim()) +
                           " vs context dim " + std::to_string(ctx.dim()));
    if (ctx.dim() > kMaxDim) throw DimensionError("context dim exceeds " + std::to_string(kMaxDim));
    std::array<double, kMaxDim> p{};
    detail::fill_born_weights(rho_, ctx, p.data());
    const double u = to_unit_interval(splitmix64(seed_ ^ splitmix64(ctx.id())));
    int chosen = -1;
    double cumulative = 0.0;
    for (int k = 0; k < ctx.dim(); ++k) {
      if (p[k] <= 0.0) continue;
      chosen = k;
      cumulative += p[k];
      if (u < cumulative) break;
    }
    cache_.emplace_back(ctx.id(), chosen);
    return chosen;
  }

  double evaluate(const Context& ctx, const AlgebraElement& a) {
    if (!contains(ctx, a))
      throw NotInContextError("evaluate: element is not diagonal in context " + ctx.id_hex());
    return character_value(ctx, index(ctx), a);
  }

  /// Fast path for repeated trials: the table was checked when it was built.
  double evaluate(const Context& ctx, const CharacterTable& table) {
    if (table.context != ctx.id())
      throw NotInContextError("evaluate: character table belongs to another context");
    return table.values[static_cast<std::size_t>(index(ctx))];
  }

  /// Debug dump: context id (hex) -> character index.
  nlohmann::json cache_json() const {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [id, k] : cache_) out[to_hex(id)] = k;
    return out;
  }

 private:
  QuantumState rho_;
  std::uint64_t seed_;
  std::vector<std::pair<ContextId, int>> cache_;
};

inline PhysicalState new_physical_state(const QuantumState& rho, std::uint64_t seed) {
  return PhysicalState(rho, seed);
}

struct CharacterReport {
  double value = 0.0;
  double value_of_zero = 0.0;
  double value_of_identity = 0.0;
  double value_of_square = 0.0;
  bool zero_ok = false;       // phi(0) = 0
  bool identity_ok = false;   // phi(I) = 1
  bool square_ok = false;     // phi(A^2) >= 0
  bool in_spectrum = false;   // phi(A) in sigma(A)
  bool multiplicative = false;
  bool passed() const { return zero_ok && identity_ok && square_ok && in_spectrum && multiplicative; }
};

/// Single-state checks of the character properties. Attainment of every
/// spectral value is an ensemble statement; see spectrum_attainment.
inline CharacterReport verify_character_properties(PhysicalState& phi, const Context& ctx,
                                                   const AlgebraElement& a) {
  CharacterReport rep;
  const int d = a.dim();
  rep.value = phi.evaluate(ctx, a);
  rep.value_of_zero = phi.evaluate(ctx, AlgebraElement::zero(d));
  rep.value_of_identity = phi.evaluate(ctx, AlgebraElement::identity(d));
  rep.value_of_square = phi.evaluate(ctx, a * a);
  rep.zero_ok = std::abs(rep.value_of_zero) <= 1e-12;
  rep.identity_ok = std::abs(rep.value_of_identity - 1.0) <= 1e-12;
  rep.square_ok = rep.value_of_square >= -1e-9;
  rep.in_spectrum = spectrum(a).contains(rep.value, 1e-8);
  rep.multiplicative = std::abs(rep.value_of_square - rep.value * rep.value) <= 1e-9;
  return rep;
}

}  // namespace qlab
