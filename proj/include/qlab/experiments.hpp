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
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qlab/context.hpp"
#include "qlab/ensemble.hpp"
#include "qlab/physical_state.hpp"
#include "qlab/quantum_state.hpp"
#include "qlab/rng.hpp"

namespace qlab {

namespace pauli {
inline AlgebraElement i2() { return AlgebraElement::identity(2); }
inline AlgebraElement x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return AlgebraElement(m);
}
inline AlgebraElement y() {
  Matrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return AlgebraElement(m);
}
inline AlgebraElement z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return AlgebraElement(m);
}
}  // namespace pauli

/// Spin along angle theta in the x-z plane: cos(theta) Z + sin(theta) X.
inline AlgebraElement spin(double theta) {
  return add(scale(std::cos(theta), pauli::z()), scale(std::sin(theta), pauli::x()));
}

/// (|01> - |10>) / sqrt(2).
inline QuantumState singlet() {
  Vector psi(4);
  psi << 0.0, 1.0, -1.0, 0.0;
  return pure_state(psi);
}

struct ChshConfig {
  // theta_a, theta_a', theta_b, theta_b'
  std::array<double, 4> angles{};
  std::uint64_t trials = 1;
  std::uint64_t master_seed = 0;
};

struct ChshSetting {
  double theta_a = 0.0;
  double theta_b = 0.0;
  double exact = 0.0;         // Tr(rho A(a) x B(b))
  double closed_form = 0.0;   // -cos(theta_a - theta_b)
  double sampled = 0.0;       // mean of the +-1 product
  double standard_error = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t alice_plus = 0;  // trials with Alice outcome +1
  std::uint64_t bob_plus = 0;
};

struct ChshReport {
  // Order: (a, b), (a, b'), (a', b), (a', b').
  std::array<ChshSetting, 4> settings{};
  double s_sampled = 0.0;
  double s_exact = 0.0;
  double s_closed_form = 0.0;
  double s_standard_error = 0.0;
};

inline constexpr std::array<double, 4> kChshSigns{1.0, -1.0, 1.0, 1.0};

inline std::array<std::pair<double, double>, 4> chsh_setting_angles(const ChshConfig& cfg) {
  const auto& t = cfg.angles;
  return {{{t[0], t[2]}, {t[0], t[3]}, {t[1], t[2]}, {t[1], t[3]}}};
}

/// Joint context of a two-party setting: product of the local spin bases.
inline Context chsh_context(double theta_a, double theta_b) {
  return tensor_context(context_from_observable(spin(theta_a)), context_from_observable(spin(theta_b)));
}

/// Closed-form singlet correlations; independent of the trace route.
inline double chsh_closed_form(const std::array<double, 4>& angles) {
  const auto e = [](double a, double b) { return -std::cos(a - b); };
  return e(angles[0], angles[2]) - e(angles[0], angles[3]) + e(angles[1], angles[2]) +
         e(angles[1], angles[3]);
}

/// Event-by-event CHSH run.
///
/// Each trial of each setting is a fresh PhysicalState of `state`; both
/// parties' outcomes are read from the one character it realizes in the
/// joint context, and their product is averaged.
/// S = E(a,b) - E(a,b') + E(a',b) + E(a',b').
inline ChshReport chsh_run(const ChshConfig& cfg, const QuantumState& state = singlet()) {
  if (cfg.trials == 0) throw ArgumentError("chsh_run: trials must be >= 1");
  if (state.dim() != 4) throw DimensionError("chsh_run: state must be two-qubit");
  ChshReport rep;
  const auto pairs = chsh_setting_angles(cfg);
  double s_var = 0.0;
  for (std::size_t s = 0; s < 4; ++s) {
    auto& setting = rep.settings[s];
    setting.theta_a = pairs[s].first;
    setting.theta_b = pairs[s].second;
    const AlgebraElement alice = kron(spin(setting.theta_a), pauli::i2());
    const AlgebraElement bob = kron(pauli::i2(), spin(setting.theta_b));
    setting.exact = quantum_average(state, alice * bob);
    setting.closed_form = -std::cos(setting.theta_a - setting.theta_b);

    const Context ctx = chsh_context(setting.theta_a, setting.theta_b);
    const CharacterTable alice_values = character_table(ctx, alice);
    const CharacterTable bob_values = character_table(ctx, bob);
    const std::uint64_t setting_seed = derive_seed(cfg.master_seed, s);
    SampleStats stats;
    for (std::uint64_t t = 0; t < cfg.trials; ++t) {
      PhysicalState phi(state, derive_seed(setting_seed, t));
      const double a = phi.evaluate(ctx, alice_values);
      const double b = phi.evaluate(ctx, bob_values);
      if (a > 0.0) ++setting.alice_plus;
      if (b > 0.0) ++setting.bob_plus;
      stats.push(a * b);
    }
    setting.sampled = stats.mean;
    setting.standard_error = stats.standard_error();
    setting.trials = cfg.trials;
    rep.s_sampled += kChshSigns[s] * setting.sampled;
    rep.s_exact += kChshSigns[s] * setting.exact;
    s_var += setting.standard_error * setting.standard_error;
  }
  rep.s_closed_form = chsh_closed_form(cfg.angles);
  rep.s_standard_error = std::sqrt(s_var);
  return rep;
}

struct NoSignalingReport {
  // Largest change of one party's exact marginal when the other party
  // switches setting.
  double exact_residual = 0.0;
  // Largest sampled marginal difference in units of its standard error.
  double sampled_max_z = 0.0;
  std::array<std::array<double, 2>, 4> alice_marginals{};  // per setting, P(-1), P(+1)
  std::array<std::array<double, 2>, 4> bob_marginals{};
  bool exact_ok = false;
  bool sampled_ok = false;
  bool passed() const { return exact_ok && sampled_ok; }
};

/// Marginals of each party under the other party's setting change.
///
/// Exact part: Born weights of the joint context summed over the other
/// party's index. Sampled part: frequencies from `run`, compared at 5 sigma.
inline NoSignalingReport no_signaling_check(const ChshConfig& cfg, const QuantumState& state,
                                            const ChshReport& run) {
  NoSignalingReport rep;
  const auto pairs = chsh_setting_angles(cfg);
  for (std::size_t s = 0; s < 4; ++s) {
    const std::vector<double> p = born_weights(state, chsh_context(pairs[s].first, pairs[s].second));
    // Local index 0 is the -1 eigenvector, 1 the +1 eigenvector.
    rep.alice_marginals[s] = {p[0] + p[1], p[2] + p[3]};
    rep.bob_marginals[s] = {p[0] + p[2], p[1] + p[3]};
  }
  // Settings sharing Alice's angle: (0,1) and (2,3); sharing Bob's: (0,2), (1,3).
  const auto diff = [](const std::array<double, 2>& x, const std::array<double, 2>& y) {
    return std::max(std::abs(x[0] - y[0]), std::abs(x[1] - y[1]));
  };
  rep.exact_residual = std::max({diff(rep.alice_marginals[0], rep.alice_marginals[1]),
                                 diff(rep.alice_marginals[2], rep.alice_marginals[3]),
                                 diff(rep.bob_marginals[0], rep.bob_marginals[2]),
                                 diff(rep.bob_marginals[1], rep.bob_marginals[3])});
  rep.exact_ok = rep.exact_residual <= 1e-10;

  const auto z = [](std::uint64_t k1, std::uint64_t n1, std::uint64_t k2, std::uint64_t n2) {
    const double f1 = static_cast<double>(k1) / static_cast<double>(n1);
    const double f2 = static_cast<double>(k2) / static_cast<double>(n2);
    const double pooled = static_cast<double>(k1 + k2) / static_cast<double>(n1 + n2);
    const double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2)));
    return se > 0.0 ? std::abs(f1 - f2) / se : (f1 == f2 ? 0.0 : INFINITY);
  };
  const auto& st = run.settings;
  rep.sampled_max_z = std::max({z(st[0].alice_plus, st[0].trials, st[1].alice_plus, st[1].trials),
                                z(st[2].alice_plus, st[2].trials, st[3].alice_plus, st[3].trials),
                                z(st[0].bob_plus, st[0].trials, st[2].bob_plus, st[2].trials),
                                z(st[1].bob_plus, st[1].trials, st[3].bob_plus, st[3].trials)});
  rep.sampled_ok = rep.sampled_max_z <= 5.0;
  return rep;
}

inline NoSignalingReport no_signaling_check(const ChshConfig& cfg, const QuantumState& state = singlet()) {
  return no_signaling_check(cfg, state, chsh_run(cfg, state));
}

struct ClassicalBoundReport {
  double max_abs_s = 0.0;
  std::array<double, 16> strategy_s{};  // bits: a, a', b, b' (bit set => -1)
};

/// All 16 deterministic local strategies; the max |S| is the classical bound.
/// Mixtures are convex combinations, so they cannot exceed it.
inline ClassicalBoundReport classical_bound_bruteforce() {
  ClassicalBoundReport rep;
  for (unsigned mask = 0; mask < 16; ++mask) {
    const auto v = [mask](unsigned bit) { return (mask >> bit) & 1u ? -1.0 : 1.0; };
    const double a = v(0), a2 = v(1), b = v(2), b2 = v(3);
    const double s = a * b - a * b2 + a2 * b + a2 * b2;
    rep.strategy_s[mask] = s;
    rep.max_abs_s = std::max(rep.max_abs_s, std::abs(s));
  }
  return rep;
}

/// Mermin-Peres square of two-qubit Pauli products.
///
///   I x Z   Z x I   Z x Z      row product +I
///   X x I   I x X   X x X      row product +I
///   X x Z   Z x X   Y x Y      row product +I
///   col +I  col +I  col -I
struct MagicSquare {
  std::array<std::array<AlgebraElement, 3>, 3> cells;
  std::array<int, 3> row_targets{1, 1, 1};
  std::array<int, 3> column_targets{1, 1, -1};

  const AlgebraElement& at(int r, int c) const { return cells[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]; }
  std::vector<AlgebraElement> row(int r) const { return {at(r, 0), at(r, 1), at(r, 2)}; }
  std::vector<AlgebraElement> column(int c) const { return {at(0, c), at(1, c), at(2, c)}; }
};

inline MagicSquare magic_square() {
  using namespace pauli;
  return MagicSquare{{{{kron(i2(), z()), kron(z(), i2()), kron(z(), z())},
                       {kron(x(), i2()), kron(i2(), x()), kron(x(), x())},
                       {kron(x(), z()), kron(z(), x()), kron(y(), y())}}}};
}

struct MagicSquareStructure {
  double square_residual = 0.0;      // max ||O^2 - I||
  double commutation_residual = 0.0; // max ||[O, O']|| within a line
  double product_residual = 0.0;     // max ||O1 O2 O3 - target I||
  bool passed(double tol = 1e-10) const {
    return square_residual <= tol && commutation_residual <= tol && product_residual <= tol;
  }
};

inline MagicSquareStructure verify_magic_square(const MagicSquare& sq) {
  MagicSquareStructure out;
  const Matrix id = Matrix::Identity(4, 4);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      out.square_residual = std::max(out.square_residual, operator_norm(Matrix((sq.at(r, c) * sq.at(r, c)).matrix() - id)));
  const auto check_line = [&](const std::vector<AlgebraElement>& line, int target) {
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        out.commutation_residual = std::max(out.commutation_residual, commutator_norm(line[static_cast<std::size_t>(i)], line[static_cast<std::size_t>(j)]));
    const Matrix product = (line[0] * line[1] * line[2]).matrix();
    out.product_residual = std::max(out.product_residual, operator_norm(Matrix(product - static_cast<double>(target) * id)));
  };
  for (int r = 0; r < 3; ++r) check_line(sq.row(r), sq.row_targets[static_cast<std::size_t>(r)]);
  for (int c = 0; c < 3; ++c) check_line(sq.column(c), sq.column_targets[static_cast<std::size_t>(c)]);
  return out;
}

/// Number of global +-1 assignments to the nine cells meeting all six line
/// products. Zero for the standard targets.
inline int mermin_peres_bruteforce(const std::array<int, 3>& row_targets = {1, 1, 1},
                                   const std::array<int, 3>& column_targets = {1, 1, -1}) {
  int count = 0;
  for (unsigned mask = 0; mask < 512; ++mask) {
    const auto v = [mask](int r, int c) { return (mask >> (3 * r + c)) & 1u ? -1 : 1; };
    bool ok = true;
    for (int r = 0; r < 3 && ok; ++r) ok = v(r, 0) * v(r, 1) * v(r, 2) == row_targets[static_cast<std::size_t>(r)];
    for (int c = 0; c < 3 && ok; ++c) ok = v(0, c) * v(1, c) * v(2, c) == column_targets[static_cast<std::size_t>(c)];
    if (ok) ++count;
  }
  return count;
}

/// Assignments of three +-1 values with the given product.
inline int line_assignments(int target) {
  int count = 0;
  for (unsigned mask = 0; mask < 8; ++mask) {
    const int p = ((mask & 1u) ? -1 : 1) * ((mask & 2u) ? -1 : 1) * ((mask & 4u) ? -1 : 1);
    if (p == target) ++count;
  }
  return count;
}

struct ContextualRunReport {
  std::uint64_t trials = 0;
  std::uint64_t constraint_violations = 0;
  std::uint64_t witness_trials = 0;  // trials with a cell valued differently by its row and column
  double witness_rate() const { return trials ? static_cast<double>(witness_trials) / static_cast<double>(trials) : 0.0; }
  // Per-trial row-3 and column-3 products, first trial.
  double first_row3_product = 0.0;
  double first_column3_product = 0.0;
};

/// Reads the whole square with one physical state per trial.
///
/// Every line is evaluated through the character that state realizes in the
/// line's own joint context, so each line product matches its target in
/// every trial, while at least one cell must take different values in its
/// row and column context.
inline ContextualRunReport mermin_peres_contextual_run(std::uint64_t trials, std::uint64_t seed) {
  const MagicSquare sq = magic_square();
  const QuantumState rho = maximally_mixed(4);

  struct Line {
    Context ctx;
    std::array<CharacterTable, 3> tables;
    int target;
  };
  std::vector<Line> lines;
  for (int r = 0; r < 3; ++r) {
    const auto obs = sq.row(r);
    const Context ctx = joint_context(obs);
    lines.push_back({ctx, {character_table(ctx, obs[0]), character_table(ctx, obs[1]), character_table(ctx, obs[2])},
                     sq.row_targets[static_cast<std::size_t>(r)]});
  }
  for (int c = 0; c < 3; ++c) {
    const auto obs = sq.column(c);
    const Context ctx = joint_context(obs);
    lines.push_back({ctx, {character_table(ctx, obs[0]), character_table(ctx, obs[1]), character_table(ctx, obs[2])},
                     sq.column_targets[static_cast<std::size_t>(c)]});
  }

  ContextualRunReport rep;
  rep.trials = trials;
  for (std::uint64_t t = 0; t < trials; ++t) {
    PhysicalState phi(rho, derive_seed(seed, t));
    std::array<std::array<double, 3>, 6> values{};
    for (std::size_t l = 0; l < 6; ++l) {
      double product = 1.0;
      for (std::size_t i = 0; i < 3; ++i) {
        values[l][i] = phi.evaluate(lines[l].ctx, lines[l].tables[i]);
        product *= values[l][i];
      }
      if (std::abs(product - lines[l].target) > 1e-9) ++rep.constraint_violations;
      if (t == 0 && l == 2) rep.first_row3_product = product;
      if (t == 0 && l == 5) rep.first_column3_product = product;
    }
    bool witnessed = false;
    for (std::size_t r = 0; r < 3 && !witnessed; ++r)
      for (std::size_t c = 0; c < 3 && !witnessed; ++c)
        witnessed = std::abs(values[r][c] - values[3 + c][r]) > 0.5;
    if (witnessed) ++rep.witness_trials;
  }
  return rep;
}

}  // namespace qlab
