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
#include <cstdint>
#include <optional>
#include <vector>

#include "qlab/context.hpp"
#include "qlab/physical_state.hpp"
#include "qlab/quantum_state.hpp"
#include "qlab/rng.hpp"

namespace qlab {

inline void require_state_dim(const QuantumState& rho, const AlgebraElement& a, const char* where) {
  if (rho.dim() != a.dim())
    throw DimensionError(std::string(where) + ": state dim " + std::to_string(rho.dim()) +
                         " vs element dim " + std::to_string(a.dim()));
}

/// Psi(A) = Tr(rho A) for an observable A.
inline double quantum_average(const QuantumState& rho, const AlgebraElement& a) {
  require_state_dim(rho, a, "quantum_average");
  require_observable(a, "quantum_average");
  const Complex t = (rho.matrix() * a.matrix()).trace();
  if (std::abs(t.imag()) > 1e-10 * (1.0 + operator_norm(a)))
    throw NumericalError("quantum_average: imaginary residue " + std::to_string(t.imag()));
  return t.real();
}

/// Psi continued to the whole algebra: Psi(R) = Psi(A) + i Psi(B) for R = A + iB.
inline Complex quantum_average_complex(const QuantumState& rho, const AlgebraElement& r) {
  require_state_dim(rho, r, "quantum_average_complex");
  const AlgebraElement re = scale(0.5, r + adjoint(r));
  const AlgebraElement im = scale(Complex(0.0, -0.5), r - adjoint(r));
  return {quantum_average(rho, re), quantum_average(rho, im)};
}

/// Running mean/variance (Welford) with associative merge.
struct SampleStats {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;  // sum of squared deviations
  struct Checkpoint {
    std::uint64_t n;
    double running_mean;
  };
  std::vector<Checkpoint> history;

  void push(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }

  /// Chan et al. pairwise combination; history is not merged.
  void merge(const SampleStats& other) {
    if (other.n == 0) return;
    if (n == 0) {
      n = other.n;
      mean = other.mean;
      m2 = other.m2;
      return;
    }
    const double total = static_cast<double>(n + other.n);
    const double delta = other.mean - mean;
    mean += delta * static_cast<double>(other.n) / total;
    m2 += other.m2 + delta * delta * static_cast<double>(n) * static_cast<double>(other.n) / total;
    n += other.n;
  }

  /// Unbiased sample variance; 0 for n < 2.
  double variance() const { return n > 1 ? std::max(0.0, m2 / static_cast<double>(n - 1)) : 0.0; }
  double standard_error() const { return n > 0 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0; }
};

/// A Hermitian observable's spectral branches with their probabilities.
struct OutcomeDistribution {
  std::vector<double> values;  // ascending spectral values
  std::vector<double> probabilities;

  double mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) m += values[i] * probabilities[i];
    return m;
  }
  double standard_deviation() const {
    const double m = mean();
    double v = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) v += probabilities[i] * (values[i] - m) * (values[i] - m);
    return std::sqrt(std::max(0.0, v));
  }
};

/// Exact outcome law of A in rho, from the spectral projections of A.
inline OutcomeDistribution outcome_distribution(const QuantumState& rho, const AlgebraElement& a) {
  require_state_dim(rho, a, "outcome_distribution");
  const Eigenbasis eb = eigenbasis(a);
  const Context ctx(eb.basis);
  const std::vector<double> p = born_weights(rho, ctx);
  const double norm = std::max(std::abs(eb.values(0)), std::abs(eb.values(eb.values.size() - 1)));
  OutcomeDistribution out;
  for (const auto& [begin, end] : detail::cluster_ranges(eb.values, tolerance::spectral_cluster(norm))) {
    double mass = 0.0;
    for (int k = begin; k < end; ++k) mass += p[static_cast<std::size_t>(k)];
    out.values.push_back(eb.values.segment(begin, end - begin).mean());
    out.probabilities.push_back(mass);
  }
  return out;
}

/// P(outcome of A <= x).
inline double outcome_cdf(const QuantumState& rho, const AlgebraElement& a, double x) {
  const OutcomeDistribution dist = outcome_distribution(rho, a);
  const double slack = tolerance::spectral_cluster(operator_norm(a));
  double total = 0.0;
  for (std::size_t i = 0; i < dist.values.size(); ++i)
    if (dist.values[i] <= x + slack) total += dist.probabilities[i];
  return std::min(1.0, total);
}

/// Mean of A over n independent fresh physical states.
///
/// Trial t uses a PhysicalState seeded with derive_seed(seed, t) and reads A
/// in context_from_observable(A). No state is reused between trials. If
/// `checkpoints` is given, the running mean is recorded after each listed n.
inline SampleStats sample_mean(const QuantumState& rho, const AlgebraElement& a, std::uint64_t n,
                               std::uint64_t seed, const std::vector<std::uint64_t>& checkpoints = {}) {
  if (n == 0) throw ArgumentError("sample_mean: trial count must be >= 1");
  require_state_dim(rho, a, "sample_mean");
  const Context ctx = context_from_observable(a);
  const CharacterTable table = character_table(ctx, a);
  SampleStats stats;
  std::size_t next_checkpoint = 0;
  std::vector<std::uint64_t> marks = checkpoints;
  std::sort(marks.begin(), marks.end());
  for (std::uint64_t t = 0; t < n; ++t) {
    PhysicalState phi(rho, derive_seed(seed, t));
    stats.push(phi.evaluate(ctx, table));
    while (next_checkpoint < marks.size() && marks[next_checkpoint] <= t + 1) {
      if (marks[next_checkpoint] == t + 1) stats.history.push_back({t + 1, stats.mean});
      ++next_checkpoint;
    }
  }
  return stats;
}

/// Number of trials (out of `trials`) landing on each spectral branch of A.
inline std::vector<std::uint64_t> spectrum_attainment(const QuantumState& rho, const AlgebraElement& a,
                                                      std::uint64_t trials, std::uint64_t seed) {
  const Spectrum spec = spectrum(a);
  const Context ctx = context_from_observable(a);
  const CharacterTable table = character_table(ctx, a);
  std::vector<std::uint64_t> counts(spec.values.size(), 0);
  const double tol = 1e-8 * (1.0 + operator_norm(a));
  for (std::uint64_t t = 0; t < trials; ++t) {
    PhysicalState phi(rho, derive_seed(seed, t));
    const int branch = spec.find(phi.evaluate(ctx, table), tol);
    if (branch < 0) throw NumericalError("spectrum_attainment: sampled value outside spectrum");
    ++counts[static_cast<std::size_t>(branch)];
  }
  return counts;
}

struct LinearityReport {
  double exact_a = 0.0;
  double exact_b = 0.0;
  double exact_sum = 0.0;
  double exact_residual = 0.0;  // |Psi(A+B) - Psi(A) - Psi(B)|
  SampleStats sampled_a;
  SampleStats sampled_b;
  SampleStats sampled_sum;
  double sampled_residual = 0.0;  // |mean(A+B) - mean(A) - mean(B)|
  double sigma_combined = 0.0;
  bool exact_ok = false;
  bool sampled_ok = false;
  bool passed() const { return exact_ok && sampled_ok; }
};

/// Additivity of the ensemble average, including for noncommuting A, B.
///
/// A, B and A+B are each sampled in their own context from independent
/// seed streams. The sampled residual is held to 5 sigma, with sigma from the
/// exact outcome standard deviations.
inline LinearityReport linearity_check(const QuantumState& rho, const AlgebraElement& a,
                                       const AlgebraElement& b, std::uint64_t n, std::uint64_t seed) {
  const AlgebraElement sum = a + b;
  LinearityReport rep;
  rep.exact_a = quantum_average(rho, a);
  rep.exact_b = quantum_average(rho, b);
  rep.exact_sum = quantum_average(rho, sum);
  rep.exact_residual = std::abs(rep.exact_sum - rep.exact_a - rep.exact_b);
  rep.exact_ok = rep.exact_residual <= 1e-10;

  rep.sampled_a = sample_mean(rho, a, n, derive_seed(seed, 0));
  rep.sampled_b = sample_mean(rho, b, n, derive_seed(seed, 1));
  rep.sampled_sum = sample_mean(rho, sum, n, derive_seed(seed, 2));
  rep.sampled_residual = std::abs(rep.sampled_sum.mean - rep.sampled_a.mean - rep.sampled_b.mean);
  const double sa = outcome_distribution(rho, a).standard_deviation();
  const double sb = outcome_distribution(rho, b).standard_deviation();
  const double ss = outcome_distribution(rho, sum).standard_deviation();
  rep.sigma_combined = std::sqrt((sa * sa + sb * sb + ss * ss) / static_cast<double>(n));
  rep.sampled_ok = rep.sampled_residual <= std::max(5.0 * rep.sigma_combined, 1e-12);
  return rep;
}

/// Whether two observables are the same element.
///
/// In finite dimension, agreement of every character value over every
/// context forces equality of the matrices, so the matrix comparison decides
/// separation exactly.
inline bool separation_check(const AlgebraElement& a1, const AlgebraElement& a2) {
  if (a1.dim() != a2.dim()) throw DimensionError("separation_check: dimension mismatch");
  return operator_norm(Matrix(a1.matrix() - a2.matrix())) <= 1e-10 * (1.0 + operator_norm(a1));
}

/// A context whose diagonal entries of A1 and A2 differ by ||A1 - A2||, or
/// nothing if the two are equal under separation_check.
inline std::optional<Context> separating_context(const AlgebraElement& a1, const AlgebraElement& a2) {
  if (separation_check(a1, a2)) return std::nullopt;
  return context_from_observable(a1 - a2);
}

}  // namespace qlab
