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
#include <string>
#include <vector>

#include "qlab/algebra.hpp"
#include "qlab/context.hpp"
#include "qlab/ensemble.hpp"
#include "qlab/gns.hpp"
#include "qlab/physical_state.hpp"
#include "qlab/random.hpp"
#include "qlab/rng.hpp"

namespace qlab {

struct SuiteCheck {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::uint64_t evaluated = 0;
  std::uint64_t failures = 0;
  bool pass() const { return failures == 0; }

  void record(double residual) {
    ++evaluated;
    max_residual = std::max(max_residual, residual);
    if (!(residual <= tolerance)) ++failures;
  }
  void record(bool ok) {
    ++evaluated;
    if (!ok) ++failures;
  }
};

struct PostulateSuiteConfig {
  std::uint64_t seed = 0;
  int cases = 200;
  std::vector<int> dims{2, 3, 4, 8};
  std::uint64_t attainment_trials = 10000;
};

struct PostulateSuiteReport {
  std::uint64_t seed = 0;
  int cases = 0;
  std::vector<SuiteCheck> checks;
  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const SuiteCheck& c) { return c.pass(); });
  }
};

/// Randomized invariant suite over the algebra axioms, compatibility,
/// characters, separation, linearity and the C* norm.
///
/// Case c uses dimension dims[c % dims.size()] and its own seed stream
/// derive_seed(seed, c). Each case draws a random context with two random
/// observables diagonal in it, a random general element, a random
/// noncommuting observable and a full-rank state.
inline PostulateSuiteReport run_postulate_suite(const PostulateSuiteConfig& cfg) {
  SuiteCheck square_root{"p1_square_root_residual", 0, 1e-9};
  SuiteCheck faithful{"p1_faithfulness", 0, 0};
  SuiteCheck commuting{"p2_pair_compatible", 0, 0};
  SuiteCheck maximal{"p2_context_maximality", 0, 0};
  SuiteCheck multiplicative{"p3_character_multiplicative", 0, 1e-9};
  SuiteCheck additive{"p3_character_additive", 0, 1e-9};
  SuiteCheck zero{"prop1_phi_zero", 0, 1e-12};
  SuiteCheck unit{"prop2_phi_identity", 0, 1e-12};
  SuiteCheck square_positive{"prop3_phi_square_nonnegative", 0, 0};
  SuiteCheck membership{"prop4_spectrum_membership", 0, 1e-8};
  SuiteCheck attainment{"prop5_spectrum_attainment", 0, 0};
  SuiteCheck separation{"p4_separation", 0, 0};
  SuiteCheck linear{"p5_exact_linearity", 0, 1e-10};
  SuiteCheck cstar{"cstar_identity_relative", 0, 1e-9};
  SuiteCheck star_norm{"cstar_adjoint_norm_relative", 0, 1e-9};

  for (int c = 0; c < cfg.cases; ++c) {
    const int d = cfg.dims[static_cast<std::size_t>(c) % cfg.dims.size()];
    const std::uint64_t case_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(c));
    random::Engine rng(case_seed);

    const AlgebraElement r = random::element(d, rng);
    const Postulate1Report p1 = verify_postulate1(r, 1e-9 * (1.0 + operator_norm(r) * operator_norm(r)));
    square_root.record(p1.root_residual / (1.0 + p1.rstar_r_norm));
    faithful.record(p1.faithful_ok);

    const Context ctx(random::unitary(d, rng));
    const AlgebraElement a = random::diagonal_in(ctx.basis(), rng);
    const AlgebraElement b = random::diagonal_in(ctx.basis(), rng);
    const AlgebraElement h = random::hermitian(d, rng);
    commuting.record(compatible(a, b) && contains(ctx, a) && contains(ctx, b));
    maximal.record(!contains(ctx, h) && !compatible(a, h));

    const QuantumState rho = random::full_rank_density(d, rng);
    PhysicalState phi(rho, case_seed);
    const double fa = phi.evaluate(ctx, a);
    const double fb = phi.evaluate(ctx, b);
    multiplicative.record(std::abs(phi.evaluate(ctx, a * b) - fa * fb));
    additive.record(std::abs(phi.evaluate(ctx, a + b) - fa - fb));

    const CharacterReport props = verify_character_properties(phi, ctx, a);
    zero.record(std::abs(props.value_of_zero));
    unit.record(std::abs(props.value_of_identity - 1.0));
    square_positive.record(props.square_ok);
    const Spectrum spec = spectrum(a);
    double distance = INFINITY;
    for (double v : spec.values) distance = std::min(distance, std::abs(v - props.value));
    membership.record(distance);

    const auto counts = spectrum_attainment(rho, a, cfg.attainment_trials, derive_seed(case_seed, 1));
    attainment.record(std::all_of(counts.begin(), counts.end(), [](std::uint64_t n) { return n > 0; }));

    const auto witness = separating_context(a, h);
    separation.record(separation_check(a, a) && !separation_check(a, h) && witness.has_value());

    linear.record(std::abs(quantum_average(rho, a + h) - quantum_average(rho, a) - quantum_average(rho, h)));

    const double norm = cstar_norm(r);
    cstar.record(std::abs(cstar_norm(adjoint(r) * r) - norm * norm) / (norm * norm));
    star_norm.record(std::abs(cstar_norm(adjoint(r)) - norm) / norm);
  }

  PostulateSuiteReport rep;
  rep.seed = cfg.seed;
  rep.cases = cfg.cases;
  rep.checks = {square_root, faithful, commuting, maximal, multiplicative, additive, zero, unit,
                square_positive, membership, attainment, separation, linear, cstar, star_norm};
  return rep;
}

}  // namespace qlab
