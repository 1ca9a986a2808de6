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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include <Eigen/SVD>

#include "qlab/gns.hpp"
#include "qlab/postulate_suite.hpp"
#include "qlab/qlab.hpp"
#include "qlab/random.hpp"

#ifndef QLAB_CLI_PATH
#error "QLAB_CLI_PATH must point at the qlab executable"
#endif

namespace {

using namespace qlab;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Outcome postulate_suite() {
  const auto start = Clock::now();
  PostulateSuiteConfig cfg;
  cfg.seed = 20240601;
  const PostulateSuiteReport rep = run_postulate_suite(cfg);
  const double elapsed = seconds_since(start);
  std::string failed;
  double homomorphism = 0.0;
  for (const auto& c : rep.checks) {
    if (!c.pass()) failed += " " + c.name;
    if (c.name.rfind("p3_character", 0) == 0) homomorphism = std::max(homomorphism, c.max_residual);
  }
  const bool ok = rep.passed() && rep.cases == 200 && homomorphism <= 1e-9 && elapsed < 60.0;
  return {ok, std::to_string(rep.cases) + " cases, " + std::to_string(rep.checks.size()) +
                  " checks, max character residual " + fmt("%.2e", homomorphism) + ", " +
                  fmt("%.1f", elapsed) + " s" + (failed.empty() ? "" : ", failed:" + failed)};
}

Outcome convergence() {
  const auto start = Clock::now();
  const std::uint64_t n = 100000;
  const int cases = 10, reps = 50;
  random::Engine rng(7001);
  int worst = 0, total_outside = 0;
  for (int c = 0; c < cases; ++c) {
    const int d = 2 + c % 4;
    const QuantumState rho = c % 3 == 0 ? random::density(d, 1, rng) : random::full_rank_density(d, rng);
    const AlgebraElement a = random::hermitian(d, rng);
    const double exact = quantum_average(rho, a);
    const double s = outcome_distribution(rho, a).standard_deviation();
    const double band = 5.0 * s / std::sqrt(static_cast<double>(n));
    int outside = 0;
    for (int r = 0; r < reps; ++r) {
      const SampleStats stats = sample_mean(rho, a, n, derive_seed(derive_seed(7001, c), r));
      if (std::abs(stats.mean - exact) > std::max(band, 1e-12)) ++outside;
    }
    worst = std::max(worst, outside);
    total_outside += outside;
  }
  const double elapsed = seconds_since(start);
  return {worst <= 2 && elapsed < 120.0,
          std::to_string(cases) + " cases x " + std::to_string(reps) + " repetitions at n=1e5, worst case " +
              std::to_string(worst) + "/" + std::to_string(reps) + " outside 5s/sqrt(n) (total " +
              std::to_string(total_outside) + "), " + fmt("%.1f", elapsed) + " s"};
}

Outcome linearity() {
  random::Engine rng(7003);
  double exact_worst = 0.0, worst_ratio = 0.0;
  bool ok = true;
  for (int c = 0; c < 10; ++c) {
    const int d = 2 + c % 4;
    const QuantumState rho = random::full_rank_density(d, rng);
    const AlgebraElement a = random::hermitian(d, rng);
    const AlgebraElement b = random::hermitian(d, rng);
    if (compatible(a, b)) ok = false;
    const LinearityReport rep = linearity_check(rho, a, b, 20000, derive_seed(7003, c));
    exact_worst = std::max(exact_worst, rep.exact_residual);
    worst_ratio = std::max(worst_ratio, rep.sampled_residual / rep.sigma_combined);
    ok = ok && rep.passed();
  }
  return {ok && exact_worst <= 1e-10, "10 noncommuting cases, exact residual " + fmt("%.2e", exact_worst) +
                                          ", worst sampled residual " + fmt("%.2f", worst_ratio) + " sigma"};
}

Outcome cstar_gns() {
  random::Engine rng(7005);
  double cstar_worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const AlgebraElement r = random::element(1 + i % 8, rng);
    const double norm = cstar_norm(r);
    const double svd = Eigen::JacobiSVD<Matrix>(r.matrix()).singularValues()(0);
    cstar_worst = std::max(cstar_worst, std::abs(cstar_norm(adjoint(r) * r) - norm * norm) / (norm * norm));
    cstar_worst = std::max(cstar_worst, std::abs(norm - svd) / svd);
  }
  bool ok = cstar_worst <= 1e-9;
  double gns_worst = 0.0;
  int runs = 0;
  for (int d : {2, 3, 4}) {
    for (int rank = 1; rank <= d; ++rank) {
      const QuantumState rho = random::density(d, rank, rng);
      std::vector<AlgebraElement> elements;
      for (int k = 0; k < 20; ++k) elements.push_back(random::element(d, rng));
      const GnsReport rep = verify_gns(gns_construct(rho), rho, elements);
      for (const char* name : {"homomorphism", "star_preservation", "state_reproduction", "cyclicity"}) {
        const GnsCheck* c = rep.find(name);
        ok = ok && c && c->pass && c->max_residual <= 1e-8;
        if (c) gns_worst = std::max(gns_worst, c->max_residual);
      }
      ok = ok && rep.passed() && rep.carrier_dim == d * rank;
      ++runs;
    }
  }
  return {ok, "C* identity worst relative " + fmt("%.2e", cstar_worst) + " over 100 elements; " +
                  std::to_string(runs) + " GNS constructions, worst certificate residual " +
                  fmt("%.2e", gns_worst) + ", carrier dims d*rank"};
}

Outcome chsh() {
  using std::numbers::pi;
  const auto start = Clock::now();
  const ChshConfig cfg{{0.0, pi / 2, pi / 4, 3 * pi / 4}, 1000000, 20240601};
  const double tsirelson = 2.0 * std::numbers::sqrt2;
  const ChshReport rep = chsh_run(cfg);
  const NoSignalingReport ns = no_signaling_check(cfg, singlet(), rep);
  const double classical = classical_bound_bruteforce().max_abs_s;

  // Third route to the exact value: <psi| A x B |psi> on the state vector.
  Vector psi = Vector::Zero(4);
  psi(1) = 1.0 / std::sqrt(2.0);
  psi(2) = -1.0 / std::sqrt(2.0);
  double s_vector = 0.0;
  for (std::size_t s = 0; s < 4; ++s) {
    const auto& st = rep.settings[s];
    const Matrix m = kron(spin(st.theta_a).matrix(), spin(st.theta_b).matrix());
    s_vector += kChshSigns[s] * psi.dot(m * psi).real();
  }

  const double exact_err = std::max({std::abs(std::abs(rep.s_exact) - tsirelson),
                                     std::abs(std::abs(rep.s_closed_form) - tsirelson),
                                     std::abs(std::abs(s_vector) - tsirelson)});
  const double sampled_err = std::abs(std::abs(rep.s_sampled) - tsirelson);
  const double excess = (std::abs(rep.s_sampled) - classical) / rep.s_standard_error;
  const double elapsed = seconds_since(start);
  const bool ok = exact_err <= 1e-10 && sampled_err <= 0.02 && classical == 2.0 && excess >= 10.0 &&
                  ns.exact_residual <= 1e-10 && elapsed < 300.0;
  return {ok, "S=" + fmt("%.5f", rep.s_sampled) + " (exact " + fmt("%.12f", rep.s_exact) + "), |S| off 2sqrt2 by " +
                  fmt("%.4f", sampled_err) + ", " + fmt("%.1f", excess) + " SE above classical bound " +
                  fmt("%.0f", classical) + ", no-signaling residual " + fmt("%.1e", ns.exact_residual) + ", " +
                  fmt("%.1f", elapsed) + " s"};
}

Outcome kochen_specker() {
  const int count = mermin_peres_bruteforce();
  const MagicSquareStructure st = verify_magic_square(magic_square());
  const ContextualRunReport run = mermin_peres_contextual_run(1000, 20240601);
  const bool ok = count == 0 && st.passed(1e-10) && run.trials == 1000 && run.constraint_violations == 0 &&
                  run.witness_trials > 0;
  return {ok, std::to_string(count) + "/512 global assignments, " + std::to_string(run.constraint_violations) +
                  " line violations over 1000 trials, witness rate " + fmt("%.3f", run.witness_rate()) +
                  ", structure residual " +
                  fmt("%.1e", std::max({st.square_residual, st.commutation_residual, st.product_residual}))};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string temp_path(const std::string& name) {
  const char* dir = std::getenv("TMPDIR");
  return std::string(dir && *dir ? dir : "/tmp") + "/qlab_acceptance_" + name;
}

Outcome determinism() {
  const std::string cli = QLAB_CLI_PATH;
  const std::string state = temp_path("state.json");
  const std::string obs_a = temp_path("a.json");
  const std::string obs_b = temp_path("b.json");
  std::ofstream(state) << R"({"dim":2,"re":[[0.7,0.1],[0.1,0.3]],"im":[[0,-0.2],[0.2,0]]})";
  std::ofstream(obs_a) << R"({"dim":2,"re":[[0,1],[1,0]]})";
  std::ofstream(obs_b) << R"({"dim":2,"re":[[1,0],[0,-1]]})";

  const std::vector<std::pair<std::string, std::string>> commands{
      {"converge", "converge --state " + state + " --observable " + obs_a + " --trials 20000 --seed 11 --format csv"},
      {"linearity", "linearity --state " + state + " --a " + obs_a + " --b " + obs_b + " --trials 20000 --seed 12"},
      {"gns-check", "gns-check --state " + state + " --random 10 --seed 13"},
      {"chsh", "chsh --angles 0,1.5707963267948966,0.78539816339744828,2.3561944901923448 --trials 20000 --seed 14"},
      {"ks", "ks --trials 1000 --seed 15"},
      {"postulates", "postulates --seed 16 --cases 20 --attainment-trials 1000"},
  };
  std::string mismatched;
  int compared = 0;
  for (const auto& [name, args] : commands) {
    std::string outputs[2];
    for (int run = 0; run < 2; ++run) {
      const std::string stdout_path = temp_path(name + std::to_string(run) + ".out");
      const std::string extra = name == "chsh" ? " --out " + temp_path("chsh" + std::to_string(run) + ".csv") : "";
      const std::string command = "\"" + cli + "\" " + args + extra + " > " + stdout_path + " 2>/dev/null";
      const int status = std::system(command.c_str());
      outputs[run] = "status " + std::to_string(status) + "\n" + read_file(stdout_path);
      if (name == "chsh") outputs[run] += read_file(temp_path("chsh" + std::to_string(run) + ".csv"));
      std::remove(stdout_path.c_str());
    }
    if (name == "chsh")
      for (int run = 0; run < 2; ++run) std::remove(temp_path("chsh" + std::to_string(run) + ".csv").c_str());
    if (outputs[0] != outputs[1] || outputs[0].size() < 20) mismatched += " " + name;
    ++compared;
  }
  std::remove(state.c_str());
  std::remove(obs_a.c_str());
  std::remove(obs_b.c_str());
  return {mismatched.empty(), std::to_string(compared) + " subcommands run twice through the CLI" +
                                  (mismatched.empty() ? ", all byte-identical" : ", differing:" + mismatched)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 postulate suite", postulate_suite},
      {"2 ensemble convergence", convergence},
      {"3 linearity", linearity},
      {"4 C* norm and GNS", cstar_gns},
      {"5 CHSH", chsh},
      {"6 Kochen-Specker", kochen_specker},
      {"7 determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome outcome{false, ""};
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failures;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << "  criterion " << name << ": " << outcome.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
