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
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qlab/qlab.hpp"
#include "qlab/postulate_suite.hpp"

namespace qlab::cli {

using Json = nlohmann::json;

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2 };

inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Flattens a JSON document into "path,value" lines.
inline void flatten_csv(const Json& j, const std::string& prefix, std::ostream& os) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten_csv(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten_csv(j[i], prefix + "." + std::to_string(i), os);
  } else if (j.is_number_float()) {
    os << prefix << "," << num(j.get<double>()) << "\n";
  } else if (j.is_string()) {
    os << prefix << "," << j.get<std::string>() << "\n";
  } else {
    os << prefix << "," << j.dump() << "\n";
  }
}

struct Output {
  std::string format = "json";
  std::string path;
};

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args) {
    CLI::App app{"qlab: observable algebras, physical states and ensemble experiments"};
    app.require_subcommand(1);

    std::string in_path, state_path, observable_path, a_path, b_path;
    std::vector<std::string> element_paths;
    std::uint64_t trials = 0, seed = 0, random_elements = 0, attainment_trials = 10000;
    int cases = 200;
    std::vector<double> angles;
    Output output;
    const auto add_output = [&output](CLI::App* sub, bool out_flag = true) {
      sub->add_option("--format", output.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
      if (out_flag) sub->add_option("--out", output.path, "write the result here instead of stdout");
    };

    auto* spectrum_cmd = app.add_subcommand("spectrum", "spectrum and eigenbasis context of an observable");
    spectrum_cmd->add_option("--in", in_path, "matrix JSON file")->required();
    add_output(spectrum_cmd);

    auto* converge_cmd = app.add_subcommand("converge", "running sample mean against the quantum average");
    converge_cmd->add_option("--state", state_path, "density matrix JSON file")->required();
    converge_cmd->add_option("--observable", observable_path, "observable JSON file")->required();
    converge_cmd->add_option("--trials", trials)->required()->check(CLI::PositiveNumber);
    converge_cmd->add_option("--seed", seed)->required();
    add_output(converge_cmd);

    auto* linearity_cmd = app.add_subcommand("linearity", "additivity of averages over separate contexts");
    linearity_cmd->add_option("--state", state_path)->required();
    linearity_cmd->add_option("--a", a_path)->required();
    linearity_cmd->add_option("--b", b_path)->required();
    linearity_cmd->add_option("--trials", trials)->required()->check(CLI::PositiveNumber);
    linearity_cmd->add_option("--seed", seed)->required();
    add_output(linearity_cmd);

    auto* gns_cmd = app.add_subcommand("gns-check", "GNS construction certificate for a state");
    gns_cmd->add_option("--state", state_path)->required();
    gns_cmd->add_option("--element", element_paths, "element JSON file (repeatable)");
    auto* random_opt = gns_cmd->add_option("--random", random_elements, "number of random elements");
    auto* gns_seed = gns_cmd->add_option("--seed", seed);
    random_opt->needs(gns_seed);
    add_output(gns_cmd);

    auto* chsh_cmd = app.add_subcommand("chsh", "event-by-event CHSH experiment on the singlet");
    chsh_cmd->add_option("--angles", angles, "theta_a,theta_a',theta_b,theta_b' in radians")
        ->required()
        ->delimiter(',')
        ->expected(4);
    chsh_cmd->add_option("--trials", trials)->required()->check(CLI::PositiveNumber);
    chsh_cmd->add_option("--seed", seed)->required();
    chsh_cmd->add_option("--out", output.path, "CSV file of per-setting correlations");
    add_output(chsh_cmd, false);

    auto* ks_cmd = app.add_subcommand("ks", "Mermin-Peres square: brute force and contextual run");
    ks_cmd->add_option("--trials", trials)->required()->check(CLI::PositiveNumber);
    ks_cmd->add_option("--seed", seed)->required();
    add_output(ks_cmd);

    auto* postulates_cmd = app.add_subcommand("postulates", "randomized invariant suite");
    postulates_cmd->add_option("--seed", seed)->required();
    postulates_cmd->add_option("--cases", cases)->check(CLI::PositiveNumber);
    postulates_cmd->add_option("--attainment-trials", attainment_trials)->check(CLI::PositiveNumber);
    add_output(postulates_cmd);

    std::vector<std::string> argv_storage{"qlab"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_storage) argv.push_back(s.data());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out_ << app.help();
      return kOk;
    } catch (const CLI::CallForAllHelp&) {
      out_ << app.help("", CLI::AppFormatMode::All);
      return kOk;
    } catch (const CLI::ParseError& e) {
      err_ << "qlab: " << e.what() << "\n";
      return kUsage;
    }

    try {
      if (spectrum_cmd->parsed()) return run_spectrum(in_path, output);
      if (converge_cmd->parsed()) return run_converge(state_path, observable_path, trials, seed, output);
      if (linearity_cmd->parsed()) return run_linearity(state_path, a_path, b_path, trials, seed, output);
      if (gns_cmd->parsed()) return run_gns(state_path, element_paths, random_elements, seed, output);
      if (chsh_cmd->parsed()) return run_chsh(angles, trials, seed, output);
      if (ks_cmd->parsed()) return run_ks(trials, seed, output);
      if (postulates_cmd->parsed()) return run_postulates(seed, cases, attainment_trials, output);
    } catch (const Error& e) {
      err_ << "qlab: " << e.what() << "\n";
      return kUsage;
    } catch (const std::ios_base::failure& e) {
      err_ << "qlab: " << e.what() << "\n";
      return kUsage;
    }
    return kUsage;
  }

 private:
  // Writes text to the output path or stdout; throws ParseError on IO failure.
  void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
      out_ << text;
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParseError("cannot write '" + path + "'");
    f << text;
    if (!f) throw ParseError("write to '" + path + "' failed");
  }

  void emit_json(const Json& j, const Output& output) {
    if (output.format == "csv") {
      std::ostringstream os;
      os << "key,value\n";
      flatten_csv(j, "", os);
      emit(os.str(), output.path);
    } else {
      emit(j.dump(2) + "\n", output.path);
    }
  }

  int run_spectrum(const std::string& path, const Output& output) {
    const AlgebraElement a = io::read_element_file(path);
    const Spectrum spec = spectrum(a);
    if (output.format == "csv") {
      std::ostringstream os;
      os << "value,multiplicity\n";
      for (std::size_t i = 0; i < spec.values.size(); ++i) os << num(spec.values[i]) << "," << spec.multiplicities[i] << "\n";
      emit(os.str(), output.path);
    } else {
      Json j{{"dim", a.dim()},
             {"values", spec.values},
             {"multiplicities", spec.multiplicities},
             {"context", io::context_to_json(context_from_observable(a))}};
      emit_json(j, output);
    }
    return kOk;
  }

  static std::vector<std::uint64_t> checkpoints(std::uint64_t trials) {
    std::vector<std::uint64_t> marks;
    for (std::uint64_t decade = 1; decade <= trials; decade *= 10) {
      for (std::uint64_t m : {1, 2, 5}) {
        if (m * decade <= trials) marks.push_back(m * decade);
      }
      if (decade > trials / 10) break;
    }
    if (marks.empty() || marks.back() != trials) marks.push_back(trials);
    return marks;
  }

  int run_converge(const std::string& state_path, const std::string& observable_path, std::uint64_t trials,
                   std::uint64_t seed, const Output& output) {
    const QuantumState rho = io::read_state_file(state_path);
    const AlgebraElement a = io::read_element_file(observable_path);
    const double exact = quantum_average(rho, a);
    const double s = outcome_distribution(rho, a).standard_deviation();
    const SampleStats stats = sample_mean(rho, a, trials, seed, checkpoints(trials));

    bool final_ok = false;
    Json rows = Json::array();
    std::ostringstream csv;
    csv << "n,running_mean,exact_mean,abs_error,bound\n";
    for (const auto& cp : stats.history) {
      const double error = std::abs(cp.running_mean - exact);
      const double bound = 5.0 * s / std::sqrt(static_cast<double>(cp.n));
      csv << cp.n << "," << num(cp.running_mean) << "," << num(exact) << "," << num(error) << "," << num(bound) << "\n";
      rows.push_back({{"n", cp.n}, {"running_mean", cp.running_mean}, {"exact_mean", exact},
                      {"abs_error", error}, {"bound", bound}});
      if (cp.n == trials) final_ok = error <= std::max(bound, 1e-12);
    }
    if (output.format == "csv") {
      emit(csv.str(), output.path);
    } else {
      emit(Json{{"trials", trials}, {"seed", seed}, {"exact_mean", exact}, {"outcome_std", s},
                {"sample_variance", stats.variance()}, {"rows", rows}, {"pass", final_ok}}
                   .dump(2) + "\n",
           output.path);
    }
    return final_ok ? kOk : kCheckFailed;
  }

  int run_linearity(const std::string& state_path, const std::string& a_path, const std::string& b_path,
                    std::uint64_t trials, std::uint64_t seed, const Output& output) {
    const QuantumState rho = io::read_state_file(state_path);
    const AlgebraElement a = io::read_element_file(a_path);
    const AlgebraElement b = io::read_element_file(b_path);
    const LinearityReport rep = linearity_check(rho, a, b, trials, seed);
    Json j{{"trials", trials},
           {"seed", seed},
           {"commutator_norm", commutator_norm(a, b)},
           {"exact", {{"a", rep.exact_a}, {"b", rep.exact_b}, {"sum", rep.exact_sum}, {"residual", rep.exact_residual}, {"pass", rep.exact_ok}}},
           {"sampled", {{"a", rep.sampled_a.mean}, {"b", rep.sampled_b.mean}, {"sum", rep.sampled_sum.mean},
                        {"residual", rep.sampled_residual}, {"sigma_combined", rep.sigma_combined}, {"pass", rep.sampled_ok}}},
           {"pass", rep.passed()}};
    emit_json(j, output);
    return rep.passed() ? kOk : kCheckFailed;
  }

  int run_gns(const std::string& state_path, const std::vector<std::string>& element_paths,
              std::uint64_t random_elements, std::uint64_t seed, const Output& output) {
    const QuantumState rho = io::read_state_file(state_path);
    const int d = rho.dim();
    std::vector<AlgebraElement> elements;
    for (const auto& p : element_paths) {
      AlgebraElement e = io::read_element_file(p);
      if (e.dim() != d) throw DimensionError("element '" + p + "' does not match the state dimension");
      elements.push_back(std::move(e));
    }
    random::Engine rng(seed);
    for (std::uint64_t i = 0; i < random_elements; ++i) elements.push_back(random::element(d, rng));
    if (elements.empty()) {
      elements.push_back(AlgebraElement::identity(d));
      for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
          Matrix unit = Matrix::Zero(d, d);
          unit(i, k) = 1.0;
          elements.emplace_back(unit);
        }
    }
    const GnsRepresentation g = gns_construct(rho);
    const GnsReport rep = verify_gns(g, rho, elements);
    Json checks = Json::array();
    for (const auto& c : rep.checks) checks.push_back({{"name", c.name}, {"max_residual", c.max_residual}, {"pass", c.pass}});
    emit_json(Json{{"carrier_dim", rep.carrier_dim}, {"expected_carrier_dim", rep.expected_carrier_dim},
                   {"elements", elements.size()}, {"checks", checks}, {"pass", rep.passed()}},
              output);
    return rep.passed() ? kOk : kCheckFailed;
  }

  int run_chsh(const std::vector<double>& angles, std::uint64_t trials, std::uint64_t seed, const Output& output) {
    ChshConfig cfg;
    std::copy(angles.begin(), angles.end(), cfg.angles.begin());
    cfg.trials = trials;
    cfg.master_seed = seed;
    const QuantumState state = singlet();
    const ChshReport rep = chsh_run(cfg, state);
    const NoSignalingReport ns = no_signaling_check(cfg, state, rep);
    const double classical = classical_bound_bruteforce().max_abs_s;
    const bool agrees = std::abs(rep.s_sampled - rep.s_exact) <= std::max(5.0 * rep.s_standard_error, 1e-12);

    static const char* kNames[4] = {"a,b", "a,b'", "a',b", "a',b'"};
    Json correlations = Json::array();
    std::ostringstream csv;
    csv << "setting,theta_a,theta_b,sampled,standard_error,exact,closed_form,trials\n";
    for (std::size_t s = 0; s < 4; ++s) {
      const auto& st = rep.settings[s];
      csv << "\"" << kNames[s] << "\"," << num(st.theta_a) << "," << num(st.theta_b) << "," << num(st.sampled) << ","
          << num(st.standard_error) << "," << num(st.exact) << "," << num(st.closed_form) << "," << st.trials << "\n";
      correlations.push_back({{"setting", kNames[s]}, {"theta_a", st.theta_a}, {"theta_b", st.theta_b},
                              {"sampled", st.sampled}, {"standard_error", st.standard_error}, {"exact", st.exact}});
    }
    Json summary{{"angles", angles},
                 {"trials", trials},
                 {"seed", seed},
                 {"S", rep.s_sampled},
                 {"S_abs", std::abs(rep.s_sampled)},
                 {"S_exact", rep.s_exact},
                 {"S_closed_form", rep.s_closed_form},
                 {"standard_error", rep.s_standard_error},
                 {"classical_bound", classical},
                 {"excess_over_classical_sigma",
                  rep.s_standard_error > 0.0 ? (std::abs(rep.s_sampled) - classical) / rep.s_standard_error : 0.0},
                 {"no_signaling_exact_residual", ns.exact_residual},
                 {"no_signaling_max_z", ns.sampled_max_z},
                 {"correlations", correlations},
                 {"pass", agrees && ns.passed()}};
    if (!output.path.empty()) emit(csv.str(), output.path);
    if (output.format == "csv" && output.path.empty()) {
      emit(csv.str(), "");
    } else {
      emit_json(summary, Output{output.format, ""});
    }
    return agrees && ns.passed() ? kOk : kCheckFailed;
  }

  int run_ks(std::uint64_t trials, std::uint64_t seed, const Output& output) {
    const MagicSquareStructure structure = verify_magic_square(magic_square());
    const int count = mermin_peres_bruteforce();
    const ContextualRunReport run = mermin_peres_contextual_run(trials, seed);
    const bool ok = structure.passed() && count == 0 && run.constraint_violations == 0 && run.witness_trials > 0;
    emit_json(Json{{"trials", trials},
                   {"seed", seed},
                   {"bruteforce_count", count},
                   {"bruteforce_assignments", 512},
                   {"contextual_violations", run.constraint_violations},
                   {"multivaluedness_witness_rate", run.witness_rate()},
                   {"structure", {{"square_residual", structure.square_residual},
                                  {"commutation_residual", structure.commutation_residual},
                                  {"product_residual", structure.product_residual}}},
                   {"pass", ok}},
              output);
    return ok ? kOk : kCheckFailed;
  }

  int run_postulates(std::uint64_t seed, int cases, std::uint64_t attainment_trials, const Output& output) {
    PostulateSuiteConfig cfg;
    cfg.seed = seed;
    cfg.cases = cases;
    cfg.attainment_trials = attainment_trials;
    const PostulateSuiteReport rep = run_postulate_suite(cfg);
    Json checks = Json::array();
    for (const auto& c : rep.checks)
      checks.push_back({{"name", c.name}, {"max_residual", c.max_residual}, {"tolerance", c.tolerance},
                        {"evaluated", c.evaluated}, {"failures", c.failures}, {"pass", c.pass()}});
    err_ << "postulates: seed " << seed << "\n";
    emit_json(Json{{"seed", seed}, {"cases", cases}, {"checks", checks}, {"pass", rep.passed()}}, output);
    return rep.passed() ? kOk : kCheckFailed;
  }

  std::ostream& out_;
  std::ostream& err_;
};

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return Runner(out, err).run(args);
}

}  // namespace qlab::cli
