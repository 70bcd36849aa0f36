#ifndef TAYLORLCU_CLI_HPP
#define TAYLORLCU_CLI_HPP

// Command dispatch for the `taylorlcu` tool. Exit codes: 0 success, 2 input
// error, 3 qubit cap exceeded, 4 non-convergence.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "taylorlcu/circuitmodel.hpp"
#include "taylorlcu/densesim.hpp"
#include "taylorlcu/errors.hpp"
#include "taylorlcu/hamiltonian.hpp"
#include "taylorlcu/planner.hpp"
#include "taylorlcu/report.hpp"

namespace taylorlcu {

enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 2,
  kExitCap = 3,
  kExitNonConvergence = 4,
};

/// Environment variable overriding the dense-simulation qubit cap.
inline constexpr const char* kQubitCapEnv = "TAYLORLCU_QUBIT_CAP";

namespace cli_detail {

inline SortedHamiltonian load_hamiltonian(const std::string& path, std::ostream& err) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open Hamiltonian file '" + path + "'");
  std::vector<std::string> warnings;
  auto h = parse_hamiltonian(in, &warnings);
  for (const auto& w : warnings) err << "warning: " << path << ": " << w << '\n';
  return h;
}

inline TruncationVector parse_levels(const std::string& text) {
  std::vector<std::size_t> levels;
  std::string token;
  for (char c : text + ",") {
    if (c == ',' || c == ';' || c == ' ') {
      if (!token.empty()) {
        std::size_t pos = 0;
        unsigned long long v = 0;
        try {
          v = std::stoull(token, &pos);
        } catch (const std::exception&) {
          pos = 0;
        }
        if (pos != token.size() || token.front() == '-')
          throw InputError("invalid truncation level '" + token + "'");
        levels.push_back(static_cast<std::size_t>(v));
        token.clear();
      }
    } else {
      token.push_back(c);
    }
  }
  return TruncationVector(std::move(levels));
}

inline DenseOptions dense_options_from_env() {
  DenseOptions opts;
  if (const char* cap = std::getenv(kQubitCapEnv); cap && *cap) {
    try {
      opts.max_qubits = static_cast<std::size_t>(std::stoul(cap));
    } catch (const std::exception&) {
      throw InputError(std::string(kQubitCapEnv) + " must be a nonnegative integer");
    }
  }
  return opts;
}

inline void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) {
    out << content;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot write '" + path + "'");
  file << content;
}

inline ReportFormat format_or_json(const std::string& path) {
  return path.empty() ? ReportFormat::Json : format_for_path(path);
}

/// Shared --levels / --order / --budget selection.
struct LevelSelection {
  std::string levels;
  std::size_t order = 0;
  std::size_t budget = 0;

  void add_to(CLI::App* cmd) {
    auto* l = cmd->add_option("--levels", levels, "truncation vector, e.g. 3,2,1");
    auto* o = cmd->add_option("--order", order, "full expansion to this order");
    auto* b = cmd->add_option("--budget", budget, "greedy plan of this cost");
    l->excludes(o)->excludes(b);
    o->excludes(b);
  }

  TruncationVector resolve(const std::optional<SortedHamiltonian>& h) const {
    if (!levels.empty()) {
      auto v = parse_levels(levels);
      if (h) validate_levels(*h, v);
      return v;
    }
    if (!h) throw InputError("--order and --budget need --hamiltonian");
    if (budget > 0) return greedy_plan(*h, Budget{budget}).final_levels;
    if (order > 0) return full_order_levels(*h, order);
    throw InputError("one of --levels, --order or --budget is required");
  }
};

}  // namespace cli_detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"Plan and verify by-weight truncated Taylor series LCU simulations"};
  app.require_subcommand(1);

  std::string ham_path;
  std::string out_path;

  // plan
  auto* plan = app.add_subcommand("plan", "greedy truncation plan");
  std::size_t plan_budget = 0;
  double plan_target = 0.0;
  std::size_t cap_factor = PlanOptions{}.cap_factor;
  plan->add_option("--hamiltonian", ham_path, "term-list file")->required();
  auto* pb = plan->add_option("--budget", plan_budget, "stop at this cost");
  auto* pt = plan->add_option("--target-eps", plan_target, "stop once eps <= target");
  pb->excludes(pt);
  plan->add_option("--cap-factor", cap_factor, "cost cap for target plans, in units of L");
  plan->add_option("--out", out_path, "output file (.json or .csv)");

  // bound
  auto* bound = app.add_subcommand("bound", "analytic bound for a truncation vector");
  cli_detail::LevelSelection bound_sel;
  bound->add_option("--hamiltonian", ham_path, "term-list file")->required();
  bound_sel.add_to(bound);
  bound->add_option("--out", out_path, "output file (.json or .csv)");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "dense error measurement");
  cli_detail::LevelSelection sim_sel;
  std::size_t steps = 1;
  simulate->add_option("--hamiltonian", ham_path, "term-list file")->required();
  sim_sel.add_to(simulate);
  simulate->add_option("--steps", steps, "number of time steps r")->check(CLI::PositiveNumber);
  simulate->add_option("--out", out_path, "output file (.json or .csv)");

  // compare
  auto* compare = app.add_subcommand("compare", "full-order vs greedy at equal cost");
  std::size_t n_max = 10;
  bool dense = false;
  compare->add_option("--hamiltonian", ham_path, "term-list file")->required();
  compare->add_option("--n-max", n_max, "largest full order")->check(CLI::PositiveNumber);
  compare->add_flag("--dense", dense, "also measure errors by dense simulation");
  compare->add_option("--out", out_path, "output file (.json or .csv)");

  // resources
  auto* resources = app.add_subcommand("resources", "ancilla and gate-count estimate");
  cli_detail::LevelSelection res_sel;
  resources->add_option("--hamiltonian", ham_path, "term-list file");
  res_sel.add_to(resources);
  resources->add_option("--out", out_path, "output file (.json or .csv)");

  // verify
  auto* verify = app.add_subcommand("verify", "circuit-model identity residuals");
  cli_detail::LevelSelection ver_sel;
  std::optional<double> verify_t;
  std::size_t circuit_cap = CircuitOptions{}.max_qubits;
  verify->add_option("--hamiltonian", ham_path, "term-list file")->required();
  ver_sel.add_to(verify);
  verify->add_option("--t", verify_t, "time step (default t_inf)");
  verify->add_option("--max-qubits", circuit_cap, "ancilla + system qubit cap");
  verify->add_option("--out", out_path, "output file (.json or .csv)");

  // gen-random
  auto* gen_random = app.add_subcommand("gen-random", "resample weights from a normal distribution");
  double mu = 1.0;
  double sigma = 0.1;
  std::uint64_t seed = 0;
  gen_random->add_option("--hamiltonian", ham_path, "template term-list file")->required();
  gen_random->add_option("--mu", mu, "mean");
  gen_random->add_option("--sigma", sigma, "standard deviation");
  gen_random->add_option("--seed", seed, "RNG seed");
  gen_random->add_option("--out", out_path, "output term-list file");

  // gen-logspread
  auto* gen_log = app.add_subcommand("gen-logspread", "synthetic log-spread Hamiltonian");
  std::size_t terms = 32;
  double decades = 3.0;
  std::size_t qubits = 6;
  gen_log->add_option("--terms", terms, "number of terms L")->check(CLI::PositiveNumber);
  gen_log->add_option("--decades", decades, "orders of magnitude spanned by the weights");
  gen_log->add_option("--qubits", qubits, "qubit count")->check(CLI::PositiveNumber);
  gen_log->add_option("--seed", seed, "RNG seed");
  gen_log->add_option("--out", out_path, "output term-list file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    std::optional<SortedHamiltonian> h;
    if (!ham_path.empty()) h = cli_detail::load_hamiltonian(ham_path, err);
    // Generators write term-list files, everything else a CSV or JSON report.
    const bool writes_report = !gen_random->parsed() && !gen_log->parsed();
    const auto format = writes_report ? cli_detail::format_or_json(out_path) : ReportFormat::Json;

    if (plan->parsed()) {
      StopRule stop = Budget{plan_budget};
      if (pt->count() > 0) stop = TargetEpsilon{plan_target};
      else if (pb->count() == 0) throw InputError("plan needs --budget or --target-eps");
      const auto trace = greedy_plan(*h, stop, PlanOptions{cap_factor}, ham_path);
      cli_detail::emit(out_path, serialize_plan(trace, format), out);
    } else if (bound->parsed()) {
      const auto levels = bound_sel.resolve(h);
      const double t_inf = t_infinity(*h);
      const double s = s_value(*h, levels, t_inf);
      const double eps = epsilon_bound(*h, levels);
      const std::optional<double> t_root =
          levels.kappa() > 0 ? std::optional<double>(solve_t_root(*h, levels)) : std::nullopt;
      std::string text;
      if (format == ReportFormat::Csv) {
        text = "levels,kappa,cost,lambda,t_inf,s,epsilon,t_root\n" +
               detail::join_levels(levels.levels()) + ',' + std::to_string(levels.kappa()) + ',' +
               std::to_string(levels.cost()) + ',' + format_real(h->lambda_total()) + ',' +
               format_real(t_inf) + ',' + format_real(s) + ',' + format_real(eps) + ',' +
               detail::csv_optional(t_root) + '\n';
      } else {
        ordered_json j;
        j["hamiltonian"] = ham_path;
        j["levels"] = levels.levels();
        j["kappa"] = levels.kappa();
        j["cost"] = levels.cost();
        j["lambda"] = h->lambda_total();
        j["t_inf"] = t_inf;
        j["s"] = s;
        j["epsilon"] = eps;
        j["t_root"] = detail::json_optional(t_root);
        text = j.dump(2) + '\n';
      }
      cli_detail::emit(out_path, text, out);
    } else if (simulate->parsed()) {
      const auto levels = sim_sel.resolve(h);
      const auto report = multi_step_error(*h, levels, steps, cli_detail::dense_options_from_env());
      cli_detail::emit(out_path, serialize_error_report(report, format), out);
    } else if (compare->parsed()) {
      const auto rows =
          generate_comparison_report(*h, n_max, dense, cli_detail::dense_options_from_env());
      cli_detail::emit(out_path, serialize_report(rows, format), out);
    } else if (resources->parsed()) {
      const auto est = estimate_resources(res_sel.resolve(h));
      cli_detail::emit(out_path, serialize_resources(est, format), out);
    } else if (verify->parsed()) {
      const auto levels = ver_sel.resolve(h);
      const double t = verify_t.value_or(t_infinity(*h));
      const auto res = verify_identities(*h, levels, t, CircuitOptions{circuit_cap});
      cli_detail::emit(out_path, serialize_residuals({{levels, t, res}}, format), out);
    } else if (gen_random->parsed()) {
      std::ostringstream text;
      write_hamiltonian(text, random_hamiltonian(*h, mu, sigma, seed));
      cli_detail::emit(out_path, text.str(), out);
    } else if (gen_log->parsed()) {
      std::ostringstream text;
      write_hamiltonian(text, logspread_hamiltonian(terms, decades, qubits, seed));
      cli_detail::emit(out_path, text.str(), out);
    }
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kExitCap;
  } catch (const NonConvergence& e) {
    err << "error: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}

}  // namespace taylorlcu

#endif  // TAYLORLCU_CLI_HPP
