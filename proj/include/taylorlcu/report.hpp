#ifndef TAYLORLCU_REPORT_HPP
#define TAYLORLCU_REPORT_HPP

// Equal-cost comparison of full-order and greedy truncations, plus the CSV
// and JSON encodings of every report the command line tool writes.

#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "taylorlcu/circuitmodel.hpp"
#include "taylorlcu/densesim.hpp"
#include "taylorlcu/errors.hpp"
#include "taylorlcu/hamiltonian.hpp"
#include "taylorlcu/planner.hpp"

namespace taylorlcu {

using ordered_json = nlohmann::ordered_json;

enum class ReportFormat { Csv, Json };

/// Picks the format from a file extension (".csv" or ".json").
inline ReportFormat format_for_path(std::string_view path) {
  auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() && path.substr(path.size() - suffix.size()) == suffix;
  };
  if (ends_with(".csv")) return ReportFormat::Csv;
  if (ends_with(".json")) return ReportFormat::Json;
  throw InputError("cannot infer report format from '" + std::string(path) +
                   "' (use .csv or .json)");
}

struct ComparisonRow {
  std::size_t n = 0;
  std::size_t cost = 0;
  double eps_full = 0.0;
  double eps_greedy = 0.0;
  double bound_ratio = 0.0;
  std::optional<double> delta_full;
  std::optional<double> delta_greedy;
  std::optional<double> delta_ratio;
  /// (nL - smallest greedy cost reaching eps_full) / L
  std::optional<double> cost_saving_in_orders;

  friend bool operator==(const ComparisonRow&, const ComparisonRow&) = default;
};

/// One row per n = 1..n_max comparing U_n against the greedy vector of the
/// same cost nL. The greedy plan is built once to cost n_max L.
inline std::vector<ComparisonRow> generate_comparison_report(const SortedHamiltonian& h,
                                                             std::size_t n_max, bool with_dense,
                                                             const DenseOptions& dense = {}) {
  if (n_max == 0) throw InputError("n_max must be at least 1");
  if (with_dense) check_qubit_cap(h.qubit_count(), dense);
  const std::size_t terms = h.size();
  const PlanTrace trace = greedy_plan(h, Budget{n_max * terms});

  std::vector<ComparisonRow> rows;
  for (std::size_t n = 1; n <= n_max; ++n) {
    ComparisonRow row;
    row.n = n;
    row.cost = n * terms;
    const TruncationVector full = full_order_levels(h, n);
    row.eps_full = epsilon_bound(h, full);
    row.eps_greedy = trace.epsilon_at(row.cost);
    row.bound_ratio = row.eps_full / row.eps_greedy;
    for (std::size_t c = 0; c <= trace.steps.size(); ++c) {
      if (trace.epsilon_at(c) <= row.eps_full) {
        row.cost_saving_in_orders =
            (static_cast<double>(row.cost) - static_cast<double>(c)) / static_cast<double>(terms);
        break;
      }
    }
    if (with_dense) {
      row.delta_full = single_step_error(h, full, dense).delta;
      row.delta_greedy = single_step_error(h, trace.levels_at(row.cost), dense).delta;
      row.delta_ratio = *row.delta_full / *row.delta_greedy;
    }
    rows.push_back(row);
  }
  return rows;
}

namespace detail {

inline std::string csv_number(double value) {
  return std::isfinite(value) ? format_real(value) : std::string();
}

inline std::string csv_optional(const std::optional<double>& value) {
  return value ? csv_number(*value) : std::string();
}

inline ordered_json json_number(double value) {
  return std::isfinite(value) ? ordered_json(value) : ordered_json(nullptr);
}

inline ordered_json json_optional(const std::optional<double>& value) {
  return value ? json_number(*value) : ordered_json(nullptr);
}

inline std::string join_levels(const std::vector<std::size_t>& levels) {
  std::string out;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(levels[i]);
  }
  return out;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

inline std::optional<double> parse_optional(const std::string& text) {
  if (text.empty()) return std::nullopt;
  return parse_real(text);
}

inline std::optional<double> optional_from_json(const ordered_json& value) {
  if (value.is_null()) return std::nullopt;
  return value.get<double>();
}

}  // namespace detail

inline constexpr std::string_view kComparisonHeader =
    "n,cost,eps_full,eps_greedy,bound_ratio,delta_full,delta_greedy,delta_ratio,"
    "cost_saving_in_orders";

inline std::string serialize_report(const std::vector<ComparisonRow>& rows, ReportFormat format) {
  if (format == ReportFormat::Csv) {
    std::string out(kComparisonHeader);
    out += '\n';
    for (const auto& row : rows) {
      out += std::to_string(row.n) + ',' + std::to_string(row.cost) + ',' +
             detail::csv_number(row.eps_full) + ',' + detail::csv_number(row.eps_greedy) + ',' +
             detail::csv_number(row.bound_ratio) + ',' + detail::csv_optional(row.delta_full) + ',' +
             detail::csv_optional(row.delta_greedy) + ',' + detail::csv_optional(row.delta_ratio) +
             ',' + detail::csv_optional(row.cost_saving_in_orders) + '\n';
    }
    return out;
  }
  ordered_json arr = ordered_json::array();
  for (const auto& row : rows) {
    ordered_json j;
    j["n"] = row.n;
    j["cost"] = row.cost;
    j["eps_full"] = detail::json_number(row.eps_full);
    j["eps_greedy"] = detail::json_number(row.eps_greedy);
    j["bound_ratio"] = detail::json_number(row.bound_ratio);
    j["delta_full"] = detail::json_optional(row.delta_full);
    j["delta_greedy"] = detail::json_optional(row.delta_greedy);
    j["delta_ratio"] = detail::json_optional(row.delta_ratio);
    j["cost_saving_in_orders"] = detail::json_optional(row.cost_saving_in_orders);
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + '\n';
}

inline std::vector<ComparisonRow> parse_comparison_report(std::string_view text, ReportFormat format) {
  std::vector<ComparisonRow> rows;
  if (format == ReportFormat::Csv) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != kComparisonHeader)
      throw InputError("comparison CSV header mismatch");
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto f = detail::split_csv_line(line);
      if (f.size() != 9) throw InputError("comparison CSV row must have 9 fields");
      ComparisonRow row;
      row.n = std::stoull(f[0]);
      row.cost = std::stoull(f[1]);
      row.eps_full = detail::parse_optional(f[2]).value_or(NAN);
      row.eps_greedy = detail::parse_optional(f[3]).value_or(NAN);
      row.bound_ratio = detail::parse_optional(f[4]).value_or(NAN);
      row.delta_full = detail::parse_optional(f[5]);
      row.delta_greedy = detail::parse_optional(f[6]);
      row.delta_ratio = detail::parse_optional(f[7]);
      row.cost_saving_in_orders = detail::parse_optional(f[8]);
      rows.push_back(row);
    }
    return rows;
  }
  const auto arr = ordered_json::parse(text);
  for (const auto& j : arr) {
    ComparisonRow row;
    row.n = j.at("n").get<std::size_t>();
    row.cost = j.at("cost").get<std::size_t>();
    row.eps_full = detail::optional_from_json(j.at("eps_full")).value_or(NAN);
    row.eps_greedy = detail::optional_from_json(j.at("eps_greedy")).value_or(NAN);
    row.bound_ratio = detail::optional_from_json(j.at("bound_ratio")).value_or(NAN);
    row.delta_full = detail::optional_from_json(j.at("delta_full"));
    row.delta_greedy = detail::optional_from_json(j.at("delta_greedy"));
    row.delta_ratio = detail::optional_from_json(j.at("delta_ratio"));
    row.cost_saving_in_orders = detail::optional_from_json(j.at("cost_saving_in_orders"));
    rows.push_back(row);
  }
  return rows;
}

inline std::string serialize_plan(const PlanTrace& trace, ReportFormat format) {
  if (format == ReportFormat::Csv) {
    std::string out = "step,k,gain,epsilon,cost\n";
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
      const auto& s = trace.steps[i];
      out += std::to_string(i + 1) + ',' + std::to_string(s.chosen_k) + ',' +
             detail::csv_number(s.gain) + ',' + detail::csv_number(s.epsilon_after) + ',' +
             std::to_string(s.cost_after) + '\n';
    }
    return out;
  }
  ordered_json j;
  j["hamiltonian"] = trace.hamiltonian_id;
  j["t"] = trace.t;
  ordered_json steps = ordered_json::array();
  for (const auto& s : trace.steps) {
    ordered_json step;
    step["k"] = s.chosen_k;
    step["gain"] = s.gain;
    step["epsilon"] = s.epsilon_after;
    step["cost"] = s.cost_after;
    steps.push_back(std::move(step));
  }
  j["steps"] = std::move(steps);
  j["final_levels"] = trace.final_levels.levels();
  return j.dump(2) + '\n';
}

inline PlanTrace parse_plan_json(std::string_view text) {
  const auto j = ordered_json::parse(text);
  PlanTrace trace;
  trace.hamiltonian_id = j.at("hamiltonian").get<std::string>();
  trace.t = j.at("t").get<double>();
  for (const auto& s : j.at("steps"))
    trace.steps.push_back({s.at("k").get<std::size_t>(), s.at("gain").get<double>(),
                           s.at("epsilon").get<double>(), s.at("cost").get<std::size_t>()});
  trace.final_levels = TruncationVector(j.at("final_levels").get<std::vector<std::size_t>>());
  return trace;
}

/// One CSV row per r; levels are ';'-separated.
inline std::string serialize_error_report(const ErrorReport& report, ReportFormat format) {
  if (format == ReportFormat::Csv) {
    std::string out = "levels,cost,epsilon,delta,r,r_step_error\n";
    for (std::size_t r = 1; r <= report.r_step.size(); ++r) {
      out += detail::join_levels(report.levels.levels()) + ',' + std::to_string(report.cost) + ',' +
             detail::csv_number(report.epsilon) + ',' + detail::csv_number(report.delta) + ',' +
             std::to_string(r) + ',' + detail::csv_number(report.r_step[r - 1]) + '\n';
    }
    return out;
  }
  ordered_json j;
  j["levels"] = report.levels.levels();
  j["cost"] = report.cost;
  j["epsilon"] = report.epsilon;
  j["delta"] = report.delta;
  ordered_json steps = ordered_json::array();
  for (std::size_t r = 1; r <= report.r_step.size(); ++r)
    steps.push_back({{"r", r}, {"r_step_error", report.r_step[r - 1]}});
  j["r_step"] = std::move(steps);
  return j.dump(2) + '\n';
}

inline std::string serialize_resources(const ResourceEstimate& est, ReportFormat format) {
  const auto& l = est.layout;
  if (format == ReportFormat::Csv) {
    return "kappa,c_widths,total_ancillas,reflection_ancillas,t_proxy,prepare_rotations,"
           "prepare_state_sizes,select_ops\n" +
           std::to_string(l.kappa) + ',' + detail::join_levels(l.c_widths) + ',' +
           std::to_string(l.total_ancillas) + ',' + std::to_string(l.reflection_ancillas) + ',' +
           std::to_string(est.t_proxy) + ',' + std::to_string(est.prepare_rotations) + ',' +
           detail::join_levels(est.prepare_state_sizes) + ',' + std::to_string(est.select_ops) +
           '\n';
  }
  ordered_json j;
  j["kappa"] = l.kappa;
  j["c_widths"] = l.c_widths;
  j["total_ancillas"] = l.total_ancillas;
  j["reflection_ancillas"] = l.reflection_ancillas;
  j["t_proxy"] = est.t_proxy;
  j["prepare_rotations"] = est.prepare_rotations;
  j["prepare_state_sizes"] = est.prepare_state_sizes;
  j["select_ops"] = est.select_ops;
  return j.dump(2) + '\n';
}

struct ResidualRow {
  TruncationVector levels;
  double t = 0.0;
  IdentityResiduals residuals;
};

inline std::string serialize_residuals(const std::vector<ResidualRow>& rows, ReportFormat format) {
  if (format == ReportFormat::Csv) {
    std::string out = "levels,t,s,walk_block,amplified_block,normalization\n";
    for (const auto& row : rows) {
      out += detail::join_levels(row.levels.levels()) + ',' + detail::csv_number(row.t) + ',' +
             detail::csv_number(row.residuals.s) + ',' +
             detail::csv_number(row.residuals.walk_block) + ',' +
             detail::csv_number(row.residuals.amplified_block) + ',' +
             detail::csv_number(row.residuals.normalization) + '\n';
    }
    return out;
  }
  ordered_json arr = ordered_json::array();
  for (const auto& row : rows) {
    ordered_json j;
    j["levels"] = row.levels.levels();
    j["t"] = row.t;
    j["s"] = row.residuals.s;
    j["walk_block"] = row.residuals.walk_block;
    j["amplified_block"] = row.residuals.amplified_block;
    j["normalization"] = row.residuals.normalization;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + '\n';
}

}  // namespace taylorlcu

#endif  // TAYLORLCU_REPORT_HPP
