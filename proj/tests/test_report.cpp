#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "taylorlcu/report.hpp"
#include "test_support.hpp"

using namespace taylorlcu;
namespace tt = taylorlcu::testing;

namespace {

SortedHamiltonian uniform_h() { return parse_hamiltonian("0.4 ZI\n0.4 XI\n0.4 IY\n0.4 XZ\n"); }

void expect_rows_equal(const std::vector<ComparisonRow>& a, const std::vector<ComparisonRow>& b) {
  ASSERT_EQ(a.size(), b.size());
  auto same = [](std::optional<double> x, std::optional<double> y) {
    ASSERT_EQ(x.has_value(), y.has_value());
    if (x) EXPECT_EQ(*x, *y);
  };
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].n, b[i].n);
    EXPECT_EQ(a[i].cost, b[i].cost);
    EXPECT_EQ(a[i].eps_full, b[i].eps_full);
    EXPECT_EQ(a[i].eps_greedy, b[i].eps_greedy);
    EXPECT_EQ(a[i].bound_ratio, b[i].bound_ratio);
    same(a[i].delta_full, b[i].delta_full);
    same(a[i].delta_greedy, b[i].delta_greedy);
    same(a[i].delta_ratio, b[i].delta_ratio);
    same(a[i].cost_saving_in_orders, b[i].cost_saving_in_orders);
  }
}

}  // namespace

TEST(FormatForPath, ByExtension) {
  EXPECT_EQ(format_for_path("out/report.csv"), ReportFormat::Csv);
  EXPECT_EQ(format_for_path("report.json"), ReportFormat::Json);
  EXPECT_THROW(format_for_path("report.txt"), InputError);
  EXPECT_THROW(format_for_path("csv"), InputError);
}

TEST(Comparison, UniformGivesIdenticalResults) {
  const auto rows = generate_comparison_report(uniform_h(), 6, false);
  ASSERT_EQ(rows.size(), 6u);
  for (const auto& row : rows) {
    EXPECT_EQ(row.cost, 4 * row.n);
    EXPECT_DOUBLE_EQ(row.bound_ratio, 1.0);
    ASSERT_TRUE(row.cost_saving_in_orders.has_value());
    EXPECT_EQ(*row.cost_saving_in_orders, 0.0);
    EXPECT_FALSE(row.delta_full.has_value());
  }
}

TEST(Comparison, TwoTermFirstOrder) {
  const auto h = parse_hamiltonian("1.0 ZI\n0.1 XX\n");
  const auto rows = generate_comparison_report(h, 1, false);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].cost, 2u);
  EXPECT_NEAR(rows[0].eps_full, 0.3068528194400548, 1e-12);
  EXPECT_NEAR(rows[0].eps_greedy, 0.17133189621897493, 1e-12);
  EXPECT_GT(rows[0].bound_ratio, 1.0);
}

TEST(Comparison, LogspreadFavorsGreedy) {
  const auto h = logspread_hamiltonian(32, 3.0, 6, 7);
  const auto rows = generate_comparison_report(h, 6, false);
  for (const auto& row : rows) {
    EXPECT_GT(row.bound_ratio, 1.0) << "n=" << row.n;
    ASSERT_TRUE(row.cost_saving_in_orders.has_value());
    EXPECT_GT(*row.cost_saving_in_orders, 0.0);
  }
}

TEST(Comparison, GreedyColumnMatchesPlanner) {
  std::mt19937_64 rng(71);
  const auto h = tt::random_hermitian(rng, 3, 7, 2.5);
  const auto rows = generate_comparison_report(h, 4, false);
  const auto trace = greedy_plan(h, Budget{4 * h.size()});
  for (const auto& row : rows)
    EXPECT_EQ(row.eps_greedy, epsilon_bound(h, trace.levels_at(row.cost)));
}

TEST(Comparison, DenseColumns) {
  const auto h = parse_hamiltonian("1.0 ZI\n0.1 XX\n0.05 YZ\n");
  const auto rows = generate_comparison_report(h, 3, true);
  for (const auto& row : rows) {
    ASSERT_TRUE(row.delta_full && row.delta_greedy && row.delta_ratio);
    EXPECT_NEAR(*row.delta_ratio, *row.delta_full / *row.delta_greedy, 1e-15);
    EXPECT_LE(*row.delta_full, row.eps_full + 2 * row.eps_full * row.eps_full);
  }
  EXPECT_THROW(generate_comparison_report(h, 2, true, DenseOptions{1}), CapExceeded);
  EXPECT_NO_THROW(generate_comparison_report(h, 2, false, DenseOptions{1}));
  EXPECT_THROW(generate_comparison_report(h, 0, false), InputError);
}

TEST(Serialization, EmptyCsvIsHeaderOnly) {
  EXPECT_EQ(serialize_report({}, ReportFormat::Csv),
            "n,cost,eps_full,eps_greedy,bound_ratio,delta_full,delta_greedy,delta_ratio,"
            "cost_saving_in_orders\n");
  EXPECT_EQ(serialize_report({}, ReportFormat::Json), "[]\n");
}

TEST(Serialization, OneRowFieldOrder) {
  ComparisonRow row;
  row.n = 2;
  row.cost = 8;
  row.eps_full = 0.5;
  row.eps_greedy = 0.25;
  row.bound_ratio = 2.0;
  row.cost_saving_in_orders = 0.75;
  const auto csv = serialize_report({row}, ReportFormat::Csv);
  EXPECT_EQ(csv.substr(csv.find('\n') + 1), "2,8,0.5,0.25,2,,,,0.75\n");
}

TEST(Serialization, RoundTrip) {
  const auto h = parse_hamiltonian("1.0 ZI\n0.3 XX\n0.07 YZ\n0.01 ZZ\n");
  const auto rows = generate_comparison_report(h, 5, true);
  for (auto format : {ReportFormat::Csv, ReportFormat::Json}) {
    const auto text = serialize_report(rows, format);
    expect_rows_equal(parse_comparison_report(text, format), rows);
    EXPECT_EQ(serialize_report(parse_comparison_report(text, format), format), text);
  }
  EXPECT_THROW(parse_comparison_report("bad header\n", ReportFormat::Csv), InputError);
}

TEST(Serialization, Deterministic) {
  const auto h = logspread_hamiltonian(16, 3.0, 4, 3);
  const auto a = serialize_report(generate_comparison_report(h, 4, false), ReportFormat::Json);
  const auto b = serialize_report(generate_comparison_report(h, 4, false), ReportFormat::Json);
  EXPECT_EQ(a, b);
}

TEST(Serialization, PlanTrace) {
  const auto h = parse_hamiltonian("1.0 ZI\n0.1 XX\n");
  const auto trace = greedy_plan(h, Budget{3}, {}, "two.txt");
  const auto csv = serialize_plan(trace, ReportFormat::Csv);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "step,k,gain,epsilon,cost");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  const auto parsed = parse_plan_json(serialize_plan(trace, ReportFormat::Json));
  EXPECT_EQ(parsed.hamiltonian_id, "two.txt");
  EXPECT_EQ(parsed.t, trace.t);
  EXPECT_EQ(parsed.final_levels, trace.final_levels);
  ASSERT_EQ(parsed.steps.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(parsed.steps[i].chosen_k, trace.steps[i].chosen_k);
    EXPECT_EQ(parsed.steps[i].gain, trace.steps[i].gain);
    EXPECT_EQ(parsed.steps[i].epsilon_after, trace.steps[i].epsilon_after);
  }
}

TEST(Serialization, ErrorReportAndResources) {
  const auto h = parse_hamiltonian("1.0 ZI\n0.1 XX\n");
  const auto report = multi_step_error(h, TruncationVector({2, 1}), 2);
  const auto csv = serialize_error_report(report, ReportFormat::Csv);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "levels,cost,epsilon,delta,r,r_step_error");
  EXPECT_NE(csv.find("2;1,3,"), std::string::npos);
  const auto json = ordered_json::parse(serialize_error_report(report, ReportFormat::Json));
  EXPECT_EQ(json.at("cost").get<std::size_t>(), 3u);

  const auto res = ordered_json::parse(
      serialize_resources(estimate_resources(TruncationVector({4, 2})), ReportFormat::Json));
  EXPECT_EQ(res.at("t_proxy").get<std::size_t>(), 6u);
  EXPECT_EQ(res.at("reflection_ancillas").get<std::size_t>(), 3u);
}
