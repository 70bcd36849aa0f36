#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "taylorlcu/densesim.hpp"
#include "test_support.hpp"

using namespace taylorlcu;
namespace tt = taylorlcu::testing;

namespace {

using cd = std::complex<double>;

double max_abs(const DenseOperator& m) { return m.cwiseAbs().maxCoeff(); }

DenseOperator identity(std::size_t qubits) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << qubits);
  return DenseOperator::Identity(dim, dim);
}

}  // namespace

TEST(PauliMatrix, MatchesKroneckerProducts) {
  for (const char* s : {"X", "Y", "Z", "XY", "YZ", "ZYX", "YYI", "IXYZ", "YYYY"}) {
    for (auto phase : {UnitPhase::PlusOne, UnitPhase::MinusI}) {
      const auto op = PauliString::parse(s, phase);
      EXPECT_LT(max_abs(pauli_matrix(op) - to_complex(phase) * tt::kron_pauli(s)), 1e-15) << s;
    }
  }
}

TEST(HamiltonianMatrix, PrefixSums) {
  const auto h = parse_hamiltonian("0.5 XY\n-1.0 ZZ\n0.25 YI\n");
  const auto expected = tt::raw_matrix({{-1.0, "ZZ"}, {0.5, "XY"}, {0.25, "YI"}});
  EXPECT_LT(max_abs(hamiltonian_matrix(h, 3) - expected), 1e-15);
  EXPECT_LT(max_abs(hamiltonian_matrix(h, 1) - tt::raw_matrix({{-1.0, "ZZ"}})), 1e-15);
  EXPECT_EQ(max_abs(hamiltonian_matrix(h, 0)), 0.0);
  EXPECT_THROW(hamiltonian_matrix(h, 4), InputError);
}

TEST(ExactEvolution, Examples) {
  const auto z = parse_hamiltonian("1 Z");
  const auto u = exact_evolution(z, std::numbers::pi);
  EXPECT_LT(max_abs(u + identity(1)), 1e-12);

  const auto h = parse_hamiltonian("1.0 ZI\n0.5 XX\n");
  const auto v = exact_evolution(h, 0.3);
  const cd expected[4] = {{0.9442753701787105, -0.294406556005615}, 0.0, 0.0,
                          {0.0, -0.1472032780028075}};
  for (int j = 0; j < 4; ++j) EXPECT_NEAR(std::abs(v(0, j) - expected[j]), 0.0, 1e-12);
}

TEST(ExactEvolution, MatchesScalingAndSquaring) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t qubits = trial < 5 ? 2 : 4;
    const auto h = tt::random_hermitian(rng, qubits, 3 + trial, 2.0);
    const double t = 0.2 + 0.3 * trial;
    const auto oracle = tt::expm_scaling_squaring(cd(0.0, -t) * hamiltonian_matrix(h, h.size()));
    const auto u = exact_evolution(h, t);
    EXPECT_LT(max_abs(u - oracle), 1e-10);
    EXPECT_LT(max_abs(u * u.adjoint() - identity(qubits)), 1e-12);
  }
}

TEST(ExactEvolution, RejectsNonHermitianAndCap) {
  const auto h = parse_hamiltonian("1.0+0i Z\n0+1i X\n");
  EXPECT_THROW(exact_evolution(h, 0.1), InputError);
  const auto big = parse_hamiltonian("1 ZZZZZ");
  EXPECT_THROW(exact_evolution(big, 0.1, DenseOptions{4}), CapExceeded);
  EXPECT_NO_THROW(exact_evolution(big, 0.1, DenseOptions{5}));
}

TEST(TruncatedSeries, Examples) {
  const auto z = parse_hamiltonian("1 Z");
  EXPECT_EQ(max_abs(truncated_series_operator(z, TruncationVector{}, 0.4) - identity(1)), 0.0);
  const auto first = truncated_series_operator(z, TruncationVector({1}), 0.4);
  DenseOperator expected = identity(1) + cd(0.0, -0.4) * tt::kron_pauli("Z");
  EXPECT_LT(max_abs(first - expected), 1e-15);
}

TEST(TruncatedSeries, FactorOrderIsLeftToRight) {
  // Order 1 uses both terms, order 2 only the larger: (-it)^2/2 * H_2 * H_1.
  const auto h = parse_hamiltonian("1.0 Z\n0.5 X\n");
  const double t = 0.3;
  const auto u = truncated_series_operator(h, TruncationVector({2, 1}), t);
  const DenseOperator h_full = tt::raw_matrix({{1.0, "Z"}, {0.5, "X"}});
  const DenseOperator h_top = tt::raw_matrix({{1.0, "Z"}});
  const DenseOperator expected =
      identity(1) + cd(0.0, -t) * h_full + 0.5 * cd(0.0, -t) * cd(0.0, -t) * (h_full * h_top);
  EXPECT_LT(max_abs(u - expected), 1e-15);
}

TEST(TruncatedSeries, ConvergesToExponential) {
  std::mt19937_64 rng(9);
  const auto h = tt::random_hermitian(rng, 3, 6);
  const double t = t_infinity(h);
  const auto u = exact_evolution(h, t);
  EXPECT_LT(operator_norm(truncated_series_operator(h, full_order_levels(h, 20), t) - u), 1e-13);
}

TEST(Amplify, Examples) {
  const auto z = parse_hamiltonian("1 Z");
  const double t = t_infinity(z);
  const auto a = amplified_operator(z, TruncationVector({1}), t);
  const double s = 1.0 + std::numbers::ln2;
  const cd u00(1.0, -t);
  const cd expected = (3.0 / s) * u00 - (4.0 / (s * s * s)) * u00 * std::norm(u00);
  EXPECT_NEAR(std::abs(a(0, 0) - expected), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(a(0, 0) - 0.5518183987948728 * u00), 0.0, 1e-12);
  // A unitary with s = 2 is left unchanged.
  const auto v = exact_evolution(z, 0.7);
  EXPECT_LT(max_abs(amplify(v, 2.0) - v), 1e-15);
}

TEST(OperatorNorm, Examples) {
  EXPECT_NEAR(operator_norm(identity(3)), 1.0, 1e-15);
  DenseOperator d = DenseOperator::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = cd(0.0, -4.0);
  EXPECT_NEAR(operator_norm(d), 4.0, 1e-14);
  EXPECT_EQ(operator_norm(DenseOperator::Zero(4, 4)), 0.0);
}

TEST(OperatorNorm, PowerIterationAgreesWithSvd) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 5; ++trial) {
    DenseOperator m(8, 8);
    for (Eigen::Index i = 0; i < 8; ++i)
      for (Eigen::Index j = 0; j < 8; ++j) m(i, j) = cd(g(rng), g(rng));
    EXPECT_NEAR(operator_norm_power(m), tt::svd_norm(m), 1e-10 * tt::svd_norm(m));
  }
  DenseOperator big = DenseOperator::Random(128, 128);
  EXPECT_NEAR(operator_norm(big), tt::svd_norm(big), 1e-9 * tt::svd_norm(big));
}

TEST(ErrorReports, SingleTermExample) {
  const auto z = parse_hamiltonian("1 Z");
  const auto report = single_step_error(z, TruncationVector({1}));
  EXPECT_NEAR(report.delta, 0.3362268418254294, 1e-12);
  EXPECT_NEAR(report.epsilon, 0.30685281944005466, 1e-15);
  EXPECT_EQ(report.cost, 1u);
}

TEST(ErrorReports, MultiStepOracle) {
  const auto h = parse_hamiltonian("1.0 ZI\n0.1 XX\n");
  const auto report = multi_step_error(h, TruncationVector({2, 1}), 8);
  EXPECT_NEAR(report.delta, 0.040911143987554854, 1e-12);
  const double expected[8] = {0.0409111, 0.0782440, 0.1117398, 0.1442596,
                              0.1785372, 0.2143560, 0.2496108, 0.2831941};
  ASSERT_EQ(report.r_step.size(), 8u);
  for (int r = 0; r < 8; ++r) EXPECT_NEAR(report.r_step[r], expected[r], 1e-6);
  EXPECT_THROW(multi_step_error(h, TruncationVector({1}), 0), InputError);
}

TEST(ErrorReports, MeasuredErrorTracksBound) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto h = tt::random_hermitian(rng, 2 + trial % 3, 2 + trial % 6, 2.0);
    const auto trace = greedy_plan(h, Budget{2 * h.size()});
    for (std::size_t c = 1; c <= trace.steps.size(); ++c) {
      const double eps = trace.epsilon_at(c);
      if (eps > 0.5) continue;
      const auto report = multi_step_error(h, trace.levels_at(c), 8);
      EXPECT_LE(report.delta, eps + 2.0 * eps * eps);
      for (std::size_t r = 1; r <= 8; ++r) {
        const double d = report.delta;
        EXPECT_LE(report.r_step[r - 1], r * d + 10.0 * r * r * d * d);
      }
    }
  }
}

TEST(ErrorReports, SeriesRemainderDecreasesWithOrder) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 5; ++trial) {
    const auto h = tt::random_hermitian(rng, 3, 5);
    const double t = t_infinity(h);
    const auto u = exact_evolution(h, t);
    double previous = 2.0;
    double power = 1.0;
    for (std::size_t n = 1; n <= 10; ++n) {
      power *= std::numbers::ln2 / static_cast<double>(n);
      const double err = operator_norm(truncated_series_operator(h, full_order_levels(h, n), t) - u);
      EXPECT_LE(err, previous + 1e-15);
      EXPECT_LE(err, 2.0 * power + 1e-15);
      previous = err;
    }
  }
}
