#ifndef TAYLORLCU_DENSESIM_HPP
#define TAYLORLCU_DENSESIM_HPP

// Exact dense-matrix reference for small systems: U(t) = exp(-iHt), the
// truncated series U_L(t), the amplified operator A_L(t) actually applied by
// one round of oblivious amplitude amplification, and measured errors.

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "taylorlcu/errors.hpp"
#include "taylorlcu/hamiltonian.hpp"
#include "taylorlcu/planner.hpp"

namespace taylorlcu {

using DenseOperator = Eigen::MatrixXcd;
using cplx = std::complex<double>;

struct DenseOptions {
  std::size_t max_qubits = 12;
};

inline void check_qubit_cap(std::size_t qubits, const DenseOptions& options) {
  if (qubits > options.max_qubits)
    throw CapExceeded(std::to_string(qubits) + " qubits exceed the dense cap of " +
                      std::to_string(options.max_qubits));
}

/// Matrix of a Pauli string including its phase. Built column by column: a
/// Pauli string maps |x> to a phase times |x xor flips>.
inline DenseOperator pauli_matrix(const PauliString& op) {
  const std::size_t n = op.size();
  const std::size_t dim = std::size_t{1} << n;
  std::uint64_t flips = 0;
  std::uint64_t zmask = 0;
  std::uint64_t ymask = 0;
  for (std::size_t q = 0; q < n; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
    switch (op.axes()[q]) {
      case Pauli::I: break;
      case Pauli::X: flips |= bit; break;
      case Pauli::Y: flips |= bit; ymask |= bit; break;
      case Pauli::Z: zmask |= bit; break;
    }
  }
  const cplx phase = to_complex(op.phase());
  // Y|0> = i|1>, Y|1> = -i|0>
  const int y_count = std::popcount(ymask);
  const cplx i_unit(0.0, 1.0);
  cplx y_base(1.0, 0.0);
  for (int i = 0; i < y_count; ++i) y_base *= i_unit;

  DenseOperator m = DenseOperator::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::uint64_t x = 0; x < dim; ++x) {
    const int z_sign = std::popcount(x & (zmask | ymask));
    cplx value = phase * y_base;
    if (z_sign % 2) value = -value;
    m(static_cast<Eigen::Index>(x ^ flips), static_cast<Eigen::Index>(x)) = value;
  }
  return m;
}

/// sum_{l<m} alpha_l h_l.
inline DenseOperator hamiltonian_matrix(const SortedHamiltonian& h, std::size_t m,
                                        const DenseOptions& options = {}) {
  check_qubit_cap(h.qubit_count(), options);
  if (m > h.size()) throw InputError("prefix length exceeds term count");
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << h.qubit_count());
  DenseOperator out = DenseOperator::Zero(dim, dim);
  for (std::size_t l = 0; l < m; ++l) out += h.term(l).alpha * pauli_matrix(h.term(l).op);
  return out;
}

/// exp(-iHt) from the Hermitian eigendecomposition of H.
inline DenseOperator exact_evolution(const SortedHamiltonian& h, double t,
                                     const DenseOptions& options = {}) {
  const DenseOperator hm = hamiltonian_matrix(h, h.size(), options);
  const double asym = (hm - hm.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, h.lambda_total()))
    throw InputError("Hamiltonian matrix is not Hermitian (term phases break Hermiticity)");
  Eigen::SelfAdjointEigenSolver<DenseOperator> eig(hm);
  if (eig.info() != Eigen::Success) throw NonConvergence("Hermitian eigensolver failed");
  const Eigen::VectorXd& w = eig.eigenvalues();
  Eigen::VectorXcd phases(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) phases(i) = std::polar(1.0, -w(i) * t);
  const DenseOperator& v = eig.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

/// I + sum_{k=1}^{K} (-it)^k/k! H_1 H_2 ... H_k with H_j the sum of the L_j
/// largest terms, factors multiplied left to right in j.
inline DenseOperator truncated_series_operator(const SortedHamiltonian& h,
                                               const TruncationVector& levels, double t,
                                               const DenseOptions& options = {}) {
  check_qubit_cap(h.qubit_count(), options);
  validate_levels(h, levels);
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << h.qubit_count());
  DenseOperator out = DenseOperator::Identity(dim, dim);
  DenseOperator product = DenseOperator::Identity(dim, dim);
  std::vector<DenseOperator> prefix_cache(h.size() + 1);
  cplx coeff(1.0, 0.0);
  for (std::size_t k = 1; k <= levels.max_order(); ++k) {
    const std::size_t count = levels.at(k);
    if (count == 0) break;
    if (prefix_cache[count].size() == 0) prefix_cache[count] = hamiltonian_matrix(h, count, options);
    product = product * prefix_cache[count];
    coeff *= cplx(0.0, -t) / static_cast<double>(k);
    out += coeff * product;
  }
  return out;
}

/// (3/s) U - (4/s^3) U U^dagger U.
inline DenseOperator amplify(const DenseOperator& u, double s) {
  return (3.0 / s) * u - (4.0 / (s * s * s)) * (u * (u.adjoint() * u));
}

inline DenseOperator amplified_operator(const SortedHamiltonian& h, const TruncationVector& levels,
                                        double t, const DenseOptions& options = {}) {
  return amplify(truncated_series_operator(h, levels, t, options), s_value(h, levels, t));
}

/// Largest singular value by power iteration on M^dagger M.
inline double operator_norm_power(const DenseOperator& m, double rel_tol = 1e-12,
                                  std::size_t max_iter = 100000) {
  const Eigen::Index n = m.cols();
  if (n == 0 || m.rows() == 0) return 0.0;
  if (m.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v(i) = cplx(1.0 + 0.37 * std::sin(1.3 * static_cast<double>(i) + 0.5),
                0.21 * std::cos(0.7 * static_cast<double>(i)));
  v.normalize();
  double previous = 0.0;
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    Eigen::VectorXcd w = m.adjoint() * (m * v);
    const double rayleigh = v.dot(w).real();
    const double norm_w = w.norm();
    if (norm_w == 0.0) return 0.0;
    v = w / norm_w;
    if (iter > 0 && std::abs(rayleigh - previous) <= rel_tol * rayleigh) {
      return std::sqrt((m * v).squaredNorm());
    }
    previous = rayleigh;
  }
  throw NonConvergence("operator norm power iteration did not converge");
}

/// Operator (spectral) norm: largest eigenvalue of M^dagger M up to dimension
/// 256, power iteration above.
inline double operator_norm(const DenseOperator& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  if (m.cols() <= 256) {
    const DenseOperator gram = m.adjoint() * m;
    Eigen::SelfAdjointEigenSolver<DenseOperator> eig(gram, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw NonConvergence("Hermitian eigensolver failed");
    return std::sqrt(std::max(0.0, eig.eigenvalues()(eig.eigenvalues().size() - 1)));
  }
  return operator_norm_power(m);
}

struct ErrorReport {
  TruncationVector levels;
  std::size_t cost = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  /// r_step[r-1] = ||U^r - A^r||.
  std::vector<double> r_step;
};

/// Measured single-step error ||U(t_inf) - A_L(t_inf)|| alongside the bound.
inline ErrorReport single_step_error(const SortedHamiltonian& h, const TruncationVector& levels,
                                     const DenseOptions& options = {}) {
  const double t = t_infinity(h);
  const DenseOperator u = exact_evolution(h, t, options);
  const DenseOperator a = amplified_operator(h, levels, t, options);
  ErrorReport report;
  report.levels = levels;
  report.cost = levels.cost();
  report.epsilon = epsilon_bound(h, levels);
  report.delta = operator_norm(u - a);
  report.r_step = {report.delta};
  return report;
}

/// ||U^r - A^r|| for r = 1..r_max by repeated multiplication.
inline ErrorReport multi_step_error(const SortedHamiltonian& h, const TruncationVector& levels,
                                    std::size_t r_max, const DenseOptions& options = {}) {
  if (r_max == 0) throw InputError("number of steps must be at least 1");
  const double t = t_infinity(h);
  const DenseOperator u = exact_evolution(h, t, options);
  const DenseOperator a = amplified_operator(h, levels, t, options);
  ErrorReport report;
  report.levels = levels;
  report.cost = levels.cost();
  report.epsilon = epsilon_bound(h, levels);
  DenseOperator u_power = u;
  DenseOperator a_power = a;
  for (std::size_t r = 1; r <= r_max; ++r) {
    if (r > 1) {
      u_power = u_power * u;
      a_power = a_power * a;
    }
    report.r_step.push_back(operator_norm(u_power - a_power));
  }
  report.delta = report.r_step.front();
  return report;
}

}  // namespace taylorlcu

#endif  // TAYLORLCU_DENSESIM_HPP
