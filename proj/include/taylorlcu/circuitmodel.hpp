#ifndef TAYLORLCU_CIRCUITMODEL_HPP
#define TAYLORLCU_CIRCUITMODEL_HPP

// Operator-level model of the LCU circuit for a truncation vector L:
// ancilla registers q (unary order counter, kappa qubits) and c_1..c_kappa
// (binary term indices), the per-register PREPARE unitary P*, SELECT, the
// walk operator W = (P*^dag x 1) S (P* x 1), the reflection R = 2 Pi - 1 and
// the amplified A = -W R W^dag R W, plus closed-form resource counts.
//
// Basis ordering: ancilla is the most significant factor of ancilla x
// system. Inside the ancilla, q_1..q_kappa come first, then c_1..c_kappa.
// The order state |k>_q is |1^k 0^(kappa-k)>. A register c_k holds its term
// index l in plain binary with the last qubit as the least significant bit,
// so l = 5 is |0..0101>.

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "taylorlcu/densesim.hpp"
#include "taylorlcu/errors.hpp"
#include "taylorlcu/hamiltonian.hpp"
#include "taylorlcu/planner.hpp"

namespace taylorlcu {

struct AncillaLayout {
  std::size_t kappa = 0;
  std::vector<std::size_t> c_widths;
  std::size_t total_ancillas = 0;
  std::size_t reflection_ancillas = 0;

  std::size_t c_qubits() const { return total_ancillas - kappa; }
  std::size_t dimension() const { return std::size_t{1} << total_ancillas; }
};

inline std::size_t ceil_log2(std::size_t value) {
  return value <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(value - 1));
}

inline void require_circuit_levels(const TruncationVector& levels) {
  if (levels.kappa() == 0) throw InputError("truncation vector is empty (kappa = 0)");
  if (!levels.contiguous())
    throw InputError("truncation vector has an empty order below a nonzero one");
}

inline AncillaLayout layout_for(const TruncationVector& levels) {
  require_circuit_levels(levels);
  AncillaLayout layout;
  layout.kappa = levels.kappa();
  layout.total_ancillas = layout.kappa;
  for (std::size_t k = 1; k <= levels.max_order(); ++k) {
    layout.c_widths.push_back(ceil_log2(levels.at(k)));
    layout.total_ancillas += layout.c_widths.back();
  }
  layout.reflection_ancillas = layout.total_ancillas >= 2 ? layout.total_ancillas - 2 : 0;
  return layout;
}

struct CircuitOptions {
  /// Cap on ancilla + system qubits for any dense construction.
  std::size_t max_qubits = 10;
};

namespace detail {

inline void check_circuit_cap(std::size_t qubits, const CircuitOptions& options) {
  if (qubits > options.max_qubits)
    throw CapExceeded(std::to_string(qubits) + " qubits exceed the circuit-model cap of " +
                      std::to_string(options.max_qubits));
}

/// Real orthogonal matrix whose first column is the unit vector `target`
/// (Householder reflection taking e_0 to target).
inline DenseOperator completion_with_first_column(const Eigen::VectorXd& target) {
  const Eigen::Index n = target.size();
  Eigen::VectorXd v = target;
  v(0) -= 1.0;
  const double norm2 = v.squaredNorm();
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  if (norm2 > 1e-30) m -= (2.0 / norm2) * v * v.transpose();
  return m.cast<cplx>();
}

inline DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
  DenseOperator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline std::size_t unary_index(std::size_t k, std::size_t kappa) {
  return ((std::size_t{1} << k) - 1) << (kappa - k);
}

}  // namespace detail

struct PrepareOperator {
  /// P* on the ancilla register.
  DenseOperator unitary;
  /// N_q: normalization of the q-register superposition.
  double q_normalization = 0.0;
  /// Normalized amplitudes of P*|0> on q, indexed by order k = 0..kappa.
  std::vector<double> q_amplitudes;
};

/// P* as the tensor product of independent register preparations:
/// q gets weights sqrt(t^k/k! prod Lambda_j) on |k>, each c_k gets
/// sqrt(alpha_l) on |l> for l < L_k, both normalized.
inline PrepareOperator build_prepare(const SortedHamiltonian& h, const TruncationVector& levels,
                                     double t, const CircuitOptions& options = {}) {
  validate_levels(h, levels);
  const AncillaLayout layout = layout_for(levels);
  detail::check_circuit_cap(layout.total_ancillas, options);
  const std::size_t kappa = layout.kappa;

  std::vector<double> weights(kappa + 1, 1.0);
  for (std::size_t k = 1; k <= kappa; ++k)
    weights[k] = weights[k - 1] * t * h.prefix_lambda(levels.at(k)) / static_cast<double>(k);
  double n_q = 0.0;
  for (double w : weights) n_q += w;

  PrepareOperator out;
  out.q_normalization = n_q;
  Eigen::VectorXd q_state = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(std::size_t{1} << kappa));
  for (std::size_t k = 0; k <= kappa; ++k) {
    const double amp = std::sqrt(weights[k] / n_q);
    out.q_amplitudes.push_back(amp);
    q_state(static_cast<Eigen::Index>(detail::unary_index(k, kappa))) = amp;
  }
  DenseOperator p = detail::completion_with_first_column(q_state);

  for (std::size_t k = 1; k <= kappa; ++k) {
    const std::size_t width = layout.c_widths[k - 1];
    if (width == 0) continue;
    const std::size_t count = levels.at(k);
    const double lambda_k = h.prefix_lambda(count);
    Eigen::VectorXd c_state = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(std::size_t{1} << width));
    for (std::size_t l = 0; l < count; ++l)
      c_state(static_cast<Eigen::Index>(l)) = std::sqrt(h.term(l).alpha / lambda_k);
    p = detail::kron(p, detail::completion_with_first_column(c_state));
  }
  out.unitary = std::move(p);
  return out;
}

/// SELECT as its system blocks: blocks[a] acts on the system when the
/// ancilla is in basis state a. Group m applies -i h_{l_m} when q-qubit m is
/// set; groups multiply left to right in m. Unused indices l >= L_m act as
/// identity.
inline std::vector<DenseOperator> select_blocks(const SortedHamiltonian& h,
                                                const TruncationVector& levels,
                                                const CircuitOptions& options = {}) {
  validate_levels(h, levels);
  const AncillaLayout layout = layout_for(levels);
  detail::check_circuit_cap(layout.total_ancillas + h.qubit_count(), options);
  const std::size_t kappa = layout.kappa;
  const auto sys_dim = static_cast<Eigen::Index>(std::size_t{1} << h.qubit_count());

  std::size_t needed = 0;
  for (auto l : levels.levels()) needed = std::max(needed, l);
  std::vector<DenseOperator> tilde(needed);
  for (std::size_t l = 0; l < needed; ++l) tilde[l] = cplx(0.0, -1.0) * pauli_matrix(h.term(l).op);

  // Bit offset of each c register, counted from the least significant end.
  std::vector<std::size_t> shift(kappa, 0);
  std::size_t acc = 0;
  for (std::size_t k = kappa; k-- > 0;) {
    shift[k] = acc;
    acc += layout.c_widths[k];
  }
  const std::size_t c_bits = acc;

  std::vector<DenseOperator> blocks;
  blocks.reserve(layout.dimension());
  for (std::size_t a = 0; a < layout.dimension(); ++a) {
    const std::size_t q = a >> c_bits;
    DenseOperator block = DenseOperator::Identity(sys_dim, sys_dim);
    for (std::size_t m = 1; m <= kappa; ++m) {
      const bool active = (q >> (kappa - m)) & 1U;
      if (!active) continue;
      const std::size_t width = layout.c_widths[m - 1];
      const std::size_t l = (a >> shift[m - 1]) & ((std::size_t{1} << width) - 1);
      if (l >= levels.at(m)) continue;
      block = block * tilde[l];
    }
    blocks.push_back(std::move(block));
  }
  return blocks;
}

inline DenseOperator build_select(const SortedHamiltonian& h, const TruncationVector& levels,
                                  const CircuitOptions& options = {}) {
  const auto blocks = select_blocks(h, levels, options);
  const Eigen::Index sys_dim = blocks.front().rows();
  const auto total = static_cast<Eigen::Index>(blocks.size()) * sys_dim;
  DenseOperator s = DenseOperator::Zero(total, total);
  for (std::size_t a = 0; a < blocks.size(); ++a) {
    const auto offset = static_cast<Eigen::Index>(a) * sys_dim;
    s.block(offset, offset, sys_dim, sys_dim) = blocks[a];
  }
  return s;
}

/// W = (P*^dag x 1) S (P* x 1) in factored form, applied to blocks of
/// columns without forming the full matrix.
class WalkOperator {
 public:
  WalkOperator(DenseOperator prepare, std::vector<DenseOperator> select)
      : prepare_(std::move(prepare)), select_(std::move(select)) {}

  Eigen::Index ancilla_dim() const { return prepare_.rows(); }
  Eigen::Index system_dim() const { return select_.front().rows(); }
  Eigen::Index dim() const { return ancilla_dim() * system_dim(); }

  /// W x (or W^dag x) for x with dim() rows.
  DenseOperator apply(const DenseOperator& x, bool adjoint = false) const {
    const Eigen::Index na = ancilla_dim();
    const Eigen::Index ns = system_dim();
    DenseOperator out(x.rows(), x.cols());
    const DenseOperator p_t = prepare_.transpose();
    const DenseOperator p_conj = prepare_.conjugate();
    DenseOperator m(ns, na);
    for (Eigen::Index col = 0; col < x.cols(); ++col) {
      // Column viewed as (system index, ancilla index).
      m = Eigen::Map<const DenseOperator>(x.col(col).data(), ns, na);
      m = m * p_t;
      for (Eigen::Index c = 0; c < na; ++c) {
        const auto& block = select_[static_cast<std::size_t>(c)];
        m.col(c) = adjoint ? Eigen::VectorXcd(block.adjoint() * m.col(c))
                           : Eigen::VectorXcd(block * m.col(c));
      }
      m = m * p_conj;
      out.col(col) = Eigen::Map<const Eigen::VectorXcd>(m.data(), ns * na);
    }
    return out;
  }

  /// Columns of the ancilla-|0> input block: W (|0> x 1).
  DenseOperator apply_to_zero_block() const {
    DenseOperator e0 = DenseOperator::Zero(dim(), system_dim());
    e0.topRows(system_dim()).setIdentity();
    return apply(e0);
  }

  DenseOperator matrix() const { return apply(DenseOperator::Identity(dim(), dim())); }

 private:
  DenseOperator prepare_;
  std::vector<DenseOperator> select_;
};

inline WalkOperator build_walk(const SortedHamiltonian& h, const TruncationVector& levels, double t,
                               const CircuitOptions& options = {}) {
  return WalkOperator(build_prepare(h, levels, t, options).unitary,
                      select_blocks(h, levels, options));
}

/// R = 2 Pi - 1 applied in place: rows outside the ancilla-|0> block flip sign.
inline DenseOperator reflect(DenseOperator x, Eigen::Index system_dim) {
  x.bottomRows(x.rows() - system_dim) *= -1.0;
  return x;
}

struct WalkOperators {
  DenseOperator w;
  DenseOperator r;
  DenseOperator a;
};

/// Full dense W, R and A = -W R W^dag R W.
inline WalkOperators build_walk_operators(const SortedHamiltonian& h, const TruncationVector& levels,
                                          double t, const CircuitOptions& options = {}) {
  const WalkOperator walk = build_walk(h, levels, t, options);
  WalkOperators ops;
  ops.w = walk.matrix();
  const Eigen::Index dim = walk.dim();
  ops.r = reflect(DenseOperator::Identity(dim, dim), walk.system_dim());
  ops.a = -ops.w * ops.r * ops.w.adjoint() * ops.r * ops.w;
  return ops;
}

/// A (|0> x 1) computed by applying the five factors to the ancilla-|0> columns.
inline DenseOperator amplified_zero_block(const WalkOperator& walk) {
  const Eigen::Index ns = walk.system_dim();
  DenseOperator x = walk.apply_to_zero_block();
  x = reflect(std::move(x), ns);
  x = walk.apply(x, true);
  x = reflect(std::move(x), ns);
  return -walk.apply(x);
}

struct IdentityResiduals {
  /// ||<0|W|0> - U_L / s_L||
  double walk_block = 0.0;
  /// ||<0|A|0> - A~_L||
  double amplified_block = 0.0;
  /// |N_q - s_L|
  double normalization = 0.0;
  double s = 0.0;
};

/// Compares the circuit-model blocks against the directly summed series
/// operators from densesim.
inline IdentityResiduals verify_identities(const SortedHamiltonian& h, const TruncationVector& levels,
                                           double t, const CircuitOptions& options = {}) {
  const PrepareOperator prep = build_prepare(h, levels, t, options);
  const WalkOperator walk(prep.unitary, select_blocks(h, levels, options));
  const Eigen::Index ns = walk.system_dim();

  DenseOptions dense;
  dense.max_qubits = options.max_qubits;
  const double s = s_value(h, levels, t);
  const DenseOperator u_l = truncated_series_operator(h, levels, t, dense);

  IdentityResiduals res;
  res.s = s;
  res.normalization = std::abs(prep.q_normalization - s);
  res.walk_block = operator_norm(walk.apply_to_zero_block().topRows(ns) - u_l / s);
  res.amplified_block = operator_norm(amplified_zero_block(walk).topRows(ns) - amplify(u_l, s));
  return res;
}

struct ResourceEstimate {
  AncillaLayout layout;
  /// C_L = ||L||_1
  std::size_t t_proxy = 0;
  /// Controlled rotations preparing the unary q register.
  std::size_t prepare_rotations = 0;
  /// Number of amplitudes loaded into each c_k register.
  std::vector<std::size_t> prepare_state_sizes;
  /// Controlled -i h_l applications in one SELECT.
  std::size_t select_ops = 0;
};

inline ResourceEstimate estimate_resources(const TruncationVector& levels) {
  ResourceEstimate est;
  est.layout = layout_for(levels);
  est.t_proxy = cost_of(levels);
  est.prepare_rotations = est.layout.kappa - 1;
  est.prepare_state_sizes = levels.levels();
  est.select_ops = levels.cost();
  return est;
}

}  // namespace taylorlcu

#endif  // TAYLORLCU_CIRCUITMODEL_HPP
