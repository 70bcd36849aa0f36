#ifndef TAYLORLCU_PLANNER_HPP
#define TAYLORLCU_PLANNER_HPP

// Truncation vectors, the normalization s_L(t), the per-step error bound
// eps_L = 2 - s_L(t_inf), insertion gains and the greedy planner that grows
// L one term at a time along the largest gain.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "taylorlcu/errors.hpp"
#include "taylorlcu/hamiltonian.hpp"

namespace taylorlcu {

/// Per-order term counts L_1, L_2, ... (1-based order index, trailing zeros
/// dropped). L_k means order k uses the L_k largest terms of H.
class TruncationVector {
 public:
  TruncationVector() = default;
  explicit TruncationVector(std::vector<std::size_t> levels) : levels_(std::move(levels)) { trim(); }

  /// L_k for 1-based k; zero beyond the stored orders.
  std::size_t at(std::size_t k) const {
    return (k >= 1 && k <= levels_.size()) ? levels_[k - 1] : 0;
  }
  const std::vector<std::size_t>& levels() const { return levels_; }
  /// Highest order with a nonzero count.
  std::size_t max_order() const { return levels_.size(); }

  std::size_t kappa() const {
    return static_cast<std::size_t>(
        std::count_if(levels_.begin(), levels_.end(), [](std::size_t l) { return l > 0; }));
  }
  std::size_t cost() const {
    std::size_t c = 0;
    for (auto l : levels_) c += l;
    return c;
  }
  /// No zero order below the highest nonzero one.
  bool contiguous() const { return kappa() == levels_.size(); }

  void increment(std::size_t k) {
    if (k == 0) throw InputError("order index is 1-based");
    if (levels_.size() < k) levels_.resize(k, 0);
    ++levels_[k - 1];
  }

  friend bool operator==(const TruncationVector&, const TruncationVector&) = default;

 private:
  void trim() {
    while (!levels_.empty() && levels_.back() == 0) levels_.pop_back();
  }

  std::vector<std::size_t> levels_;
};

inline std::size_t cost_of(const TruncationVector& levels) { return levels.cost(); }

/// Throws InputError if some L_k exceeds the number of terms.
inline void validate_levels(const SortedHamiltonian& h, const TruncationVector& levels) {
  for (std::size_t k = 1; k <= levels.max_order(); ++k)
    if (levels.at(k) > h.size())
      throw InputError("L_" + std::to_string(k) + " = " + std::to_string(levels.at(k)) +
                       " exceeds term count " + std::to_string(h.size()));
}

/// ln 2 / Lambda: the step at which the untruncated normalization equals 2.
inline double t_infinity(const SortedHamiltonian& h) { return std::numbers::ln2 / h.lambda_total(); }

/// s_L(t) = sum_k t^k/k! prod_{j<=k} Lambda_j; the sum stops at the first
/// empty order since every later product vanishes.
inline double s_value(const SortedHamiltonian& h, const TruncationVector& levels, double t) {
  if (!(t >= 0.0)) throw InputError("time step must be nonnegative");
  validate_levels(h, levels);
  double sum = 1.0;
  double term = 1.0;
  for (std::size_t k = 1; k <= levels.max_order(); ++k) {
    const double lambda_k = h.prefix_lambda(levels.at(k));
    if (lambda_k == 0.0) break;
    term *= t * lambda_k / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

/// eps_L = 2 - s_L(t_inf), clamped at zero against rounding.
inline double epsilon_bound(const SortedHamiltonian& h, const TruncationVector& levels) {
  return std::max(0.0, 2.0 - s_value(h, levels, t_infinity(h)));
}

/// Increase of s_L(t) from adding the next-largest unused term to order k.
/// Zero when an order below k is empty. Throws InputError if order k is full.
inline double insertion_gain(const SortedHamiltonian& h, const TruncationVector& levels,
                             std::size_t k, double t) {
  if (k == 0) throw InputError("order index is 1-based");
  validate_levels(h, levels);
  const std::size_t used = levels.at(k);
  if (used >= h.size())
    throw InputError("order " + std::to_string(k) + " already contains all terms");
  const double next_alpha = h.term(used).alpha;

  double others = 1.0;  // prod_{j<nu, j != k} Lambda_j
  double scale = 1.0;   // t^nu / nu!
  for (std::size_t j = 1; j < k; ++j) {
    others *= h.prefix_lambda(levels.at(j));
    scale *= t / static_cast<double>(j);
  }
  if (others == 0.0) return 0.0;
  scale *= t / static_cast<double>(k);

  double gain = scale * next_alpha * others;
  for (std::size_t nu = k + 1; nu <= levels.max_order(); ++nu) {
    others *= h.prefix_lambda(levels.at(nu));
    if (others == 0.0) break;
    scale *= t / static_cast<double>(nu);
    gain += scale * next_alpha * others;
  }
  return gain;
}

inline double insertion_gain(const SortedHamiltonian& h, const TruncationVector& levels,
                             std::size_t k) {
  return insertion_gain(h, levels, k, t_infinity(h));
}

/// L_k = L for k <= n.
inline TruncationVector full_order_levels(const SortedHamiltonian& h, std::size_t n) {
  return TruncationVector(std::vector<std::size_t>(n, h.size()));
}

/// Root t_L of s_L(t) = 2 by bracketing and bisection. s is a polynomial in t
/// with positive coefficients, so the root is unique.
inline double solve_t_root(const SortedHamiltonian& h, const TruncationVector& levels) {
  if (levels.kappa() == 0) throw InputError("s_L(t) is constant 1 for an empty truncation vector");
  validate_levels(h, levels);
  double lo = 0.0;
  double hi = t_infinity(h);
  while (s_value(h, levels, hi) < 2.0) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw NonConvergence("failed to bracket t_L");
  }
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double s = s_value(h, levels, mid);
    if (s == 2.0) return mid;
    (s < 2.0 ? lo : hi) = mid;
  }
  const double s_lo = s_value(h, levels, lo);
  const double s_hi = s_value(h, levels, hi);
  const double root = (2.0 - s_lo <= s_hi - 2.0) ? lo : hi;
  if (std::abs(s_value(h, levels, root) - 2.0) > 1e-12)
    throw NonConvergence("bisection for t_L did not reach |s - 2| <= 1e-12");
  return root;
}

struct Budget {
  std::size_t cost = 0;
};

struct TargetEpsilon {
  double value = 0.0;
};

using StopRule = std::variant<Budget, TargetEpsilon>;

struct PlanOptions {
  /// Target-epsilon plans abort once the cost reaches cap_factor * L.
  std::size_t cap_factor = 64;
};

struct PlanStep {
  std::size_t chosen_k = 0;
  double gain = 0.0;
  double epsilon_after = 0.0;
  std::size_t cost_after = 0;
};

struct PlanTrace {
  std::string hamiltonian_id;
  double t = 0.0;
  std::vector<PlanStep> steps;
  TruncationVector final_levels;

  /// Truncation vector after the first `cost` insertions.
  TruncationVector levels_at(std::size_t cost) const {
    if (cost > steps.size()) throw InputError("cost beyond the end of the plan");
    TruncationVector levels;
    for (std::size_t i = 0; i < cost; ++i) levels.increment(steps[i].chosen_k);
    return levels;
  }

  /// Bound after `cost` insertions; 1 for the empty vector.
  double epsilon_at(std::size_t cost) const {
    if (cost > steps.size()) throw InputError("cost beyond the end of the plan");
    return cost == 0 ? 1.0 : steps[cost - 1].epsilon_after;
  }
};

/// Greedy construction from L = 0: each step increments the order with the
/// largest insertion gain at t_inf (lowest k on ties) until the budget is
/// spent or the bound reaches the target.
inline PlanTrace greedy_plan(const SortedHamiltonian& h, const StopRule& stop,
                             const PlanOptions& options = {}, std::string hamiltonian_id = {}) {
  std::size_t max_cost = 0;
  double target = -1.0;
  if (const auto* budget = std::get_if<Budget>(&stop)) {
    if (budget->cost == 0) throw InputError("budget must be at least 1");
    max_cost = budget->cost;
  } else {
    target = std::get<TargetEpsilon>(stop).value;
    if (!(target > 0.0 && target < 1.0)) throw InputError("target epsilon must lie in (0, 1)");
    max_cost = options.cap_factor * h.size();
  }

  PlanTrace trace;
  trace.hamiltonian_id = std::move(hamiltonian_id);
  trace.t = t_infinity(h);
  TruncationVector levels;
  double epsilon = 1.0;

  while (trace.steps.size() < max_cost) {
    if (target > 0.0 && epsilon <= target) break;
    std::size_t best_k = 0;
    double best_gain = -1.0;
    // Orders past the first empty one have zero gain.
    for (std::size_t k = 1; k <= levels.max_order() + 1; ++k) {
      if (levels.at(k) >= h.size()) continue;
      const double gain = insertion_gain(h, levels, k, trace.t);
      if (gain > best_gain) {
        best_gain = gain;
        best_k = k;
      }
    }
    levels.increment(best_k);
    epsilon = std::max(0.0, 2.0 - s_value(h, levels, trace.t));
    trace.steps.push_back({best_k, best_gain, epsilon, levels.cost()});
  }
  if (target > 0.0 && epsilon > target)
    throw NonConvergence("target epsilon not reached before the cost cap of " +
                         std::to_string(max_cost));
  trace.final_levels = levels;
  return trace;
}

}  // namespace taylorlcu

#endif  // TAYLORLCU_PLANNER_HPP
