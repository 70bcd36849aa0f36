#ifndef TAYLORLCU_HAMILTONIAN_HPP
#define TAYLORLCU_HAMILTONIAN_HPP

// Hamiltonians of the form H = sum_l alpha_l h_l with alpha_l > 0 and h_l a
// Pauli string carrying a unit phase. Terms are kept sorted by alpha,
// largest first, so that "the m largest terms" is always an index prefix.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "taylorlcu/errors.hpp"

namespace taylorlcu {

enum class Pauli : std::uint8_t { I, X, Y, Z };

enum class UnitPhase : std::uint8_t { PlusOne, MinusOne, PlusI, MinusI };

inline std::complex<double> to_complex(UnitPhase phase) {
  switch (phase) {
    case UnitPhase::PlusOne: return {1.0, 0.0};
    case UnitPhase::MinusOne: return {-1.0, 0.0};
    case UnitPhase::PlusI: return {0.0, 1.0};
    case UnitPhase::MinusI: return {0.0, -1.0};
  }
  return {1.0, 0.0};
}

inline char to_char(Pauli p) {
  constexpr char table[] = {'I', 'X', 'Y', 'Z'};
  return table[static_cast<int>(p)];
}

/// A tensor product of single-qubit Paulis times a unit phase. Character 0 of
/// the textual form is qubit 0, the most significant factor in the Kronecker
/// product.
class PauliString {
 public:
  PauliString() = default;
  PauliString(std::vector<Pauli> axes, UnitPhase phase)
      : axes_(std::move(axes)), phase_(phase) {}

  /// Parses "XZIY"-style text. Throws InputError on any other character.
  static PauliString parse(std::string_view text, UnitPhase phase = UnitPhase::PlusOne) {
    if (text.empty()) throw InputError("empty Pauli string");
    std::vector<Pauli> axes;
    axes.reserve(text.size());
    for (char c : text) {
      switch (c) {
        case 'I': axes.push_back(Pauli::I); break;
        case 'X': axes.push_back(Pauli::X); break;
        case 'Y': axes.push_back(Pauli::Y); break;
        case 'Z': axes.push_back(Pauli::Z); break;
        default:
          throw InputError(std::string("invalid Pauli character '") + c + "'");
      }
    }
    return PauliString(std::move(axes), phase);
  }

  const std::vector<Pauli>& axes() const { return axes_; }
  UnitPhase phase() const { return phase_; }
  std::size_t size() const { return axes_.size(); }

  /// Axes only, without the phase.
  std::string axes_string() const {
    std::string out;
    out.reserve(axes_.size());
    for (Pauli p : axes_) out.push_back(to_char(p));
    return out;
  }

  /// Hermitian iff the phase is real.
  bool is_hermitian() const {
    return phase_ == UnitPhase::PlusOne || phase_ == UnitPhase::MinusOne;
  }

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  std::vector<Pauli> axes_;
  UnitPhase phase_ = UnitPhase::PlusOne;
};

struct HamiltonianTerm {
  double alpha = 0.0;
  PauliString op;
};

/// Immutable, magnitude-sorted term list with prefix sums of the weights.
class SortedHamiltonian {
 public:
  /// Validates and sorts `terms` (stable, descending alpha). Throws
  /// InputError for an empty list, nonpositive alpha or mismatched lengths.
  static SortedHamiltonian from_terms(std::vector<HamiltonianTerm> terms) {
    if (terms.empty()) throw InputError("Hamiltonian has no terms");
    const std::size_t qubits = terms.front().op.size();
    if (qubits == 0) throw InputError("Pauli strings must have at least one qubit");
    for (const auto& term : terms) {
      if (!(term.alpha > 0.0) || !std::isfinite(term.alpha))
        throw InputError("term weights must be finite and strictly positive");
      if (term.op.size() != qubits)
        throw InputError("inconsistent Pauli string lengths: expected " +
                         std::to_string(qubits) + ", got " + std::to_string(term.op.size()));
    }
    std::stable_sort(terms.begin(), terms.end(),
                     [](const HamiltonianTerm& a, const HamiltonianTerm& b) {
                       return a.alpha > b.alpha;
                     });
    SortedHamiltonian h;
    h.qubit_count_ = qubits;
    h.prefix_.resize(terms.size() + 1, 0.0);
    for (std::size_t i = 0; i < terms.size(); ++i) h.prefix_[i + 1] = h.prefix_[i] + terms[i].alpha;
    h.terms_ = std::move(terms);
    return h;
  }

  const std::vector<HamiltonianTerm>& terms() const { return terms_; }
  const HamiltonianTerm& term(std::size_t i) const { return terms_.at(i); }
  std::size_t size() const { return terms_.size(); }
  std::size_t qubit_count() const { return qubit_count_; }
  const std::vector<double>& prefix() const { return prefix_; }
  double lambda_total() const { return prefix_.back(); }

  /// Sum of the m largest weights. Throws InputError for m > size().
  double prefix_lambda(std::size_t m) const {
    if (m > terms_.size())
      throw InputError("prefix length " + std::to_string(m) + " exceeds term count " +
                       std::to_string(terms_.size()));
    return prefix_[m];
  }

 private:
  SortedHamiltonian() = default;

  std::vector<HamiltonianTerm> terms_;
  std::size_t qubit_count_ = 0;
  std::vector<double> prefix_;
};

inline double prefix_lambda(const SortedHamiltonian& h, std::size_t m) { return h.prefix_lambda(m); }

namespace detail {

inline double parse_real(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last)
    throw InputError("invalid number '" + std::string(text) + "'");
  return value;
}

/// Accepts `a`, `a+bi`, `a-bi`, `bi`, `i`, `-i`.
inline std::complex<double> parse_coefficient(std::string_view text) {
  if (text.empty()) throw InputError("missing coefficient");
  if (text.back() != 'i') return {parse_real(text), 0.0};
  std::string_view body = text.substr(0, text.size() - 1);
  // Split at the last sign that is not a leading sign or an exponent sign.
  std::size_t split = std::string_view::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag_of = [](std::string_view s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_real(s);
  };
  if (split == std::string_view::npos) return {0.0, imag_of(body)};
  return {parse_real(body.substr(0, split)), imag_of(body.substr(split))};
}

/// Splits a coefficient into magnitude and quarter-turn phase.
inline std::pair<double, UnitPhase> fold_phase(std::complex<double> c) {
  const double re = c.real();
  const double im = c.imag();
  const double magnitude = std::abs(c);
  constexpr double rel = 1e-12;
  if (std::abs(im) <= rel * std::abs(re))
    return {magnitude, re >= 0.0 ? UnitPhase::PlusOne : UnitPhase::MinusOne};
  if (std::abs(re) <= rel * std::abs(im))
    return {magnitude, im >= 0.0 ? UnitPhase::PlusI : UnitPhase::MinusI};
  throw InputError("coefficient phase must be a multiple of i");
}

}  // namespace detail

/// Coefficients below this magnitude are dropped during parsing.
inline constexpr double kDropThreshold = 1e-15;

/// Reads the term-list format: one `<coefficient> <pauli-string>` per line,
/// `#` comments, blank lines ignored. Signs and quarter-turn phases of the
/// coefficient are folded into the Pauli string. Dropped near-zero terms are
/// reported through `warnings` when provided.
inline SortedHamiltonian parse_hamiltonian(std::istream& in,
                                           std::vector<std::string>* warnings = nullptr) {
  std::vector<HamiltonianTerm> terms;
  std::string line;
  std::size_t line_no = 0;
  std::size_t qubits = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string coeff_text, pauli_text, extra;
    if (!(fields >> coeff_text)) continue;
    auto fail = [&](const std::string& what) {
      return InputError("line " + std::to_string(line_no) + ": " + what);
    };
    if (!(fields >> pauli_text)) throw fail("expected '<coefficient> <pauli-string>'");
    if (fields >> extra) throw fail("unexpected trailing field '" + extra + "'");
    try {
      const auto coefficient = detail::parse_coefficient(coeff_text);
      if (!std::isfinite(coefficient.real()) || !std::isfinite(coefficient.imag()))
        throw InputError("coefficient is not finite");
      auto op = PauliString::parse(pauli_text);
      if (qubits == 0) qubits = op.size();
      if (op.size() != qubits)
        throw InputError("inconsistent Pauli string length " + std::to_string(op.size()) +
                         " (expected " + std::to_string(qubits) + ")");
      if (std::abs(coefficient) < kDropThreshold) {
        if (warnings) warnings->push_back("line " + std::to_string(line_no) +
                                          ": dropped near-zero term " + pauli_text);
        continue;
      }
      auto [alpha, phase] = detail::fold_phase(coefficient);
      terms.push_back({alpha, PauliString(op.axes(), phase)});
    } catch (const InputError& e) {
      throw fail(e.what());
    }
  }
  if (terms.empty()) throw InputError("no nonzero terms in Hamiltonian input");
  return SortedHamiltonian::from_terms(std::move(terms));
}

inline SortedHamiltonian parse_hamiltonian(std::string_view text,
                                           std::vector<std::string>* warnings = nullptr) {
  std::istringstream in{std::string(text)};
  return parse_hamiltonian(in, warnings);
}

inline std::string format_real(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

/// Writes the term-list format; parse_hamiltonian reads it back exactly.
inline void write_hamiltonian(std::ostream& out, const SortedHamiltonian& h) {
  for (const auto& term : h.terms()) {
    const std::string mag = format_real(term.alpha);
    switch (term.op.phase()) {
      case UnitPhase::PlusOne: out << mag; break;
      case UnitPhase::MinusOne: out << '-' << mag; break;
      case UnitPhase::PlusI: out << "0+" << mag << 'i'; break;
      case UnitPhase::MinusI: out << "0-" << mag << 'i'; break;
    }
    out << ' ' << term.op.axes_string() << '\n';
  }
}

/// Same Pauli strings as `templ`, weights replaced by |Normal(mu, sigma)|.
inline SortedHamiltonian random_hamiltonian(const SortedHamiltonian& templ, double mu,
                                            double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw InputError("sigma must be nonnegative");
  if (sigma == 0.0 && mu == 0.0) throw InputError("mu = sigma = 0 gives zero weights");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(mu, sigma);
  std::vector<HamiltonianTerm> terms;
  terms.reserve(templ.size());
  for (const auto& term : templ.terms()) {
    double alpha = 0.0;
    do {
      alpha = sigma == 0.0 ? std::abs(mu) : std::abs(normal(rng));
    } while (alpha < kDropThreshold);
    terms.push_back({alpha, term.op});
  }
  return SortedHamiltonian::from_terms(std::move(terms));
}

/// Synthetic Hamiltonian with weights decaying geometrically over `decades`
/// orders of magnitude and distinct random Pauli strings.
inline SortedHamiltonian logspread_hamiltonian(std::size_t term_count, double decades,
                                               std::size_t qubit_count, std::uint64_t seed) {
  if (term_count == 0) throw InputError("term count must be at least 1");
  if (!(decades >= 0.0)) throw InputError("decades must be nonnegative");
  if (qubit_count == 0) throw InputError("qubit count must be at least 1");
  if (qubit_count < 32 && term_count > (std::size_t{1} << (2 * qubit_count)))
    throw InputError("not enough distinct Pauli strings on " + std::to_string(qubit_count) +
                     " qubits for " + std::to_string(term_count) + " terms");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> axis(0, 3);
  std::unordered_set<std::string> seen;
  std::vector<HamiltonianTerm> terms;
  terms.reserve(term_count);
  for (std::size_t l = 0; l < term_count; ++l) {
    std::vector<Pauli> axes(qubit_count);
    std::string key;
    do {
      for (auto& a : axes) a = static_cast<Pauli>(axis(rng));
      key = PauliString(axes, UnitPhase::PlusOne).axes_string();
    } while (!seen.insert(key).second);
    const double exponent =
        term_count == 1 ? 0.0
                        : -decades * static_cast<double>(l) / static_cast<double>(term_count - 1);
    terms.push_back({std::pow(10.0, exponent), PauliString(std::move(axes), UnitPhase::PlusOne)});
  }
  return SortedHamiltonian::from_terms(std::move(terms));
}

}  // namespace taylorlcu

#endif  // TAYLORLCU_HAMILTONIAN_HPP
