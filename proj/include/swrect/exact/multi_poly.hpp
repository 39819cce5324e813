#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "swrect/exact/big_rational.hpp"

namespace swrect::exact {

/// The two symbolic eigenvalue variables, in their fixed global order.
enum class Var : std::uint8_t { L1 = 0, L2 = 1 };

inline Var other(Var v) { return v == Var::L1 ? Var::L2 : Var::L1; }
const char* var_name(Var v);

struct Monomial {
  std::uint32_t e1 = 0;
  std::uint32_t e2 = 0;

  std::uint32_t degree() const { return e1 + e2; }
  std::uint32_t exponent(Var v) const { return v == Var::L1 ? e1 : e2; }
  bool divides(const Monomial& o) const { return e1 <= o.e1 && e2 <= o.e2; }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    return {a.e1 + b.e1, a.e2 + b.e2};
  }
  // Requires b.divides(a).
  friend Monomial operator/(const Monomial& a, const Monomial& b) {
    return {a.e1 - b.e1, a.e2 - b.e2};
  }
  friend bool operator==(const Monomial&, const Monomial&) = default;
  // Graded lexicographic with l1 > l2.
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    if (auto c = a.degree() <=> b.degree(); c != 0) return c;
    return a.e1 <=> b.e1;
  }
};

/// Sparse polynomial in (l1, l2) with rational coefficients. Terms are kept
/// sorted by descending graded-lex order and never hold a zero coefficient.
class MultiPoly {
 public:
  using Term = std::pair<Monomial, BigRational>;

  MultiPoly() = default;
  MultiPoly(const BigRational& c);  // NOLINT(google-explicit-constructor)
  MultiPoly(long c) : MultiPoly(BigRational(c)) {}  // NOLINT
  MultiPoly(int c) : MultiPoly(BigRational(c)) {}   // NOLINT

  static MultiPoly variable(Var v);
  static MultiPoly monomial(Monomial m, const BigRational& c);
  /// Combines like terms and sorts; terms may arrive in any order.
  static MultiPoly from_terms(std::vector<Term> terms);
  /// Builds sum_i coeffs[i] * v^i.
  static MultiPoly univariate(Var v, const std::vector<BigRational>& coeffs_ascending);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.degree() == 0); }
  BigRational constant_value() const;
  bool depends_on(Var v) const;
  bool is_univariate_in(Var v) const { return !depends_on(other(v)); }
  std::uint32_t degree(Var v) const;
  std::uint32_t total_degree() const { return terms_.empty() ? 0 : terms_.front().first.degree(); }
  const Term& leading_term() const { return terms_.front(); }
  BigRational coefficient(const Monomial& m) const;

  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const MultiPoly& o);
  MultiPoly& operator*=(const BigRational& c);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) { return a.terms_ == b.terms_; }

  BigRational evaluate(const BigRational& l1, const BigRational& l2) const;
  double evaluate(double l1, double l2) const;
  /// Replaces one variable by a rational value.
  MultiPoly partial_evaluate(Var v, const BigRational& value) const;
  MultiPoly swap_variables() const;

  /// Coefficients of v^0, v^1, ... as polynomials in the other variable.
  std::vector<MultiPoly> coefficients_in(Var v) const;

  /// e.g. "2*l1*l2 - 5*l1 + 12*l2 + 10"; the zero polynomial renders as "0".
  std::string to_string() const;

 private:
  explicit MultiPoly(std::vector<Term> sorted) : terms_(std::move(sorted)) {}
  std::vector<Term> terms_;
};

MultiPoly pow(const MultiPoly& base, unsigned exponent);

/// Quotient when den divides num exactly, nullopt otherwise.
std::optional<MultiPoly> divide_exact(const MultiPoly& num, const MultiPoly& den);

/// p == content * primitive with primitive having coprime integer
/// coefficients and a positive leading coefficient.
struct ContentSplit {
  BigRational content;
  MultiPoly primitive;
};
ContentSplit rational_content(const MultiPoly& p);

/// Primitive gcd of two polynomials that are univariate in the same variable.
MultiPoly univariate_gcd(const MultiPoly& a, const MultiPoly& b);

/// Gcd of the coefficients of p viewed as a polynomial in `main`; the result
/// only involves the other variable and is primitive.
MultiPoly content_in(const MultiPoly& p, Var main);

/// p == scale * l1_factor * l2_factor * core, where l1_factor depends on l1
/// only, l2_factor on l2 only, and core has neither kind of content left.
struct UnivariateSplit {
  BigRational scale;
  MultiPoly l1_factor;
  MultiPoly l2_factor;
  MultiPoly core;
};
UnivariateSplit split_univariate_factors(const MultiPoly& p);

}  // namespace swrect::exact
