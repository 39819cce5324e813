#pragma once

#include <optional>
#include <string>

#include "swrect/exact/multi_poly.hpp"

namespace swrect::exact {

/// Quotient of two polynomials in (l1, l2).
///
/// Construction cancels whatever common factor is cheap to find: exact
/// divisibility, univariate gcds, and shared univariate contents. Bivariate
/// common factors may survive, so equality is decided by cross-multiplication.
class RatFunc {
 public:
  RatFunc() : den_(1) {}
  RatFunc(const MultiPoly& p) : num_(p), den_(1) {}  // NOLINT(google-explicit-constructor)
  RatFunc(const BigRational& c) : num_(c), den_(1) {}  // NOLINT
  RatFunc(long c) : num_(c), den_(1) {}  // NOLINT
  RatFunc(int c) : num_(c), den_(1) {}   // NOLINT
  RatFunc(MultiPoly num, MultiPoly den);

  const MultiPoly& num() const { return num_; }
  const MultiPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }

  RatFunc operator-() const;
  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
  RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
  RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
  RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
  RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }
  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ * b.den_ == b.num_ * a.den_;
  }

  /// nullopt when the denominator vanishes at the point.
  std::optional<BigRational> evaluate(const BigRational& l1, const BigRational& l2) const;

  std::string to_string() const;

 private:
  void normalize();
  MultiPoly num_;
  MultiPoly den_;
};

}  // namespace swrect::exact
