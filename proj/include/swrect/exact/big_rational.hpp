#pragma once

#include <gmpxx.h>

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>

namespace swrect::exact {

/// Arbitrary-precision rational number, always held in lowest terms with a
/// positive denominator.
class BigRational {
 public:
  BigRational() = default;
  BigRational(long value) : q_(value) {}  // NOLINT(google-explicit-constructor)
  BigRational(int value) : q_(static_cast<long>(value)) {}  // NOLINT
  BigRational(long num, long den);
  explicit BigRational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }
  BigRational(const mpz_class& num, const mpz_class& den);

  /// Parses "7", "-44/3", "-72.89", "1.5e-3" exactly.
  static BigRational parse(std::string_view text);
  /// The exact binary value of a finite double.
  static BigRational from_double(double v);
  /// The decimal a double prints as with the shortest round-trip rendering,
  /// so 0.1 becomes 1/10 rather than its binary expansion.
  static BigRational from_double_decimal(double v);

  const mpq_class& value() const { return q_; }
  mpz_class numerator() const { return q_.get_num(); }
  mpz_class denominator() const { return q_.get_den(); }

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sgn(q_) == 0; }
  bool is_one() const { return q_ == 1; }
  bool is_integer() const { return q_.get_den() == 1; }
  /// Nearest double, ties to even.
  double to_double() const;
  std::string to_string() const { return q_.get_str(); }

  BigRational operator-() const { return BigRational(mpq_class(-q_)); }
  BigRational abs() const { return BigRational(mpq_class(::abs(q_))); }
  BigRational inverse() const;

  BigRational& operator+=(const BigRational& o) { q_ += o.q_; return *this; }
  BigRational& operator-=(const BigRational& o) { q_ -= o.q_; return *this; }
  BigRational& operator*=(const BigRational& o) { q_ *= o.q_; return *this; }
  BigRational& operator/=(const BigRational& o);

  friend BigRational operator+(BigRational a, const BigRational& b) { return a += b; }
  friend BigRational operator-(BigRational a, const BigRational& b) { return a -= b; }
  friend BigRational operator*(BigRational a, const BigRational& b) { return a *= b; }
  friend BigRational operator/(BigRational a, const BigRational& b) { return a /= b; }

  friend bool operator==(const BigRational& a, const BigRational& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const BigRational& a, const BigRational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class q_;
};

std::ostream& operator<<(std::ostream& os, const BigRational& r);

BigRational pow(const BigRational& base, unsigned exponent);

/// Greatest common divisor of two rationals: gcd of numerators over lcm of
/// denominators, always non-negative.
BigRational rational_gcd(const BigRational& a, const BigRational& b);

}  // namespace swrect::exact
