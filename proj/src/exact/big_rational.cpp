#include "swrect/exact/big_rational.hpp"

#include <cctype>
#include <cstdint>
#include <cstring>
#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace swrect::exact {

BigRational::BigRational(long num, long den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

BigRational::BigRational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

mpz_class ten_pow(unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

}  // namespace

BigRational BigRational::parse(std::string_view text) {
  auto fail = [&]() -> BigRational {
    throw std::invalid_argument("not a rational number: '" + std::string(text) + "'");
  };
  std::size_t b = 0, e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  std::string_view s = text.substr(b, e - b);
  if (s.empty()) return fail();

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigRational num = parse(s.substr(0, slash));
    BigRational den = parse(s.substr(slash + 1));
    if (den.is_zero()) return fail();
    return num / den;
  }

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto epos = s.find_first_of("eE"); epos != std::string_view::npos) {
    std::string_view exp_part = s.substr(epos + 1);
    bool exp_neg = false;
    if (!exp_part.empty() && (exp_part.front() == '+' || exp_part.front() == '-')) {
      exp_neg = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    if (!all_digits(exp_part)) return fail();
    auto [ptr, ec] = std::from_chars(exp_part.data(), exp_part.data() + exp_part.size(), exponent);
    if (ec != std::errc()) return fail();
    if (exp_neg) exponent = -exponent;
    s = s.substr(0, epos);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if (ip.empty() && fp.empty()) return fail();
    if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp))) return fail();
    digits = std::string(ip) + std::string(fp);
    exponent -= static_cast<long>(fp.size());
  } else {
    if (!all_digits(s)) return fail();
    digits = std::string(s);
  }
  mpz_class mant(digits, 10);
  if (negative) mant = -mant;
  if (exponent >= 0) return BigRational(mpq_class(mant * ten_pow(static_cast<unsigned long>(exponent))));
  return BigRational(mant, ten_pow(static_cast<unsigned long>(-exponent)));
}

double BigRational::to_double() const {
  // mpq_get_d truncates; step one ulp outward when that is closer.
  const double t = q_.get_d();
  if (q_ == 0) return 0.0;
  const double away = std::nextafter(t, q_ > 0 ? HUGE_VAL : -HUGE_VAL);
  if (!std::isfinite(away)) return t;
  const mpq_class dt = ::abs(mpq_class(q_ - mpq_class(t)));
  const mpq_class da = ::abs(mpq_class(mpq_class(away) - q_));
  if (da < dt) return away;
  if (dt < da) return t;
  std::int64_t bits = 0;
  std::memcpy(&bits, &t, sizeof bits);
  return (bits & 1) ? away : t;
}

BigRational BigRational::from_double(double v) {
  if (!std::isfinite(v)) throw std::domain_error("non-finite double");
  return BigRational(mpq_class(v));
}

BigRational BigRational::from_double_decimal(double v) {
  if (!std::isfinite(v)) throw std::domain_error("non-finite double");
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::domain_error("cannot render double");
  return parse(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

BigRational BigRational::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  return BigRational(mpq_class(1 / q_));
}

BigRational& BigRational::operator/=(const BigRational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  q_ /= o.q_;
  return *this;
}

std::ostream& operator<<(std::ostream& os, const BigRational& r) { return os << r.to_string(); }

BigRational pow(const BigRational& base, unsigned exponent) {
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), base.value().get_num_mpz_t(), exponent);
  mpz_pow_ui(d.get_mpz_t(), base.value().get_den_mpz_t(), exponent);
  return BigRational(n, d);
}

BigRational rational_gcd(const BigRational& a, const BigRational& b) {
  if (a.is_zero()) return b.abs();
  if (b.is_zero()) return a.abs();
  mpz_class n, d;
  mpz_gcd(n.get_mpz_t(), a.value().get_num_mpz_t(), b.value().get_num_mpz_t());
  mpz_lcm(d.get_mpz_t(), a.value().get_den_mpz_t(), b.value().get_den_mpz_t());
  return BigRational(n, d);
}

}  // namespace swrect::exact
