#include "swrect/exact/rat_func.hpp"

#include <stdexcept>

namespace swrect::exact {

RatFunc::RatFunc(MultiPoly num, MultiPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
  normalize();
}

namespace {

// Common factor that depends on the single variable `v` only.
MultiPoly shared_univariate(const MultiPoly& a, const MultiPoly& b, Var v) {
  const Var main = other(v);
  MultiPoly ca = a.is_univariate_in(v) ? rational_content(a).primitive : content_in(a, main);
  if (ca.is_constant()) return MultiPoly(1);
  MultiPoly cb = b.is_univariate_in(v) ? rational_content(b).primitive : content_in(b, main);
  if (cb.is_constant()) return MultiPoly(1);
  return univariate_gcd(ca, cb);
}

}  // namespace

void RatFunc::normalize() {
  if (num_.is_zero()) {
    den_ = MultiPoly(1);
    return;
  }
  if (!den_.is_constant()) {
    if (auto q = divide_exact(num_, den_)) {
      num_ = std::move(*q);
      den_ = MultiPoly(1);
      return;
    }
    for (Var v : {Var::L1, Var::L2}) {
      MultiPoly g = shared_univariate(num_, den_, v);
      if (!g.is_constant()) {
        num_ = *divide_exact(num_, g);
        den_ = *divide_exact(den_, g);
      }
    }
  }
  ContentSplit cs = rational_content(den_);
  den_ = std::move(cs.primitive);
  num_ *= cs.content.inverse();
}

RatFunc RatFunc::operator-() const {
  RatFunc r = *this;
  r.num_ = -r.num_;
  return r;
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
  return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  if (a.is_zero() || b.is_zero()) return RatFunc();
  if (a.is_polynomial() && b.is_polynomial()) return RatFunc(a.num_ * b.num_);
  return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) {
  if (b.is_zero()) throw std::domain_error("rational function division by zero");
  return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
}

std::optional<BigRational> RatFunc::evaluate(const BigRational& l1, const BigRational& l2) const {
  BigRational d = den_.evaluate(l1, l2);
  if (d.is_zero()) return std::nullopt;
  return num_.evaluate(l1, l2) / d;
}

std::string RatFunc::to_string() const {
  if (den_ == MultiPoly(1)) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

}  // namespace swrect::exact
