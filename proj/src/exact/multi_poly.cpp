#include "swrect/exact/multi_poly.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace swrect::exact {

const char* var_name(Var v) { return v == Var::L1 ? "l1" : "l2"; }

namespace {

bool desc(const MultiPoly::Term& a, const MultiPoly::Term& b) { return a.first > b.first; }

// Dense ascending coefficient vector of a polynomial univariate in v.
std::vector<mpq_class> dense(const MultiPoly& p, Var v) {
  std::vector<mpq_class> out(p.is_zero() ? 0 : p.degree(v) + 1);
  for (const auto& [m, c] : p.terms()) out[m.exponent(v)] = c.value();
  return out;
}

void trim(std::vector<mpq_class>& a) {
  while (!a.empty() && sgn(a.back()) == 0) a.pop_back();
}

MultiPoly from_dense(const std::vector<mpq_class>& a, Var v) {
  std::vector<BigRational> c;
  c.reserve(a.size());
  for (const auto& x : a) c.emplace_back(x);
  return MultiPoly::univariate(v, c);
}

// Remainder of a modulo b (b non-empty, trimmed), in place on a.
void poly_rem(std::vector<mpq_class>& a, const std::vector<mpq_class>& b) {
  const std::size_t db = b.size() - 1;
  while (a.size() >= b.size()) {
    mpq_class f = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i <= db; ++i) a[shift + i] -= f * b[i];
    a.pop_back();
    trim(a);
  }
}

}  // namespace

MultiPoly::MultiPoly(const BigRational& c) {
  if (!c.is_zero()) terms_.emplace_back(Monomial{}, c);
}

MultiPoly MultiPoly::variable(Var v) {
  return monomial(v == Var::L1 ? Monomial{1, 0} : Monomial{0, 1}, BigRational(1));
}

MultiPoly MultiPoly::monomial(Monomial m, const BigRational& c) {
  MultiPoly p;
  if (!c.is_zero()) p.terms_.emplace_back(m, c);
  return p;
}

MultiPoly MultiPoly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), desc);
  std::vector<Term> out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.empty() && out.back().first == t.first)
      out.back().second += t.second;
    else
      out.push_back(std::move(t));
  }
  std::erase_if(out, [](const Term& t) { return t.second.is_zero(); });
  return MultiPoly(std::move(out));
}

MultiPoly MultiPoly::univariate(Var v, const std::vector<BigRational>& coeffs_ascending) {
  std::vector<Term> t;
  for (std::size_t i = coeffs_ascending.size(); i-- > 0;) {
    if (coeffs_ascending[i].is_zero()) continue;
    const auto e = static_cast<std::uint32_t>(i);
    t.emplace_back(v == Var::L1 ? Monomial{e, 0} : Monomial{0, e}, coeffs_ascending[i]);
  }
  return MultiPoly(std::move(t));
}

BigRational MultiPoly::constant_value() const {
  if (!is_constant()) throw std::logic_error("polynomial is not constant: " + to_string());
  return terms_.empty() ? BigRational(0) : terms_[0].second;
}

bool MultiPoly::depends_on(Var v) const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [v](const Term& t) { return t.first.exponent(v) > 0; });
}

std::uint32_t MultiPoly::degree(Var v) const {
  std::uint32_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.first.exponent(v));
  return d;
}

BigRational MultiPoly::coefficient(const Monomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& t, const Monomial& key) { return t.first > key; });
  if (it != terms_.end() && it->first == m) return it->second;
  return BigRational(0);
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  if (o.is_zero()) return *this;
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && a->first > b->first)) {
      out.push_back(std::move(*a++));
    } else if (a == terms_.end() || b->first > a->first) {
      out.push_back(*b++);
    } else {
      BigRational s = a->second + b->second;
      if (!s.is_zero()) out.emplace_back(a->first, std::move(s));
      ++a;
      ++b;
    }
  }
  terms_ = std::move(out);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) { return *this += -o; }

MultiPoly& MultiPoly::operator*=(const MultiPoly& o) {
  *this = *this * o;
  return *this;
}

MultiPoly& MultiPoly::operator*=(const BigRational& c) {
  if (c.is_zero()) {
    terms_.clear();
  } else if (!c.is_one()) {
    for (auto& t : terms_) t.second *= c;
  }
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  if (a.is_zero() || b.is_zero()) return MultiPoly();
  if (a.is_constant()) return MultiPoly(b) *= a.terms_[0].second;
  if (b.is_constant()) return MultiPoly(a) *= b.terms_[0].second;
  const std::size_t w1 = a.degree(Var::L1) + b.degree(Var::L1) + 1;
  const std::size_t w2 = a.degree(Var::L2) + b.degree(Var::L2) + 1;
  std::vector<MultiPoly::Term> out;
  if (w1 * w2 <= (std::size_t{1} << 16)) {
    std::vector<mpq_class> grid(w1 * w2);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        const std::size_t idx = (ma.e1 + mb.e1) * w2 + (ma.e2 + mb.e2);
        grid[idx] += ca.value() * cb.value();
      }
    for (std::size_t i = 0; i < w1; ++i)
      for (std::size_t j = 0; j < w2; ++j) {
        const std::size_t idx = i * w2 + j;
        if (sgn(grid[idx]) != 0)
          out.emplace_back(Monomial{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)},
                           BigRational(std::move(grid[idx])));
      }
    std::sort(out.begin(), out.end(), desc);
    return MultiPoly(std::move(out));
  }
  std::map<Monomial, mpq_class, std::greater<>> acc;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) acc[ma * mb] += ca.value() * cb.value();
  for (auto& [m, c] : acc)
    if (sgn(c) != 0) out.emplace_back(m, BigRational(std::move(c)));
  return MultiPoly(std::move(out));
}

BigRational MultiPoly::evaluate(const BigRational& l1, const BigRational& l2) const {
  mpq_class sum = 0;
  for (const auto& [m, c] : terms_) {
    mpq_class t = c.value();
    for (std::uint32_t i = 0; i < m.e1; ++i) t *= l1.value();
    for (std::uint32_t i = 0; i < m.e2; ++i) t *= l2.value();
    sum += t;
  }
  return BigRational(std::move(sum));
}

double MultiPoly::evaluate(double l1, double l2) const {
  double sum = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = c.to_double();
    for (std::uint32_t i = 0; i < m.e1; ++i) t *= l1;
    for (std::uint32_t i = 0; i < m.e2; ++i) t *= l2;
    sum += t;
  }
  return sum;
}

MultiPoly MultiPoly::partial_evaluate(Var v, const BigRational& value) const {
  std::vector<Term> t;
  t.reserve(terms_.size());
  for (const auto& [m, c] : terms_) {
    const std::uint32_t e = m.exponent(v);
    Monomial rest = v == Var::L1 ? Monomial{0, m.e2} : Monomial{m.e1, 0};
    t.emplace_back(rest, c * pow(value, e));
  }
  return from_terms(std::move(t));
}

MultiPoly MultiPoly::swap_variables() const {
  std::vector<Term> t;
  t.reserve(terms_.size());
  for (const auto& [m, c] : terms_) t.emplace_back(Monomial{m.e2, m.e1}, c);
  std::sort(t.begin(), t.end(), desc);
  return MultiPoly(std::move(t));
}

std::vector<MultiPoly> MultiPoly::coefficients_in(Var v) const {
  if (is_zero()) return {};
  std::vector<std::vector<Term>> parts(degree(v) + 1);
  for (const auto& [m, c] : terms_) {
    Monomial rest = v == Var::L1 ? Monomial{0, m.e2} : Monomial{m.e1, 0};
    parts[m.exponent(v)].emplace_back(rest, c);
  }
  std::vector<MultiPoly> out;
  out.reserve(parts.size());
  for (auto& p : parts) out.push_back(MultiPoly(std::move(p)));  // already descending
  return out;
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    const bool negative = c.sign() < 0;
    if (first)
      os << (negative ? "-" : "");
    else
      os << (negative ? " - " : " + ");
    first = false;
    const BigRational mag = c.abs();
    const bool bare = m.degree() > 0 && mag.is_one();
    if (!bare) os << mag;
    bool need_star = !bare;
    auto emit = [&](const char* name, std::uint32_t e) {
      if (e == 0) return;
      if (need_star) os << '*';
      os << name;
      if (e > 1) os << '^' << e;
      need_star = true;
    };
    emit("l1", m.e1);
    emit("l2", m.e2);
  }
  return os.str();
}

MultiPoly pow(const MultiPoly& base, unsigned exponent) {
  MultiPoly result(1);
  MultiPoly b = base;
  while (exponent) {
    if (exponent & 1u) result *= b;
    exponent >>= 1u;
    if (exponent) b *= b;
  }
  return result;
}

std::optional<MultiPoly> divide_exact(const MultiPoly& num, const MultiPoly& den) {
  if (den.is_zero()) throw std::domain_error("polynomial division by zero");
  if (num.is_zero()) return MultiPoly();
  if (den.is_constant()) return MultiPoly(num) *= den.constant_value().inverse();
  if (num.degree(Var::L1) < den.degree(Var::L1) || num.degree(Var::L2) < den.degree(Var::L2))
    return std::nullopt;

  const auto& [lead_m, lead_c] = den.leading_term();
  const mpq_class lead_inv = 1 / lead_c.value();
  std::map<Monomial, mpq_class, std::greater<>> rem;
  for (const auto& [m, c] : num.terms()) rem.emplace(m, c.value());
  std::vector<MultiPoly::Term> quotient;
  while (!rem.empty()) {
    auto it = rem.begin();
    if (!lead_m.divides(it->first)) return std::nullopt;
    const Monomial qm = it->first / lead_m;
    const mpq_class qc = it->second * lead_inv;
    for (const auto& [m, c] : den.terms()) {
      auto [slot, inserted] = rem.try_emplace(m * qm, 0);
      slot->second -= qc * c.value();
      if (sgn(slot->second) == 0) rem.erase(slot);
    }
    quotient.emplace_back(qm, BigRational(qc));
  }
  return MultiPoly::from_terms(std::move(quotient));
}

ContentSplit rational_content(const MultiPoly& p) {
  if (p.is_zero()) return {BigRational(0), MultiPoly()};
  mpz_class g = 0, l = 1;
  for (const auto& [m, c] : p.terms()) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.value().get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.value().get_den_mpz_t());
  }
  BigRational content(g, l);
  if (p.leading_term().second.sign() < 0) content = -content;
  return {content, MultiPoly(p) *= content.inverse()};
}

MultiPoly univariate_gcd(const MultiPoly& a, const MultiPoly& b) {
  Var v = Var::L1;
  if (a.depends_on(Var::L2) || b.depends_on(Var::L2)) v = Var::L2;
  if (!a.is_univariate_in(v) || !b.is_univariate_in(v))
    throw std::invalid_argument("univariate_gcd needs polynomials in a single common variable");
  if (a.is_zero()) return rational_content(b).primitive;
  if (b.is_zero()) return rational_content(a).primitive;
  if (a.is_constant() || b.is_constant()) return MultiPoly(1);
  std::vector<mpq_class> x = dense(a, v), y = dense(b, v);
  if (x.size() < y.size()) std::swap(x, y);
  while (!y.empty()) {
    poly_rem(x, y);
    std::swap(x, y);
    if (!y.empty()) {
      const mpq_class lead = y.back();
      for (auto& c : y) c /= lead;
    }
  }
  return rational_content(from_dense(x, v)).primitive;
}

MultiPoly content_in(const MultiPoly& p, Var main) {
  if (p.is_zero()) return MultiPoly(1);
  MultiPoly g;
  for (const auto& c : p.coefficients_in(main)) {
    if (c.is_zero()) continue;
    g = univariate_gcd(g, c);
    if (g.is_constant()) return MultiPoly(1);
  }
  return g;
}

UnivariateSplit split_univariate_factors(const MultiPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("cannot split the zero polynomial");
  UnivariateSplit out;
  out.l1_factor = content_in(p, Var::L2);
  MultiPoly rest = *divide_exact(p, out.l1_factor);
  out.l2_factor = content_in(rest, Var::L1);
  rest = *divide_exact(rest, out.l2_factor);
  ContentSplit cs = rational_content(rest);
  out.scale = cs.content;
  out.core = std::move(cs.primitive);
  return out;
}

}  // namespace swrect::exact
