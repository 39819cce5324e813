#include "swrect/exact/elimination.hpp"

#include <stdexcept>

namespace swrect::exact {

namespace {

std::uint32_t weight(const BigRational&) { return 0; }
std::uint32_t weight(const MultiPoly& p) { return p.total_degree(); }

BigRational exact_quotient(const BigRational& a, const BigRational& b) { return a / b; }
MultiPoly exact_quotient(const MultiPoly& a, const MultiPoly& b) {
  if (b.is_constant()) return a * b.constant_value().inverse();
  auto q = divide_exact(a, b);
  if (!q) throw std::logic_error("fraction-free step produced an inexact division");
  return std::move(*q);
}

template <typename T>
FractionFreeResult<T> ff_gauss_jordan(Matrix<T> m, std::size_t pivot_cols) {
  if (pivot_cols > m.cols()) throw std::invalid_argument("pivot column count exceeds width");
  FractionFreeResult<T> out;
  T prev(1);
  std::size_t r = 0;
  for (std::size_t c = 0; c < pivot_cols && r < m.rows(); ++c) {
    std::size_t best = m.rows();
    for (std::size_t i = r; i < m.rows(); ++i) {
      if (m(i, c).is_zero()) continue;
      if (best == m.rows() || weight(m(i, c)) < weight(m(best, c))) best = i;
    }
    if (best == m.rows()) continue;
    m.swap_rows(r, best);
    const T p = m(r, c);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r) continue;
      const T a = m(i, c);
      for (std::size_t j = 0; j < m.cols(); ++j) {
        if (j == c) {
          m(i, j) = T();
          continue;
        }
        T v = p * m(i, j);
        if (!a.is_zero() && !m(r, j).is_zero()) v -= a * m(r, j);
        m(i, j) = v.is_zero() ? T() : exact_quotient(v, prev);
      }
    }
    prev = p;
    out.pivot_cols.push_back(c);
    ++r;
  }
  out.determinant = prev;
  out.reduced = std::move(m);
  return out;
}

}  // namespace

FractionFreeResult<BigRational> fraction_free_gauss_jordan(QMatrix m, std::size_t pivot_cols) {
  return ff_gauss_jordan(std::move(m), pivot_cols);
}

FractionFreeResult<MultiPoly> fraction_free_gauss_jordan(PolyMatrix m, std::size_t pivot_cols) {
  return ff_gauss_jordan(std::move(m), pivot_cols);
}

MultiPoly common_multiple(const std::vector<MultiPoly>& polys) {
  MultiPoly l(1);
  for (const auto& d : polys) {
    if (d.is_zero()) throw std::invalid_argument("common multiple of zero");
    if (d.is_constant() || divide_exact(l, d)) continue;
    if (divide_exact(d, l)) {
      l = rational_content(d).primitive;
      continue;
    }
    l = rational_content(l * d).primitive;
  }
  return l;
}

RrefResult rref_with_transform(const RatMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  PolyMatrix aug(rows, cols + rows);
  for (std::size_t i = 0; i < rows; ++i) {
    std::vector<MultiPoly> dens;
    for (std::size_t j = 0; j < cols; ++j)
      if (!m(i, j).is_polynomial()) dens.push_back(m(i, j).den());
    const MultiPoly l = common_multiple(dens);
    for (std::size_t j = 0; j < cols; ++j) {
      const RatFunc& x = m(i, j);
      aug(i, j) = x.is_polynomial() ? x.num() * x.den().constant_value().inverse() * l
                                    : *divide_exact(l, x.den()) * x.num();
    }
    aug(i, cols + i) = l;
  }
  FractionFreeResult<MultiPoly> ff = fraction_free_gauss_jordan(std::move(aug), cols);

  RrefResult out;
  out.pivots = ff.pivot_cols;
  out.determinant = ff.determinant;
  out.E_scaled = ff.reduced.block(0, 0, rows, cols);
  out.T_scaled = ff.reduced.block(0, cols, rows, rows);
  auto scale = [&](const MultiPoly& x) { return RatFunc(x, ff.determinant); };
  out.E = out.E_scaled.map(scale);
  out.T = out.T_scaled.map(scale);
  return out;
}

RrefResult rref_with_transform(const PolyMatrix& m) { return rref_with_transform(to_ratfunc(m)); }

void normalize_column(std::vector<MultiPoly>& column) {
  bool any = false;
  for (const auto& x : column) any = any || !x.is_zero();
  if (!any) return;
  for (Var v : {Var::L1, Var::L2}) {
    MultiPoly g;
    for (const auto& x : column) {
      if (x.is_zero()) continue;
      MultiPoly part = x.is_univariate_in(v) ? rational_content(x).primitive : content_in(x, other(v));
      g = univariate_gcd(g, part);
      if (g.is_constant()) break;
    }
    if (!g.is_constant())
      for (auto& x : column)
        if (!x.is_zero()) x = *divide_exact(x, g);
  }
  mpz_class num = 0, den = 1;
  for (const auto& x : column)
    for (const auto& [mono, c] : x.terms()) {
      mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.value().get_num_mpz_t());
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.value().get_den_mpz_t());
    }
  BigRational content(num, den);
  for (const auto& x : column)
    if (!x.is_zero()) {
      if (x.leading_term().second.sign() < 0) content = -content;
      break;
    }
  const BigRational inv = content.inverse();
  for (auto& x : column) x *= inv;
}

PolyKernel poly_kernel(const PolyMatrix& m) {
  FractionFreeResult<MultiPoly> ff = fraction_free_gauss_jordan(m, m.cols());
  PolyKernel out;
  out.rank = ff.rank();
  out.rank_deficient = out.rank < m.rows();
  std::vector<char> is_pivot(m.cols(), 0);
  for (auto c : ff.pivot_cols) is_pivot[c] = 1;
  out.basis = PolyMatrix(m.cols(), m.cols() - out.rank);
  std::size_t col = 0;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<MultiPoly> v(m.cols());
    v[f] = ff.determinant;
    for (std::size_t r = 0; r < ff.rank(); ++r) v[ff.pivot_cols[r]] = -ff.reduced(r, f);
    normalize_column(v);
    for (std::size_t i = 0; i < m.cols(); ++i) out.basis(i, col) = std::move(v[i]);
    ++col;
  }
  return out;
}

std::size_t exact_rank(const QMatrix& m) {
  return fraction_free_gauss_jordan(m, m.cols()).rank();
}

std::size_t exact_rank(const PolyMatrix& m) {
  return fraction_free_gauss_jordan(m, m.cols()).rank();
}

std::size_t exact_rank(const RatMatrix& m) {
  // Clearing denominators row by row keeps the rank.
  PolyMatrix p(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::vector<MultiPoly> dens;
    for (std::size_t j = 0; j < m.cols(); ++j) dens.push_back(m(i, j).den());
    const MultiPoly l = common_multiple(dens);
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero()) p(i, j) = *divide_exact(l, m(i, j).den()) * m(i, j).num();
  }
  return exact_rank(p);
}

}  // namespace swrect::exact
