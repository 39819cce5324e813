#include "swrect/exact/matrix.hpp"

#include "swrect/errors.hpp"

namespace swrect::exact {

std::string Point::to_string() const {
  std::string s = "{";
  if (l1) s += "l1=" + l1->to_string();
  if (l2) s += std::string(l1 ? ", " : "") + "l2=" + l2->to_string();
  return s + "}";
}

namespace {

void require_bound(const MultiPoly& p, const Point& point) {
  if ((!point.l1 && p.depends_on(Var::L1)) || (!point.l2 && p.depends_on(Var::L2)))
    throw std::invalid_argument("point " + point.to_string() + " leaves a variable of " +
                                p.to_string() + " unbound");
}

}  // namespace

QMatrix evaluate(const PolyMatrix& m, const Point& point) {
  const BigRational l1 = point.l1.value_or(BigRational(0));
  const BigRational l2 = point.l2.value_or(BigRational(0));
  return m.map([&](const MultiPoly& p) {
    require_bound(p, point);
    return p.evaluate(l1, l2);
  });
}

QMatrix evaluate(const RatMatrix& m, const Point& point) {
  const BigRational l1 = point.l1.value_or(BigRational(0));
  const BigRational l2 = point.l2.value_or(BigRational(0));
  QMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      require_bound(m(i, j).num(), point);
      require_bound(m(i, j).den(), point);
      auto v = m(i, j).evaluate(l1, l2);
      if (!v) throw DenominatorVanishes(i, j, point.to_string());
      out(i, j) = std::move(*v);
    }
  return out;
}

}  // namespace swrect::exact
