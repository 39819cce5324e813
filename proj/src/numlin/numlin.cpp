#include "swrect/numlin/numlin.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "swrect/errors.hpp"

namespace swrect::numlin {

namespace {

int count_above(const Vector& sv, double rel_tol) {
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cut = rel_tol * sv(0);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++r;
  return r;
}

}  // namespace

int rank_tol(const Matrix& a, double rel_tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return count_above(svd.singularValues(), rel_tol);
}

Subspace nullspace(const Matrix& a, double rel_tol) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0 || n == 0) return {Matrix::Identity(n, n), n};
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const int r = count_above(svd.singularValues(), rel_tol);
  return {svd.matrixV().rightCols(n - r), n};
}

Subspace orth(const Matrix& a, double rel_tol) {
  const Eigen::Index n = a.rows();
  if (a.size() == 0) return Subspace::zero(n);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU);
  const int r = count_above(svd.singularValues(), rel_tol);
  return {svd.matrixU().leftCols(r), n};
}

double condition_number(const Matrix& a) {
  if (a.size() == 0) return 1.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const Vector& sv = svd.singularValues();
  const double lo = sv(sv.size() - 1);
  if (lo == 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / lo;
}

Matrix solve(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols()) throw std::invalid_argument("solve needs a square matrix");
  if (a.rows() != b.rows()) throw std::invalid_argument("solve dimension mismatch");
  const double cond = condition_number(a);
  if (!(cond < 1.0 / (100.0 * std::numeric_limits<double>::epsilon()))) throw SingularMatrix(cond);
  return a.colPivHouseholderQr().solve(b);
}

Matrix solve_min_norm(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("least-squares dimension mismatch");
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
  cod.setThreshold(kDefaultRelTol);
  return cod.solve(b);
}

Subspace sum_subspaces(const std::vector<Subspace>& parts, double rel_tol) {
  if (parts.empty()) throw std::invalid_argument("sum of no subspaces");
  const Eigen::Index n = parts.front().ambient_dim;
  Eigen::Index width = 0;
  for (const auto& s : parts) {
    if (s.ambient_dim != n) throw std::invalid_argument("subspaces live in different spaces");
    width += s.dim();
  }
  Matrix cat(n, width);
  Eigen::Index c = 0;
  for (const auto& s : parts) {
    cat.middleCols(c, s.dim()) = s.basis;
    c += s.dim();
  }
  return orth(cat, rel_tol);
}

double max_principal_angle(const Subspace& a, const Subspace& b) {
  if (a.dim() != b.dim()) return std::numbers::pi / 2;
  if (a.dim() == 0) return 0.0;
  // Sines of the principal angles are the singular values of the part of b
  // outside a; unlike acos of the cosines this stays accurate near zero.
  const Matrix outside = b.basis - a.basis * (a.basis.transpose() * b.basis);
  Eigen::JacobiSVD<Matrix> svd(outside);
  const double largest = svd.singularValues().size() ? svd.singularValues().maxCoeff() : 0.0;
  return std::asin(std::min(1.0, largest));
}

double membership_residual(const Subspace& s, const Vector& v) {
  const double nv = v.norm();
  if (nv == 0.0) return 0.0;
  if (s.dim() == 0) return 1.0;
  return (v - s.basis * (s.basis.transpose() * v)).norm() / nv;
}

Matrix to_eigen(const exact::QMatrix& m) {
  Matrix out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j).to_double();
  return out;
}

exact::QMatrix to_exact(const Matrix& m) {
  exact::QMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
          exact::BigRational::from_double_decimal(m(i, j));
  return out;
}

}  // namespace swrect::numlin
