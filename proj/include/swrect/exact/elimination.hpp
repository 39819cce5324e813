#pragma once

#include <cstddef>
#include <vector>

#include "swrect/exact/matrix.hpp"

namespace swrect::exact {

/// Outcome of fraction-free Gauss-Jordan elimination. Row r (r < rank) has its
/// pivot in column pivot_cols[r] and every pivot equals `determinant`, so
/// dividing `reduced` by it gives the reduced row-echelon form.
template <typename T>
struct FractionFreeResult {
  Matrix<T> reduced;
  std::vector<std::size_t> pivot_cols;
  T determinant = T(1);
  std::size_t rank() const { return pivot_cols.size(); }
};

/// Eliminates using pivots drawn from the first `pivot_cols` columns only;
/// trailing columns (an augmented block) are carried along.
FractionFreeResult<BigRational> fraction_free_gauss_jordan(QMatrix m, std::size_t pivot_cols);
FractionFreeResult<MultiPoly> fraction_free_gauss_jordan(PolyMatrix m, std::size_t pivot_cols);

struct RrefResult {
  RatMatrix E;
  RatMatrix T;
  std::vector<std::size_t> pivots;
  /// E == E_scaled / determinant and T == T_scaled / determinant.
  PolyMatrix E_scaled;
  PolyMatrix T_scaled;
  MultiPoly determinant;
};

/// T * M == E with E in reduced row-echelon form over the rational-function field.
RrefResult rref_with_transform(const RatMatrix& m);
RrefResult rref_with_transform(const PolyMatrix& m);

struct PolyKernel {
  PolyMatrix basis;  // cols - rank polynomial columns
  std::size_t rank = 0;
  /// Set when the rank is below the row count, i.e. the kernel is wider than
  /// the full-row-rank case would give.
  bool rank_deficient = false;
};

/// Right kernel over the rational-function field, one polynomial column per
/// free variable, each content-normalized with a positive leading coefficient.
PolyKernel poly_kernel(const PolyMatrix& m);

std::size_t exact_rank(const QMatrix& m);
std::size_t exact_rank(const PolyMatrix& m);
std::size_t exact_rank(const RatMatrix& m);

/// A common multiple of the given nonzero polynomials, exact when each one
/// divides the running product's largest member, otherwise a product.
MultiPoly common_multiple(const std::vector<MultiPoly>& polys);

/// Divides a polynomial vector by its shared rational and univariate content
/// and fixes the sign so the first nonzero entry has a positive leading
/// coefficient.
void normalize_column(std::vector<MultiPoly>& column);

}  // namespace swrect::exact
