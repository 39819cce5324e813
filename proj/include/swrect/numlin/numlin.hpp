#pragma once

#include <Eigen/Dense>
#include <vector>

#include "swrect/exact/matrix.hpp"

namespace swrect::numlin {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Relative singular-value threshold used wherever no tolerance is given.
inline constexpr double kDefaultRelTol = 1e-9;

/// A linear subspace of R^ambient_dim held by an orthonormal basis.
struct Subspace {
  Matrix basis;
  Eigen::Index ambient_dim = 0;

  Eigen::Index dim() const { return basis.cols(); }
  static Subspace zero(Eigen::Index n) { return {Matrix(n, 0), n}; }
};

int rank_tol(const Matrix& a, double rel_tol = kDefaultRelTol);

/// Orthonormal basis of the numerical right kernel.
Subspace nullspace(const Matrix& a, double rel_tol = kDefaultRelTol);

/// Orthonormal basis of the numerical column span.
Subspace orth(const Matrix& a, double rel_tol = kDefaultRelTol);

/// Ratio of extreme singular values; infinity for a singular matrix.
double condition_number(const Matrix& a);

/// Square solve; throws SingularMatrix when the condition estimate exceeds
/// 1/(100 eps).
Matrix solve(const Matrix& a, const Matrix& b);

/// Minimum-norm least-squares solution.
Matrix solve_min_norm(const Matrix& a, const Matrix& b);

Subspace sum_subspaces(const std::vector<Subspace>& parts, double rel_tol = kDefaultRelTol);

/// Largest principal angle in radians; subspaces of different dimension give pi/2.
double max_principal_angle(const Subspace& a, const Subspace& b);

/// ||(I - Q Q^T) v|| / ||v|| for the basis Q of s; zero for v == 0.
double membership_residual(const Subspace& s, const Vector& v);

Matrix to_eigen(const exact::QMatrix& m);
exact::QMatrix to_exact(const Matrix& m);

}  // namespace swrect::numlin
