#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swrect/exact/matrix.hpp"
#include "swrect/numlin/numlin.hpp"

namespace swrect::sysmodel {

using numlin::Matrix;
using numlin::Vector;

/// One linear subsystem x' = A x + B u. The exact matrices are the source of
/// truth; A and B are their double images.
struct Subsystem {
  int label = 1;
  exact::QMatrix A_exact;
  exact::QMatrix B_exact;
  Matrix A;
  Matrix B;

  static Subsystem from_exact(int label, exact::QMatrix a, exact::QMatrix b);
  Eigen::Index n() const { return A.rows(); }
  Eigen::Index m() const { return B.cols(); }
};

/// Output map with one row removed (k >= 1) or kept whole (k == 0).
struct OutputSelection {
  int k = 0;
  exact::QMatrix C_exact;
  Matrix C;
  Eigen::Index p_k() const { return C.rows(); }
};

/// Removes row k (1-based) of C; k == 0 keeps C. Throws IndexOutOfRange.
OutputSelection drop_output(const exact::QMatrix& c, int k);
OutputSelection drop_output(const Matrix& c, int k);

/// Two subsystems sharing the output matrix C.
class SwitchedPlant {
 public:
  SwitchedPlant(Subsystem s1, Subsystem s2, exact::QMatrix c);
  static SwitchedPlant from_exact(exact::QMatrix a1, exact::QMatrix b1, exact::QMatrix a2,
                                  exact::QMatrix b2, exact::QMatrix c);
  /// Converts each double through its shortest decimal rendering.
  static SwitchedPlant from_numeric(const Matrix& a1, const Matrix& b1, const Matrix& a2,
                                    const Matrix& b2, const Matrix& c);

  const Subsystem& sub(int q) const;
  const exact::QMatrix& C_exact() const { return c_exact_; }
  const Matrix& C() const { return c_; }
  OutputSelection selection(int k) const { return drop_output(c_exact_, k); }
  Eigen::Index n() const { return s1_.n(); }
  Eigen::Index m() const { return s1_.m(); }
  Eigen::Index p() const { return c_.rows(); }

 private:
  Subsystem s1_;
  Subsystem s2_;
  exact::QMatrix c_exact_;
  Matrix c_;
};

enum class CheckStatus { Pass, Warn, Fail };
const char* to_string(CheckStatus s);

struct Check {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  std::string detail;
};

struct ValidationReport {
  std::vector<Check> checks;
  bool ok() const;  // no check failed (warnings allowed)
  const Check* find(const std::string& name) const;
};

/// Dimension inequality, injectivity of B_q, surjectivity of C, and normal
/// rank of each Rosenbrock matrix at seeded random nonzero points.
ValidationReport validate(const SwitchedPlant& plant, std::uint64_t seed = 42);

/// [lambda I - A, B; C_k, 0].
Matrix rosenbrock_matrix(const Subsystem& sub, const OutputSelection& sel, double lambda);

bool is_invariant_zero(const Subsystem& sub, const OutputSelection& sel, double lambda,
                       double rel_tol = numlin::kDefaultRelTol);

struct SteadyState {
  Vector x_ss;
  Vector u1_ss;
  Vector u2_ss;
  Vector r;
  const Vector& u(int q) const { return q == 1 ? u1_ss : u2_ss; }
};

/// Minimum-norm solution of A_q x + B_q u_q = 0 (q = 1, 2), C x = r.
/// Throws Inconsistent if the residual exceeds 1e-8 (1 + |r|).
SteadyState steady_state(const SwitchedPlant& plant, const Vector& r);

/// G_q = -F_q x_ss + u_q,ss.
Vector feedforward(const Matrix& f_q, const SteadyState& ss, int q);

}  // namespace swrect::sysmodel
