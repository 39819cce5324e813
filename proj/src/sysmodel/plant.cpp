#include "swrect/sysmodel/plant.hpp"

#include <random>
#include <sstream>

#include "swrect/errors.hpp"

namespace swrect::sysmodel {

Subsystem Subsystem::from_exact(int label, exact::QMatrix a, exact::QMatrix b) {
  if (a.rows() != a.cols()) throw std::invalid_argument("A must be square");
  if (b.rows() != a.rows()) throw std::invalid_argument("B must have as many rows as A");
  Subsystem s;
  s.label = label;
  s.A = numlin::to_eigen(a);
  s.B = numlin::to_eigen(b);
  s.A_exact = std::move(a);
  s.B_exact = std::move(b);
  return s;
}

OutputSelection drop_output(const exact::QMatrix& c, int k) {
  const int p = static_cast<int>(c.rows());
  if (k < 0 || k > p) throw IndexOutOfRange(k, 0, p);
  OutputSelection sel;
  sel.k = k;
  if (k == 0) {
    sel.C_exact = c;
  } else {
    sel.C_exact = exact::QMatrix(c.rows() - 1, c.cols());
    std::size_t out = 0;
    for (std::size_t i = 0; i < c.rows(); ++i) {
      if (static_cast<int>(i) == k - 1) continue;
      for (std::size_t j = 0; j < c.cols(); ++j) sel.C_exact(out, j) = c(i, j);
      ++out;
    }
  }
  sel.C = numlin::to_eigen(sel.C_exact);
  return sel;
}

OutputSelection drop_output(const Matrix& c, int k) { return drop_output(numlin::to_exact(c), k); }

SwitchedPlant::SwitchedPlant(Subsystem s1, Subsystem s2, exact::QMatrix c)
    : s1_(std::move(s1)), s2_(std::move(s2)), c_exact_(std::move(c)) {
  s1_.label = 1;
  s2_.label = 2;
  if (s1_.n() != s2_.n() || s1_.m() != s2_.m())
    throw std::invalid_argument("subsystems disagree on state or input dimension");
  if (static_cast<Eigen::Index>(c_exact_.cols()) != s1_.n())
    throw std::invalid_argument("C must have n columns");
  c_ = numlin::to_eigen(c_exact_);
}

SwitchedPlant SwitchedPlant::from_exact(exact::QMatrix a1, exact::QMatrix b1, exact::QMatrix a2,
                                        exact::QMatrix b2, exact::QMatrix c) {
  return SwitchedPlant(Subsystem::from_exact(1, std::move(a1), std::move(b1)),
                       Subsystem::from_exact(2, std::move(a2), std::move(b2)), std::move(c));
}

SwitchedPlant SwitchedPlant::from_numeric(const Matrix& a1, const Matrix& b1, const Matrix& a2,
                                          const Matrix& b2, const Matrix& c) {
  return from_exact(numlin::to_exact(a1), numlin::to_exact(b1), numlin::to_exact(a2),
                    numlin::to_exact(b2), numlin::to_exact(c));
}

const Subsystem& SwitchedPlant::sub(int q) const {
  if (q == 1) return s1_;
  if (q == 2) return s2_;
  throw IndexOutOfRange(q, 1, 2);
}

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Warn: return "warn";
    case CheckStatus::Fail: return "fail";
  }
  return "?";
}

bool ValidationReport::ok() const {
  for (const auto& c : checks)
    if (c.status == CheckStatus::Fail) return false;
  return true;
}

const Check* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

Matrix rosenbrock_matrix(const Subsystem& sub, const OutputSelection& sel, double lambda) {
  const Eigen::Index n = sub.n(), m = sub.m(), pk = sel.p_k();
  Matrix r = Matrix::Zero(n + pk, n + m);
  r.topLeftCorner(n, n) = lambda * Matrix::Identity(n, n) - sub.A;
  r.topRightCorner(n, m) = sub.B;
  if (pk > 0) r.bottomLeftCorner(pk, n) = sel.C;
  return r;
}

bool is_invariant_zero(const Subsystem& sub, const OutputSelection& sel, double lambda,
                       double rel_tol) {
  return numlin::rank_tol(rosenbrock_matrix(sub, sel, lambda), rel_tol) < sub.n() + sel.p_k();
}

ValidationReport validate(const SwitchedPlant& plant, std::uint64_t seed) {
  ValidationReport rep;
  const auto n = plant.n(), m = plant.m(), p = plant.p();
  {
    std::ostringstream d;
    d << "n + p = " << n + p << ", 2m = " << 2 * m;
    CheckStatus st = n + p < 2 * m ? CheckStatus::Pass
                                   : (n + p == 2 * m ? CheckStatus::Warn : CheckStatus::Fail);
    if (st == CheckStatus::Warn) d << " (equality: strict inequality not met, continuing)";
    rep.checks.push_back({"n+p<2m", st, d.str()});
  }
  for (int q : {1, 2}) {
    const int r = numlin::rank_tol(plant.sub(q).B);
    rep.checks.push_back({"rank B" + std::to_string(q),
                          r == m ? CheckStatus::Pass : CheckStatus::Fail,
                          "rank " + std::to_string(r) + " of " + std::to_string(m)});
  }
  {
    const int r = numlin::rank_tol(plant.C());
    rep.checks.push_back({"rank C", r == p ? CheckStatus::Pass : CheckStatus::Fail,
                          "rank " + std::to_string(r) + " of " + std::to_string(p)});
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mag(0.5, 3.0);
  std::bernoulli_distribution neg(0.5);
  std::vector<double> points;
  for (int i = 0; i < 3; ++i) points.push_back(neg(rng) ? -mag(rng) : mag(rng));
  const OutputSelection full = plant.selection(0);
  for (int q : {1, 2}) {
    int best = 0;
    for (double lam : points)
      best = std::max(best, numlin::rank_tol(rosenbrock_matrix(plant.sub(q), full, lam)));
    rep.checks.push_back({"right-invertible " + std::to_string(q),
                          best == n + p ? CheckStatus::Pass : CheckStatus::Fail,
                          "normal rank " + std::to_string(best) + " of " + std::to_string(n + p)});
  }
  return rep;
}

SteadyState steady_state(const SwitchedPlant& plant, const Vector& r) {
  const auto n = plant.n(), m = plant.m(), p = plant.p();
  if (r.size() != p) throw std::invalid_argument("reference has wrong length");
  Matrix big = Matrix::Zero(2 * n + p, n + 2 * m);
  big.block(0, 0, n, n) = plant.sub(1).A;
  big.block(0, n, n, m) = plant.sub(1).B;
  big.block(n, 0, n, n) = plant.sub(2).A;
  big.block(n, n + m, n, m) = plant.sub(2).B;
  big.block(2 * n, 0, p, n) = plant.C();
  Vector rhs = Vector::Zero(2 * n + p);
  rhs.tail(p) = r;
  Vector z = numlin::solve_min_norm(big, rhs);
  const double resid = (big * z - rhs).norm();
  if (resid > 1e-8 * (1.0 + r.norm())) throw Inconsistent(resid);
  SteadyState ss;
  ss.x_ss = z.head(n);
  ss.u1_ss = z.segment(n, m);
  ss.u2_ss = z.tail(m);
  ss.r = r;
  return ss;
}

Vector feedforward(const Matrix& f_q, const SteadyState& ss, int q) {
  if (f_q.cols() != ss.x_ss.size()) throw std::invalid_argument("F has wrong width");
  return -f_q * ss.x_ss + ss.u(q);
}

}  // namespace swrect::sysmodel
