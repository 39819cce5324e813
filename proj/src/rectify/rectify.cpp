#include "swrect/rectify/rectify.hpp"

#include <algorithm>
#include <random>

#include "swrect/errors.hpp"

namespace swrect::rectify {

using exact::PolyMatrix;
using exact::QMatrix;
using exact::RatFunc;
using exact::RatMatrix;
using exact::Var;

MultiPoly PairLocus::full() const {
  return excluded_curve * l1_lines * l2_lines * charpoly1 * charpoly2;
}

QMatrix PMatrix::stacked() const {
  QMatrix out(P.rows(), 0);
  for (const auto& [m, d] : coeffs) out = exact::hstack(out, d);
  return out;
}

QMatrix PMatrix::reconstruct(const BigRational& l1, const BigRational& l2) const {
  QMatrix out(P.rows(), P.cols());
  for (const auto& [m, d] : coeffs) {
    const BigRational w = exact::pow(l1, m.e1) * exact::pow(l2, m.e2);
    for (std::size_t i = 0; i < d.rows(); ++i)
      for (std::size_t j = 0; j < d.cols(); ++j) out(i, j) += w * d(i, j);
  }
  return out;
}

std::vector<std::pair<BigRational, BigRational>> sample_grid_pairs(std::uint64_t seed,
                                                                   std::size_t count) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> j(1, 40);
  std::vector<std::pair<BigRational, BigRational>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const long a = j(rng);
    const long b = j(rng);
    out.emplace_back(BigRational(-a, 2), BigRational(-b, 2));
  }
  return out;
}

MultiPoly characteristic_polynomial(const QMatrix& a, Var v) {
  const std::size_t n = a.rows();
  PolyMatrix m(n, n);
  const MultiPoly lam = MultiPoly::variable(v);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      MultiPoly e(-a(i, j));
      if (i == j) e += lam;
      m(i, j) = std::move(e);
    }
  auto ff = exact::fraction_free_gauss_jordan(std::move(m), n);
  // Row swaps only flip the sign; det(vI - A) is monic.
  return exact::rational_content(ff.determinant).primitive;
}

RectificationAnalysis::RectificationAnalysis(SwitchedPlant plant, RectifyOptions opt)
    : plant_(std::move(plant)), opt_(opt), kernels_(plant_) {}

void RectificationAnalysis::check_slot(int k) const {
  if (k < 0 || k > plant_.p()) throw IndexOutOfRange(k, 0, static_cast<long>(plant_.p()));
}

bool RectificationAnalysis::collides(int q, double lambda) const {
  const Matrix& a = plant_.sub(q).A;
  const Eigen::Index n = a.rows();
  Eigen::JacobiSVD<Matrix> svd(lambda * Matrix::Identity(n, n) - a);
  const double scale = std::max(1.0, a.norm());
  return svd.singularValues()(n - 1) <= 1e-9 * scale;
}

IntersectionBasis RectificationAnalysis::intersection_at(int k, double l1, double l2) const {
  check_slot(k);
  if (collides(1, l1)) throw SpectrumCollision(1, l1);
  if (collides(2, l2)) throw SpectrumCollision(2, l2);
  const auto sel = plant_.selection(k);
  const Subspace s1 = rosen::rstar_lambda(plant_.sub(1), sel, l1, opt_.rel_tol);
  const Subspace s2 = rosen::rstar_lambda(plant_.sub(2), sel, l2, opt_.rel_tol);
  IntersectionBasis out{k, l1, l2, Matrix(plant_.n(), 0)};
  if (s1.dim() == 0 || s2.dim() == 0) return out;
  Matrix joint(plant_.n(), s1.dim() + s2.dim());
  joint << s1.basis, -s2.basis;
  const Subspace ker = numlin::nullspace(joint, opt_.rel_tol);
  if (ker.dim() == 0) return out;
  out.vectors = numlin::orth(s1.basis * ker.basis.topRows(s1.dim()), opt_.rel_tol).basis;
  return out;
}

std::shared_ptr<const EchelonResult> RectificationAnalysis::echelon_symbolic(int k) const {
  check_slot(k);
  {
    std::lock_guard lock(mutex_);
    if (auto it = echelon_.find(k); it != echelon_.end()) return it->second;
  }
  auto res = std::make_shared<EchelonResult>();
  res->N1 = kernels_.get(1, k)->N_poly;
  res->N2 = kernels_.get(2, k)->N_poly.map([](const MultiPoly& p) { return p.swap_variables(); });
  res->m_k = res->N1.cols();
  if (res->N2.cols() != res->m_k) throw SingularTransform(k);
  res->rref = exact::rref_with_transform(exact::hstack(res->N1, res->N2));
  const std::size_t mk = res->m_k, n = res->N1.rows();
  for (std::size_t i = 0; i < mk; ++i)
    if (i >= res->rref.pivots.size() || res->rref.pivots[i] != i) throw SingularTransform(k);
  res->E11 = res->rref.E.block(0, 0, mk, mk);
  res->E12 = res->rref.E.block(0, mk, mk, mk);
  res->E22 = res->rref.E.block(mk, mk, n - mk, mk);
  std::lock_guard lock(mutex_);
  echelon_[k] = res;
  return res;
}

RatMatrix RectificationAnalysis::q_matrix(int k) const {
  auto ech = echelon_symbolic(k);
  const std::size_t mk = ech->m_k;
  std::vector<char> pivot(2 * mk, 0);
  for (auto c : ech->rref.pivots) pivot[c] = 1;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = mk; c < 2 * mk; ++c)
    if (!pivot[c]) free_cols.push_back(c - mk);
  // T^{-1} [E12; 0; 0] reduces to N1 * E12 because the first m_k pivots of
  // the echelon form sit on the (independent) N1 columns.
  const PolyMatrix e12 = ech->rref.E_scaled.block(0, mk, mk, mk);
  PolyMatrix num(ech->N1.rows(), free_cols.size());
  for (std::size_t j = 0; j < free_cols.size(); ++j)
    for (std::size_t i = 0; i < ech->N1.rows(); ++i) {
      MultiPoly s;
      for (std::size_t r = 0; r < mk; ++r)
        if (!ech->N1(i, r).is_zero() && !e12(r, free_cols[j]).is_zero())
          s += ech->N1(i, r) * e12(r, free_cols[j]);
      num(i, j) = std::move(s);
    }
  const MultiPoly& d = ech->rref.determinant;
  return num.map([&](const MultiPoly& x) { return RatFunc(x, d); });
}

std::shared_ptr<const PMatrix> RectificationAnalysis::p_matrix(int k) const {
  check_slot(k);
  {
    std::lock_guard lock(mutex_);
    if (auto it = pmat_.find(k); it != pmat_.end()) return it->second;
  }
  const RatMatrix q = q_matrix(k);
  auto out = std::make_shared<PMatrix>();
  out->k = k;
  std::vector<std::vector<MultiPoly>> cols;
  for (std::size_t j = 0; j < q.cols(); ++j) {
    std::vector<MultiPoly> dens;
    for (std::size_t i = 0; i < q.rows(); ++i)
      if (!q(i, j).is_zero()) dens.push_back(q(i, j).den());
    if (dens.empty()) continue;  // zero column
    const MultiPoly l = exact::common_multiple(dens);
    std::vector<MultiPoly> col(q.rows());
    for (std::size_t i = 0; i < q.rows(); ++i)
      if (!q(i, j).is_zero()) col[i] = *exact::divide_exact(l, q(i, j).den()) * q(i, j).num();
    exact::normalize_column(col);
    cols.push_back(std::move(col));
  }
  out->P = PolyMatrix(q.rows(), cols.size());
  std::map<exact::Monomial, QMatrix, std::greater<>> by_mono;
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < q.rows(); ++i) {
      out->P(i, j) = cols[j][i];
      for (const auto& [m, c] : cols[j][i].terms()) {
        auto [it, fresh] = by_mono.try_emplace(m, QMatrix(q.rows(), cols.size()));
        it->second(i, j) = c;
      }
    }
  for (auto& [m, d] : by_mono) out->coeffs.emplace_back(m, std::move(d));
  std::lock_guard lock(mutex_);
  pmat_[k] = out;
  return out;
}

int RectificationAnalysis::d_k_exact(int k) const {
  auto p = p_matrix(k);
  if (p->coeffs.empty()) return 0;
  return static_cast<int>(exact::exact_rank(p->stacked()));
}

std::shared_ptr<const PairLocus> RectificationAnalysis::pair_locus(int k) const {
  check_slot(k);
  {
    std::lock_guard lock(mutex_);
    if (auto it = locus_.find(k); it != locus_.end()) return it->second;
  }
  auto ech = echelon_symbolic(k);
  auto loc = std::make_shared<PairLocus>();
  loc->k = k;
  const exact::UnivariateSplit split = exact::split_univariate_factors(ech->rref.determinant);
  loc->excluded_curve = split.core;
  loc->l1_lines = split.l1_factor;
  loc->l2_lines = split.l2_factor;
  loc->charpoly1 = characteristic_polynomial(plant_.sub(1).A_exact, Var::L1);
  loc->charpoly2 = characteristic_polynomial(plant_.sub(2).A_exact, Var::L2);
  std::lock_guard lock(mutex_);
  locus_[k] = loc;
  return loc;
}

int RectificationAnalysis::generic_width(int k) const {
  check_slot(k);
  {
    std::lock_guard lock(mutex_);
    if (auto it = width_.find(k); it != width_.end()) return it->second;
  }
  std::map<Eigen::Index, int> votes;
  int cast = 0;
  for (const auto& [a, b] : sample_grid_pairs(opt_.seed, 400)) {
    const double l1 = a.to_double(), l2 = b.to_double();
    if (collides(1, l1) || collides(2, l2)) continue;
    ++votes[intersection_at(k, l1, l2).width()];
    if (++cast == 5) break;
  }
  int best = 0, best_votes = -1;
  for (const auto& [w, v] : votes)
    if (v > best_votes) {
      best = static_cast<int>(w);
      best_votes = v;
    }
  std::lock_guard lock(mutex_);
  width_[k] = best;
  return best;
}

bool RectificationAnalysis::pair_admissible(int k, double l1, double l2) const {
  check_slot(k);
  if (collides(1, l1) || collides(2, l2)) return false;
  if (intersection_at(k, l1, l2).width() != generic_width(k)) return false;
  std::shared_ptr<const PairLocus> loc;
  {
    std::lock_guard lock(mutex_);
    if (auto it = locus_.find(k); it != locus_.end()) loc = it->second;
  }
  if (loc)
    return !loc->full()
                .evaluate(BigRational::from_double_decimal(l1), BigRational::from_double_decimal(l2))
                .is_zero();
  return true;
}

bool RectificationAnalysis::pair_admissible_exact(int k, const BigRational& l1,
                                                  const BigRational& l2) const {
  if (pair_locus(k)->full().evaluate(l1, l2).is_zero()) return false;
  return pair_admissible(k, l1.to_double(), l2.to_double());
}

int RectificationAnalysis::d_k_sampled(int k, std::uint64_t seed, int stall_limit) const {
  check_slot(k);
  if (stall_limit < 3) throw std::invalid_argument("stall_limit must be at least 3");
  const int target = generic_width(k);
  const Eigen::Index n = plant_.n();
  Subspace acc = Subspace::zero(n);
  int stall = 0;
  for (const auto& [a, b] : sample_grid_pairs(seed, 2000)) {
    const double l1 = a.to_double(), l2 = b.to_double();
    if (collides(1, l1) || collides(2, l2)) continue;
    const IntersectionBasis ib = intersection_at(k, l1, l2);
    if (ib.width() != target) continue;
    const Eigen::Index before = acc.dim();
    if (ib.width() > 0) acc = numlin::sum_subspaces({acc, Subspace{ib.vectors, n}}, opt_.rel_tol);
    stall = acc.dim() == before ? stall + 1 : 0;
    if (stall >= stall_limit || acc.dim() == n) break;
  }
  return static_cast<int>(acc.dim());
}

}  // namespace swrect::rectify
