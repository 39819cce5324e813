#include "swrect/rosen/rosenbrock.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace swrect::rosen {

using exact::MultiPoly;

RosenbrockAt rosenbrock_at(const Subsystem& sub, const OutputSelection& sel, double lambda) {
  return {sub.label, sel.k, lambda, sysmodel::rosenbrock_matrix(sub, sel, lambda)};
}

KernelBasis kernel_at(const Subsystem& sub, const OutputSelection& sel, double lambda,
                      double rel_tol) {
  const Subspace ker = numlin::nullspace(sysmodel::rosenbrock_matrix(sub, sel, lambda), rel_tol);
  return {ker.basis.topRows(sub.n()), ker.basis.bottomRows(sub.m())};
}

exact::PolyMatrix rosenbrock_symbolic(const Subsystem& sub, const OutputSelection& sel,
                                      exact::Var v) {
  const std::size_t n = sub.A_exact.rows(), m = sub.B_exact.cols(), pk = sel.C_exact.rows();
  const MultiPoly lam = MultiPoly::variable(v);
  exact::PolyMatrix r(n + pk, n + m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      MultiPoly e(-sub.A_exact(i, j));
      if (i == j) e += lam;
      r(i, j) = std::move(e);
    }
    for (std::size_t j = 0; j < m; ++j) r(i, n + j) = MultiPoly(sub.B_exact(i, j));
  }
  for (std::size_t i = 0; i < pk; ++i)
    for (std::size_t j = 0; j < n; ++j) r(n + i, j) = MultiPoly(sel.C_exact(i, j));
  return r;
}

SymbolicKernel kernel_symbolic(const Subsystem& sub, const OutputSelection& sel) {
  const std::size_t n = sub.A_exact.rows(), m = sub.B_exact.cols();
  exact::PolyKernel k = exact::poly_kernel(rosenbrock_symbolic(sub, sel, exact::Var::L1));
  SymbolicKernel out;
  out.N_poly = k.basis.block(0, 0, n, k.basis.cols());
  out.M_poly = k.basis.block(n, 0, m, k.basis.cols());
  out.generic_width = static_cast<int>(m) - static_cast<int>(sel.p_k());
  out.rank_deficient = k.rank_deficient;
  return out;
}

Subspace rstar_lambda(const Subsystem& sub, const OutputSelection& sel, double lambda,
                      double rel_tol) {
  return numlin::orth(kernel_at(sub, sel, lambda, rel_tol).N, rel_tol);
}

Subspace rstar_of_set(const Subsystem& sub, const OutputSelection& sel,
                      const std::vector<double>& lambdas, double rel_tol) {
  if (lambdas.empty()) return Subspace::zero(sub.n());
  std::vector<double> sorted = lambdas;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("eigenvalue set contains a repeated value");
  std::vector<Subspace> parts;
  for (double l : lambdas) parts.push_back(rstar_lambda(sub, sel, l, rel_tol));
  return numlin::sum_subspaces(parts, rel_tol);
}

std::shared_ptr<const SymbolicKernel> SymbolicKernelCache::get(int q, int k) const {
  const auto key = std::make_pair(q, k);
  {
    std::shared_lock lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  }
  auto fresh = std::make_shared<const SymbolicKernel>(
      kernel_symbolic(plant_->sub(q), plant_->selection(k)));
  std::unique_lock lock(mutex_);
  entries_[key] = fresh;
  return fresh;
}

}  // namespace swrect::rosen
