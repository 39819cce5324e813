#pragma once

#include <map>
#include <memory>
#include <shared_mutex>
#include <utility>
#include <vector>

#include "swrect/exact/elimination.hpp"
#include "swrect/sysmodel/plant.hpp"

namespace swrect::rosen {

using numlin::Matrix;
using numlin::Subspace;
using sysmodel::OutputSelection;
using sysmodel::Subsystem;

struct RosenbrockAt {
  int q = 1;
  int k = 0;
  double lambda = 0.0;
  Matrix matrix;  // (n + p_k) x (n + m)
};

RosenbrockAt rosenbrock_at(const Subsystem& sub, const OutputSelection& sel, double lambda);

/// Kernel of the Rosenbrock matrix split into its state part N and input part M.
struct KernelBasis {
  Matrix N;
  Matrix M;
  Eigen::Index width() const { return N.cols(); }
};

/// Orthonormal kernel columns [N; M] of R(lambda).
KernelBasis kernel_at(const Subsystem& sub, const OutputSelection& sel, double lambda,
                      double rel_tol = numlin::kDefaultRelTol);

/// R(lambda) with lambda as the polynomial variable v.
exact::PolyMatrix rosenbrock_symbolic(const Subsystem& sub, const OutputSelection& sel,
                                      exact::Var v = exact::Var::L1);

struct SymbolicKernel {
  exact::PolyMatrix N_poly;  // polynomials in l1
  exact::PolyMatrix M_poly;
  int generic_width = 0;     // m - p_k
  bool rank_deficient = false;
};

SymbolicKernel kernel_symbolic(const Subsystem& sub, const OutputSelection& sel);

/// State directions assignable as eigenvectors for eigenvalue lambda.
Subspace rstar_lambda(const Subsystem& sub, const OutputSelection& sel, double lambda,
                      double rel_tol = numlin::kDefaultRelTol);

/// Sum of rstar_lambda over a set of distinct values; duplicates are rejected.
Subspace rstar_of_set(const Subsystem& sub, const OutputSelection& sel,
                      const std::vector<double>& lambdas, double rel_tol = numlin::kDefaultRelTol);

/// Symbolic kernels of one plant, computed on first use. Concurrent readers
/// share a lock; a miss computes outside the lock and the last
/// insert wins (every computation yields the same value).
class SymbolicKernelCache {
 public:
  explicit SymbolicKernelCache(const sysmodel::SwitchedPlant& plant) : plant_(&plant) {}
  std::shared_ptr<const SymbolicKernel> get(int q, int k) const;

 private:
  const sysmodel::SwitchedPlant* plant_;
  mutable std::shared_mutex mutex_;
  mutable std::map<std::pair<int, int>, std::shared_ptr<const SymbolicKernel>> entries_;
};

}  // namespace swrect::rosen
