#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "swrect/rosen/rosenbrock.hpp"

namespace swrect::rectify {

using exact::BigRational;
using exact::MultiPoly;
using numlin::Matrix;
using numlin::Subspace;
using sysmodel::SwitchedPlant;

struct IntersectionBasis {
  int k = 0;
  double l1 = 0.0;
  double l2 = 0.0;
  Matrix vectors;  // orthonormal columns spanning im N1(l1) and im N2(l2) jointly
  Eigen::Index width() const { return vectors.cols(); }
};

/// Reduced echelon form of [N1(l1) N2(l2)] and its blocks. With m_k kernel
/// columns per subsystem, E11 and E12 are the first m_k rows, E22 the rest.
struct EchelonResult {
  exact::RrefResult rref;
  std::size_t m_k = 0;
  exact::RatMatrix E11;
  exact::RatMatrix E12;
  exact::RatMatrix E22;
  exact::PolyMatrix N1;  // in l1
  exact::PolyMatrix N2;  // in l2
};

/// Pairs (l1, l2) where the echelon transform degenerates.
struct PairLocus {
  int k = 0;
  MultiPoly excluded_curve;  // bivariate part of the transform's determinant
  MultiPoly l1_lines;        // factor depending on l1 alone
  MultiPoly l2_lines;        // factor depending on l2 alone
  MultiPoly charpoly1;       // det(l1 I - A1)
  MultiPoly charpoly2;       // det(l2 I - A2)
  /// Every factor multiplied together; a pair is excluded iff this vanishes.
  MultiPoly full() const;
};

struct PMatrix {
  int k = 0;
  exact::PolyMatrix P;
  std::vector<std::pair<exact::Monomial, exact::QMatrix>> coeffs;  // descending monomials
  exact::QMatrix stacked() const;
  exact::QMatrix reconstruct(const BigRational& l1, const BigRational& l2) const;
};

struct RectifyOptions {
  double rel_tol = numlin::kDefaultRelTol;
  int stall_limit = 5;
  std::uint64_t seed = 42;  // drives the generic-width vote
};

/// Grid pairs (-j1/2, -j2/2) with j uniform on 1..40.
std::vector<std::pair<BigRational, BigRational>> sample_grid_pairs(std::uint64_t seed,
                                                                   std::size_t count);

/// Characteristic polynomial det(v I - A) in the variable v.
MultiPoly characteristic_polynomial(const exact::QMatrix& a, exact::Var v);

/// Shared-eigenvector analysis of one switched plant. Symbolic results are
/// computed once per output slot and reused; all methods are thread-safe.
class RectificationAnalysis {
 public:
  explicit RectificationAnalysis(SwitchedPlant plant, RectifyOptions opt = {});
  RectificationAnalysis(const RectificationAnalysis&) = delete;
  RectificationAnalysis& operator=(const RectificationAnalysis&) = delete;

  const SwitchedPlant& plant() const { return plant_; }
  const RectifyOptions& options() const { return opt_; }

  /// Throws SpectrumCollision when l_q is numerically an eigenvalue of A_q.
  IntersectionBasis intersection_at(int k, double l1, double l2) const;

  std::shared_ptr<const EchelonResult> echelon_symbolic(int k) const;
  exact::RatMatrix q_matrix(int k) const;
  std::shared_ptr<const PMatrix> p_matrix(int k) const;
  int d_k_exact(int k) const;
  int d_k_sampled(int k, std::uint64_t seed, int stall_limit = 5) const;
  std::shared_ptr<const PairLocus> pair_locus(int k) const;

  /// Spectra avoided and generic intersection width; once the symbolic locus
  /// of slot k has been computed it must not vanish at the pair either.
  bool pair_admissible(int k, double l1, double l2) const;
  /// Exact locus test (computing it if needed) plus the numeric checks.
  bool pair_admissible_exact(int k, const BigRational& l1, const BigRational& l2) const;

  int generic_width(int k) const;
  bool collides(int q, double lambda) const;

 private:
  void check_slot(int k) const;

  SwitchedPlant plant_;
  RectifyOptions opt_;
  rosen::SymbolicKernelCache kernels_;
  mutable std::mutex mutex_;
  mutable std::map<int, std::shared_ptr<const EchelonResult>> echelon_;
  mutable std::map<int, std::shared_ptr<const PMatrix>> pmat_;
  mutable std::map<int, std::shared_ptr<const PairLocus>> locus_;
  mutable std::map<int, int> width_;
};

}  // namespace swrect::rectify
