#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "swrect/rectify/rectify.hpp"

namespace swrect::design {

using exact::BigRational;
using numlin::Matrix;
using numlin::Subspace;
using numlin::Vector;
using rectify::RectificationAnalysis;

enum class Mode { NonOvershoot, Monotonic };
const char* to_string(Mode m);
Mode parse_mode(const std::string& s);

/// Allocation (d_0, ..., d_p) of the n closed-loop modes to output slots.
struct Partitioning {
  std::vector<int> d;

  int p() const { return static_cast<int>(d.size()) - 1; }
  int total() const;
  bool monotonic_shape() const;  // (n - p, 1, ..., 1)
  std::string to_string() const;  // "(0,3,3,1)"
  auto operator<=>(const Partitioning&) const = default;
};

/// True when d_(0) + sum_k min(3, d_(k)) < n, i.e. no partitioning can exist.
bool feasibility_stop(int n, const std::vector<int>& d_values);

/// Every partitioning allowed by the feasibility numbers, in lexicographic order.
std::vector<Partitioning> enumerate_partitionings(int n, const std::vector<int>& d_values, Mode mode);

/// Desired eigenvalues per subsystem and output slot. For k >= 1 the lists are
/// kept ascending and paired by position; for k == 0 the i-th entry of L_{1,0}
/// is paired with entry pair0[i] of L_{2,0}.
struct EigenPlan {
  Partitioning partitioning;
  std::map<std::pair<int, int>, std::vector<BigRational>> L;
  std::vector<int> pair0;

  /// Sorts the k >= 1 lists, fills the default identity pairing and checks
  /// counts, signs, distinctness and disjointness. Throws CompatibilityError.
  static EigenPlan make(Partitioning part, std::map<std::pair<int, int>, std::vector<BigRational>> lists,
                        std::optional<std::vector<int>> pair0 = std::nullopt);

  /// Eigenvalue of subsystem q assigned to column (k, i), i zero-based.
  const BigRational& value(int q, int k, int i) const;
  std::pair<BigRational, BigRational> pair(int k, int i) const { return {value(1, k, i), value(2, k, i)}; }
  /// Closed-loop spectrum of subsystem q in column order of V.
  std::vector<double> spectrum(int q) const;
};

/// Throws CompatibilityError unless every used eigenvalue pair is admissible
/// for its slot.
void check_pairs(const EigenPlan& plan, const RectificationAnalysis& ra);

/// Span of the shared eigenvector candidates of slot k over the paired values.
std::vector<Subspace> slot_subspaces(const EigenPlan& plan, const RectificationAnalysis& ra);

struct RadoResult {
  bool ok = true;
  std::optional<std::vector<int>> failing;  // first violating S (1-based outputs)
};

/// Tests dim(P_0 + sum_{k in S} P_k) >= d_0 + sum_{k in S} d_k for every
/// S subset of {1..p}, with subsets visited in lexicographic order of their
/// sorted members. Throws SubsetExplosion for p > 20.
RadoResult check_rado(const std::vector<Subspace>& subspaces, const Partitioning& part,
                      double rel_tol = numlin::kDefaultRelTol);

struct EigenSelection {
  std::vector<std::pair<int, int>> columns;  // (k, i) of each column of V
  Matrix V;
  double condition = 0.0;
  int attempts = 0;
  const auto column(int k, int i) const { return V.col(index(k, i)); }
  Eigen::Index index(int k, int i) const;
};

struct SelectOptions {
  std::uint64_t seed = 42;
  int max_retries = 16;
  double max_condition = 1e8;
};

/// Draws each v_{k,i} as a standard-normal combination of the intersection
/// basis at its paired eigenvalues, normalized to unit length with
/// (C v)_k > 0 (k >= 1) or first nonzero entry positive (k == 0).
EigenSelection select_vectors(const EigenPlan& plan, const RectificationAnalysis& ra, SelectOptions opt = {});

struct Feedback {
  Matrix F1, F2;
  Matrix W1, W2;
  double residual = 0.0;  // worst relative rectification residual
  const Matrix& F(int q) const { return q == 1 ? F1 : F2; }
  const Matrix& W(int q) const { return q == 1 ? W1 : W2; }
};

/// Moore construction F_q = -W_q V^{-1}; verifies (A_q + B_q F_q) v = lambda v.
Feedback moore_feedback(const EigenSelection& sel, const EigenPlan& plan, const sysmodel::SwitchedPlant& plant);

struct Controller {
  Matrix F1, F2;
  Vector G1, G2;
  Matrix V;
  Matrix C;
  EigenPlan plan;
  std::vector<std::pair<int, int>> columns;
  sysmodel::SteadyState ss;
  Mode mode = Mode::NonOvershoot;
  double condition = 0.0;
  double rectification_residual = 0.0;
  int attempts = 0;

  const Matrix& F(int q) const { return q == 1 ? F1 : F2; }
  const Vector& G(int q) const { return q == 1 ? G1 : G2; }
  /// Closed-loop eigenvalue attached to each column of V.
  Vector modal_rates(int q) const;
  /// X_0 descriptor: "all states" for the monotonic shape, else the
  /// coefficient conditions per output.
  std::string x0_description() const;
};

struct SynthesisOptions {
  SelectOptions select;
  Mode mode = Mode::NonOvershoot;
};

/// End-to-end synthesis. Failures are rethrown as SynthesisError carrying the
/// step number (3 pair admissibility, 4 Rado, 5 selection, 6 feedback and
/// feedforward) and the original exception.
Controller synthesize(const RectificationAnalysis& ra, const Vector& r, const EigenPlan& plan,
                      SynthesisOptions opt = {});

/// Sign behaviour of a short exponential sum with ascending rates.
struct ShapeVerdict {
  bool pass = false;
  bool boundary = false;
  std::string rule;
};

ShapeVerdict two_term_rule(double a1, double a2);
ShapeVerdict three_term_rule(double a1, double a2, double a3);

struct OutputVerdict {
  int k = 0;
  int d = 0;
  std::vector<double> coefficients;  // modal coefficients of e_k, ascending rate
  ShapeVerdict verdict;
};

/// Coefficients alpha = V^{-1}(x0 - x_ss), scaled by (C v_{k,i})_k so they are
/// the actual weights of the exponentials in the k-th output; one verdict per
/// output slot k >= 1.
std::vector<OutputVerdict> x0_admissible(const Controller& c, const Vector& x0);

}  // namespace swrect::design
