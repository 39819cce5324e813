#include "swrect/design/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "swrect/errors.hpp"

namespace swrect::design {

const char* to_string(Mode m) { return m == Mode::Monotonic ? "monotonic" : "nonovershoot"; }

Mode parse_mode(const std::string& s) {
  if (s == "nonovershoot") return Mode::NonOvershoot;
  if (s == "monotonic") return Mode::Monotonic;
  throw ParseError("mode must be nonovershoot or monotonic, got '" + s + "'");
}

int Partitioning::total() const {
  int s = 0;
  for (int x : d) s += x;
  return s;
}

bool Partitioning::monotonic_shape() const {
  if (d.empty()) return false;
  for (std::size_t k = 1; k < d.size(); ++k)
    if (d[k] != 1) return false;
  return true;
}

std::string Partitioning::to_string() const {
  std::string s = "(";
  for (std::size_t k = 0; k < d.size(); ++k) s += (k ? "," : "") + std::to_string(d[k]);
  return s + ")";
}

bool feasibility_stop(int n, const std::vector<int>& d_values) {
  if (d_values.empty()) return true;
  int reach = d_values[0];
  for (std::size_t k = 1; k < d_values.size(); ++k) reach += std::min(3, d_values[k]);
  return reach < n;
}

std::vector<Partitioning> enumerate_partitionings(int n, const std::vector<int>& d_values, Mode mode) {
  std::vector<Partitioning> out;
  if (feasibility_stop(n, d_values)) return out;
  const int p = static_cast<int>(d_values.size()) - 1;

  if (mode == Mode::Monotonic) {
    const int d0 = n - p;
    if (d0 < 0 || d0 > d_values[0]) return out;
    for (int k = 1; k <= p; ++k)
      if (d_values[k] < 1) return out;
    Partitioning part{std::vector<int>(p + 1, 1)};
    part.d[0] = d0;
    out.push_back(std::move(part));
    return out;
  }

  std::vector<int> cap(p + 1);
  cap[0] = std::min(d_values[0], n);
  for (int k = 1; k <= p; ++k) cap[k] = std::min(3, d_values[k]);
  std::vector<int> cur(p + 1, 0);
  // Depth-first over slots; the remaining budget must be reachable by the rest.
  std::vector<int> tail(p + 2, 0);
  for (int k = p; k >= 0; --k) tail[k] = tail[k + 1] + cap[k];
  auto rec = [&](auto&& self, int k, int left) -> void {
    if (k == p + 1) {
      if (left == 0) out.push_back(Partitioning{cur});
      return;
    }
    for (int v = 0; v <= std::min(cap[k], left); ++v) {
      if (left - v > tail[k + 1]) continue;
      cur[k] = v;
      self(self, k + 1, left - v);
    }
    cur[k] = 0;
  };
  rec(rec, 0, n);
  return out;
}

// ---------------------------------------------------------------- plan

EigenPlan EigenPlan::make(Partitioning part, std::map<std::pair<int, int>, std::vector<BigRational>> lists,
                          std::optional<std::vector<int>> pair0) {
  EigenPlan plan;
  const int p = part.p();
  if (p < 0) throw CompatibilityError("empty partitioning");
  for (int k = 1; k <= p; ++k)
    if (part.d[k] < 0 || part.d[k] > 3)
      throw CompatibilityError("slot " + std::to_string(k) + " holds " + std::to_string(part.d[k]) +
                               " modes; allowed are 0 to 3");
  if (part.d[0] < 0) throw CompatibilityError("negative d_0");

  for (const auto& [key, vals] : lists) {
    if (key.first != 1 && key.first != 2) throw CompatibilityError("subsystem label must be 1 or 2");
    if (key.second < 0 || key.second > p)
      throw CompatibilityError("eigenvalues given for slot " + std::to_string(key.second) + " outside 0.." +
                               std::to_string(p));
  }
  for (int q : {1, 2}) {
    std::set<BigRational> seen;
    for (int k = 0; k <= p; ++k) {
      auto& v = lists[{q, k}];
      if (static_cast<int>(v.size()) != part.d[k])
        throw CompatibilityError("L_{" + std::to_string(q) + "," + std::to_string(k) + "} has " +
                                 std::to_string(v.size()) + " values but d_" + std::to_string(k) + " = " +
                                 std::to_string(part.d[k]));
      for (const auto& x : v) {
        if (x.sign() >= 0)
          throw CompatibilityError("eigenvalue " + x.to_string() + " of subsystem " + std::to_string(q) +
                                   " is not negative");
        if (!seen.insert(x).second)
          throw CompatibilityError("eigenvalue " + x.to_string() + " used twice by subsystem " + std::to_string(q));
      }
      if (k >= 1) std::sort(v.begin(), v.end());
    }
  }

  const int d0 = part.d[0];
  if (pair0) {
    if (static_cast<int>(pair0->size()) != d0) throw CompatibilityError("pair0 must have d_0 entries");
    std::vector<int> sorted = *pair0;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < d0; ++i)
      if (sorted[i] != i) throw CompatibilityError("pair0 is not a permutation of 0..d_0-1");
    plan.pair0 = *pair0;
  } else {
    plan.pair0.resize(d0);
    for (int i = 0; i < d0; ++i) plan.pair0[i] = i;
  }
  plan.partitioning = std::move(part);
  plan.L = std::move(lists);
  return plan;
}

const BigRational& EigenPlan::value(int q, int k, int i) const {
  const auto& v = L.at({q, k});
  if (q == 2 && k == 0) return v.at(pair0.at(i));
  return v.at(i);
}

std::vector<double> EigenPlan::spectrum(int q) const {
  std::vector<double> out;
  for (int k = 0; k <= partitioning.p(); ++k)
    for (int i = 0; i < partitioning.d[k]; ++i) out.push_back(value(q, k, i).to_double());
  return out;
}

void check_pairs(const EigenPlan& plan, const RectificationAnalysis& ra) {
  const auto& part = plan.partitioning;
  if (part.p() != ra.plant().p())
    throw CompatibilityError("partitioning has " + std::to_string(part.p() + 1) + " slots; the plant needs " +
                             std::to_string(ra.plant().p() + 1));
  if (part.total() != ra.plant().n())
    throw CompatibilityError("partitioning " + part.to_string() + " does not sum to n = " +
                             std::to_string(ra.plant().n()));
  for (int k = 0; k <= part.p(); ++k)
    for (int i = 0; i < part.d[k]; ++i) {
      const auto [a, b] = plan.pair(k, i);
      if (!ra.pair_admissible_exact(k, a, b))
        throw CompatibilityError("pair (" + a.to_string() + ", " + b.to_string() + ") is not admissible for slot " +
                                 std::to_string(k));
    }
}

std::vector<Subspace> slot_subspaces(const EigenPlan& plan, const RectificationAnalysis& ra) {
  const auto& part = plan.partitioning;
  const Eigen::Index n = ra.plant().n();
  std::vector<Subspace> out;
  for (int k = 0; k <= part.p(); ++k) {
    std::vector<Subspace> parts{Subspace::zero(n)};
    for (int i = 0; i < part.d[k]; ++i) {
      const auto [a, b] = plan.pair(k, i);
      parts.push_back(Subspace{ra.intersection_at(k, a.to_double(), b.to_double()).vectors, n});
    }
    out.push_back(numlin::sum_subspaces(parts));
  }
  return out;
}

// ---------------------------------------------------------------- Rado

RadoResult check_rado(const std::vector<Subspace>& subspaces, const Partitioning& part, double rel_tol) {
  const int p = part.p();
  if (p > 20) throw SubsetExplosion(p);
  if (static_cast<int>(subspaces.size()) != p + 1) throw std::invalid_argument("one subspace per slot required");

  std::vector<int> members;
  RadoResult res;
  // Lexicographic walk over increasing sequences: {}, {1}, {1,2}, ..., {1,3}, ..., {p}.
  auto test = [&]() {
    std::vector<Subspace> parts{subspaces[0]};
    int need = part.d[0];
    for (int k : members) {
      parts.push_back(subspaces[k]);
      need += part.d[k];
    }
    return numlin::sum_subspaces(parts, rel_tol).dim() >= need;
  };
  auto rec = [&](auto&& self, int next) -> bool {
    if (!test()) {
      res.ok = false;
      res.failing = members;
      return false;
    }
    for (int k = next; k <= p; ++k) {
      members.push_back(k);
      const bool ok = self(self, k + 1);
      members.pop_back();
      if (!ok) return false;
    }
    return true;
  };
  rec(rec, 1);
  return res;
}

// ---------------------------------------------------------------- selection

Eigen::Index EigenSelection::index(int k, int i) const {
  for (std::size_t c = 0; c < columns.size(); ++c)
    if (columns[c] == std::make_pair(k, i)) return static_cast<Eigen::Index>(c);
  throw std::out_of_range("no column (" + std::to_string(k) + "," + std::to_string(i) + ")");
}

namespace {

void orient(Eigen::Ref<Vector> v, int k, const Matrix& c) {
  double ref = 0.0;
  if (k >= 1) {
    ref = c.row(k - 1).dot(v);
  }
  if (ref == 0.0 || std::abs(ref) <= 1e-12 * v.norm()) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (std::abs(v(i)) > 1e-12) {
        ref = v(i);
        break;
      }
  }
  if (ref < 0) v = -v;
}

}  // namespace

EigenSelection select_vectors(const EigenPlan& plan, const RectificationAnalysis& ra, SelectOptions opt) {
  const auto& part = plan.partitioning;
  const auto& plant = ra.plant();
  const Eigen::Index n = plant.n();
  EigenSelection sel;
  std::vector<Matrix> bases;
  for (int k = 0; k <= part.p(); ++k)
    for (int i = 0; i < part.d[k]; ++i) {
      const auto [a, b] = plan.pair(k, i);
      bases.push_back(ra.intersection_at(k, a.to_double(), b.to_double()).vectors);
      if (bases.back().cols() == 0) throw SelectionFailed(0, std::numeric_limits<double>::infinity());
      sel.columns.emplace_back(k, i);
    }
  if (static_cast<Eigen::Index>(bases.size()) != n) throw CompatibilityError("partitioning does not cover n modes");

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal;
  double best = std::numeric_limits<double>::infinity();
  Matrix v(n, n);
  for (int attempt = 1; attempt <= std::max(1, opt.max_retries); ++attempt) {
    for (Eigen::Index c = 0; c < n; ++c) {
      Vector g(bases[c].cols());
      for (Eigen::Index j = 0; j < g.size(); ++j) g(j) = normal(rng);
      Vector col = bases[c] * g;
      col.normalize();
      orient(col, sel.columns[c].first, plant.C());
      v.col(c) = col;
    }
    const double cond = numlin::condition_number(v);
    best = std::min(best, cond);
    if (cond < opt.max_condition) {
      sel.V = v;
      sel.condition = cond;
      sel.attempts = attempt;
      return sel;
    }
  }
  throw SelectionFailed(opt.max_retries, best);
}

// ---------------------------------------------------------------- feedback

Feedback moore_feedback(const EigenSelection& sel, const EigenPlan& plan, const sysmodel::SwitchedPlant& plant) {
  const Eigen::Index n = plant.n(), m = plant.m();
  Feedback fb;
  for (int q : {1, 2}) {
    const auto& sub = plant.sub(q);
    Matrix w(m, n);
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto [k, i] = sel.columns[c];
      const double lambda = plan.value(q, k, i).to_double();
      rosen::KernelBasis kb = rosen::kernel_at(sub, plant.selection(k), lambda);
      const Vector v = sel.V.col(c);
      const Matrix coord = numlin::solve_min_norm(kb.N, v);
      const double resid = (kb.N * coord - v).norm() / v.norm();
      if (!(resid <= 1e-7)) throw KernelMembershipFailed(q, k, i + 1, resid);
      w.col(c) = kb.M * coord;
    }
    // F V = -W, solved as V^T F^T = -W^T.
    const Matrix f = -numlin::solve(sel.V.transpose(), w.transpose()).transpose();
    const Matrix closed = sub.A + sub.B * f;
    const double scale = sub.A.norm() + sub.B.norm() * f.norm();
    double worst = 0.0;
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto [k, i] = sel.columns[c];
      const double lambda = plan.value(q, k, i).to_double();
      const Vector v = sel.V.col(c);
      worst = std::max(worst, (closed * v - lambda * v).norm() / v.norm());
    }
    if (!(worst <= 1e-6 * scale)) throw RectificationFailed(q, worst);
    fb.residual = std::max(fb.residual, worst);
    (q == 1 ? fb.F1 : fb.F2) = f;
    (q == 1 ? fb.W1 : fb.W2) = w;
  }
  return fb;
}

Vector Controller::modal_rates(int q) const {
  Vector out(static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c)
    out(static_cast<Eigen::Index>(c)) = plan.value(q, columns[c].first, columns[c].second).to_double();
  return out;
}

std::string Controller::x0_description() const {
  const auto& part = plan.partitioning;
  if (part.monotonic_shape()) return "all states";
  std::ostringstream os;
  os << "coefficient conditions on V^-1 (x0 - x_ss):";
  for (int k = 1; k <= part.p(); ++k) {
    os << " y" << k << ":";
    switch (part.d[k]) {
      case 0:
      case 1: os << "none"; break;
      case 2: os << "(a1+a2)a2>0"; break;
      default: os << "not(I|II|III)"; break;
    }
    if (k < part.p()) os << ";";
  }
  return os.str();
}

Controller synthesize(const RectificationAnalysis& ra, const Vector& r, const EigenPlan& plan,
                      SynthesisOptions opt) {
  const auto& plant = ra.plant();
  auto stage = [](int step, auto&& fn) {
    try {
      return fn();
    } catch (const SynthesisError&) {
      throw;
    } catch (const std::exception& e) {
      throw SynthesisError(step, e.what(), std::current_exception());
    }
  };

  stage(3, [&] {
    if (opt.mode == Mode::Monotonic && !plan.partitioning.monotonic_shape())
      throw CompatibilityError("monotonic design needs a partitioning of the form (n-p,1,...,1), got " +
                               plan.partitioning.to_string());
    check_pairs(plan, ra);
    return 0;
  });
  stage(4, [&] {
    RadoResult rado = check_rado(slot_subspaces(plan, ra), plan.partitioning);
    if (!rado.ok) throw RadoViolation(*rado.failing);
    return 0;
  });
  EigenSelection sel = stage(5, [&] { return select_vectors(plan, ra, opt.select); });
  Controller c = stage(6, [&] {
    Feedback fb = moore_feedback(sel, plan, plant);
    Controller out;
    out.ss = sysmodel::steady_state(plant, r);
    out.F1 = fb.F1;
    out.F2 = fb.F2;
    out.G1 = sysmodel::feedforward(fb.F1, out.ss, 1);
    out.G2 = sysmodel::feedforward(fb.F2, out.ss, 2);
    out.rectification_residual = fb.residual;
    return out;
  });
  c.V = sel.V;
  c.C = plant.C();
  c.plan = plan;
  c.columns = sel.columns;
  c.mode = opt.mode;
  c.condition = sel.condition;
  c.attempts = sel.attempts;
  return c;
}

// ---------------------------------------------------------------- X0 test

ShapeVerdict two_term_rule(double a1, double a2) {
  if (a1 == 0.0 && a2 == 0.0) return {true, false, "zero"};
  const double v = (a1 + a2) * a2;
  if (v > 0) return {true, false, "(a1+a2)a2>0"};
  if (v == 0) return {false, true, "(a1+a2)a2=0"};
  return {false, false, "(a1+a2)a2<0"};
}

ShapeVerdict three_term_rule(double a1, double a2, double a3) {
  if (a1 == 0.0 && a2 == 0.0 && a3 == 0.0) return {true, false, "zero"};
  const bool c1 = a1 * a2 > 0 && a1 * a3 < 0 && std::abs(a1 + a2) > std::abs(a3);
  const bool c2 = a2 * a3 > 0 && a1 * a2 < 0 && std::abs(a1) > std::abs(a2 + a3);
  const bool c3 = (a2 + a3) * a3 < 0;
  if (c1 || c2 || c3) {
    std::string held;
    if (c1) held += "I";
    if (c2) held += held.empty() ? "II" : ",II";
    if (c3) held += held.empty() ? "III" : ",III";
    return {false, false, "condition " + held + " holds"};
  }
  const bool r1 = a1 * a2 >= 0 && a1 * a3 <= 0 && std::abs(a1 + a2) >= std::abs(a3);
  const bool r2 = a2 * a3 >= 0 && a1 * a2 <= 0 && std::abs(a1) >= std::abs(a2 + a3);
  const bool r3 = (a2 + a3) * a3 <= 0;
  if (r1 || r2 || r3) return {false, true, "on the boundary of a condition"};
  return {true, false, "none of I, II, III"};
}

std::vector<OutputVerdict> x0_admissible(const Controller& c, const Vector& x0) {
  const Vector alpha = numlin::solve(c.V, x0 - c.ss.x_ss).col(0);
  const auto& part = c.plan.partitioning;
  std::vector<OutputVerdict> out;
  for (int k = 1; k <= part.p(); ++k) {
    OutputVerdict ov;
    ov.k = k;
    ov.d = part.d[k];
    for (int i = 0; i < part.d[k]; ++i) {
      Eigen::Index col = 0;
      while (c.columns[col] != std::make_pair(k, i)) ++col;
      ov.coefficients.push_back(alpha(col) * c.C.row(k - 1).dot(c.V.col(col)));
    }
    const auto& a = ov.coefficients;
    switch (ov.d) {
      case 0: ov.verdict = {true, false, "no modes"}; break;
      case 1: ov.verdict = {true, false, "single exponential"}; break;
      case 2: ov.verdict = two_term_rule(a[0], a[1]); break;
      default: ov.verdict = three_term_rule(a[0], a[1], a[2]); break;
    }
    out.push_back(std::move(ov));
  }
  return out;
}

}  // namespace swrect::design
