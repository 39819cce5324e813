// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support/controllers.hpp"
#include "support/random_plants.hpp"
#include "swrect/cli/commands.hpp"
#include "swrect/errors.hpp"
#include "swrect/simulate/simulate.hpp"

using namespace swrect;
using exact::MultiPoly;
using exact::Var;
using numlin::Matrix;
using numlin::Vector;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Report {
  int failed = 0;
  void line(int id, bool ok, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failed;
  }
};

double max_entry_error(const Vector& got, const std::vector<double>& want) {
  double worst = 0.0;
  for (std::size_t i = 0; i < want.size(); ++i) worst = std::max(worst, std::abs(got(static_cast<Eigen::Index>(i)) - want[i]));
  return worst;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string join(const std::vector<int>& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str() + ")";
}

// Sign scan of a sum of exponentials on [0, 50] with 1e5 points. The common
// factor exp(lambda_max t) is removed first so tails do not underflow.
bool scan_changes_sign(const std::vector<double>& a, const std::vector<double>& l) {
  const double top = *std::max_element(l.begin(), l.end());
  bool pos = false, neg = false;
  const int points = 100000;
  for (int s = 0; s < points; ++s) {
    const double t = 50.0 * s / (points - 1);
    double f = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) f += a[i] * std::exp((l[i] - top) * t);
    pos = pos || f > 0;
    neg = neg || f < 0;
    if (pos && neg) return true;
  }
  return false;
}

void criterion1(Report& rep) {
  const auto& f = fixtures::three_output();
  const auto t0 = Clock::now();
  const auto ss = sysmodel::steady_state(f.plant, f.r);
  const double took = seconds_since(t0);
  const double e = std::max({max_entry_error(ss.x_ss, {-9, 10, 0, 14.67, 59.11, 36.44, -6}),
                             max_entry_error(ss.u1_ss, {0, 13.33, 3.33, 0, 0}),
                             max_entry_error(ss.u2_ss, {-153.33, -65.67, 11, -72.89, 20})});
  double resid = (f.plant.C() * ss.x_ss - f.r).norm();
  for (int q : {1, 2}) resid = std::max(resid, (f.plant.sub(q).A * ss.x_ss + f.plant.sub(q).B * ss.u(q)).norm());
  rep.line(1, e <= 0.01 && resid <= 1e-8 && took < 1.0,
           "steady state, seven-state three-output plant: max entry error " + fmt("%.2e", e) + ", residual " +
               fmt("%.1e", resid) + ", " + fmt("%.3f", took) + " s");
}

void criterion2(Report& rep) {
  const auto& f = fixtures::two_output();
  const auto ss = sysmodel::steady_state(f.plant, f.r);
  const double e = max_entry_error(ss.x_ss, {7, -6, 0, -8, -26.67, -22.67, 0});
  rep.line(2, e <= 0.01, "steady state, two-output plant: max entry error " + fmt("%.2e", e));
}

void criterion3(Report& rep) {
  const auto t0 = Clock::now();
  rectify::RectificationAnalysis three(fixtures::three_output().plant);
  std::vector<int> exact3, sampled3;
  for (int k = 0; k <= 3; ++k) {
    exact3.push_back(three.d_k_exact(k));
    sampled3.push_back(three.d_k_sampled(k, 42));
  }
  const double took = seconds_since(t0);
  rectify::RectificationAnalysis two(fixtures::two_output().plant);
  const int exact0 = two.d_k_exact(0), sampled0 = two.d_k_sampled(0, 42);
  const std::vector<int> want{0, 5, 5, 5};
  rep.line(3, exact3 == want && sampled3 == want && exact0 == 5 && sampled0 == 5 && took < 300.0,
           "feasibility numbers: three-output exact " + join(exact3) + " sampled " + join(sampled3) +
               ", two-output d_0 exact " + std::to_string(exact0) + " sampled " + std::to_string(sampled0) + ", " +
               fmt("%.2f", took) + " s");
}

void criterion4(Report& rep) {
  auto& ra = fixtures::analysis_three();
  const MultiPoly l1 = MultiPoly::variable(Var::L1), l2 = MultiPoly::variable(Var::L2);
  const MultiPoly g2 = MultiPoly(12) * l2 - MultiPoly(5) * l1 + MultiPoly(2) * l1 * l2 + MultiPoly(10);
  const MultiPoly g1 = MultiPoly(74) * l1 - MultiPoly(36) * l2 + MultiPoly(13) * l1 * l2 +
                       MultiPoly(4) * l1 * l1 * l2 + MultiPoly(6) * l1 * l1 + MultiPoly(9);
  const auto c2 = ra.pair_locus(2)->excluded_curve;
  const auto c1 = ra.pair_locus(1)->excluded_curve;
  const bool ok2 = fixtures::proportional(c2, g2);
  const bool ok1 = fixtures::divides(g1, c1);
  rep.line(4, ok1 && ok2,
           "excluded locus: slot 2 curve " + c2.to_string() + (ok2 ? " matches" : " differs") +
               ", slot 1 curve " + (ok1 ? "contains" : "lacks") + " the degree-3 factor");
}

void criterion5(Report& rep) {
  using design::Mode;
  using design::Partitioning;
  auto& ra3 = fixtures::analysis_three();
  auto& ra2 = fixtures::analysis_two();
  std::vector<int> d3, d2;
  for (int k = 0; k <= 3; ++k) d3.push_back(ra3.d_k_exact(k));
  for (int k = 0; k <= 2; ++k) d2.push_back(ra2.d_k_exact(k));
  const auto list = design::enumerate_partitionings(7, d3, Mode::NonOvershoot);
  auto has = [&](std::vector<int> d) { return std::find(list.begin(), list.end(), Partitioning{std::move(d)}) != list.end(); };
  const bool hidden = std::any_of(list.begin(), list.end(), [](const Partitioning& p) { return p.d[0] > 0; });
  const auto mono = design::enumerate_partitionings(7, d2, Mode::Monotonic);
  const bool mono_ok = mono.size() == 1 && mono.front() == Partitioning{{5, 1, 1}};
  rep.line(5, has({0, 3, 3, 1}) && has({0, 3, 2, 2}) && !hidden && mono_ok,
           std::to_string(list.size()) + " non-overshooting partitionings" +
               (hidden ? " (some with d_0 > 0)" : ", none with d_0 > 0") + "; monotonic list " +
               (mono.empty() ? std::string("empty") : mono.front().to_string()) +
               (mono.size() > 1 ? " and more" : ""));
}

void criterion6(Report& rep) {
  const auto& f = fixtures::three_output();
  const auto t0 = Clock::now();
  rectify::RectificationAnalysis ra(f.plant);
  const design::Controller c = design::synthesize(ra, f.r, fixtures::plan_of(f));
  const double took = seconds_since(t0);
  io::ControllerFile cf{c, f.plant, f.x0, f.switching, {}};
  const auto checks = cli::cmd_verify(cf, cli::Flags{}).report["checks"];
  const double spectrum = checks["spectrum_error"], null = checks["nulling"], resid = checks["rectification_residual"];
  rep.line(6, resid <= 1e-6 && spectrum <= 1e-6 && null <= 1e-7 && took < 10.0,
           "synthesis: rectification residual " + fmt("%.1e", resid) + ", spectrum error " + fmt("%.1e", spectrum) +
               ", C_(k) nulling " + fmt("%.1e", null) + ", condition " + fmt("%.0f", c.condition) + ", " +
               fmt("%.2f", took) + " s");
}

void criterion7(Report& rep) {
  const auto& f = fixtures::three_output();
  const design::Controller& c = fixtures::controller_three();
  const auto sig = simulate::periodic_signal(0.3, 0.1, 3.0);
  const auto tr = simulate::simulate_modal(c, *f.x0, sig);
  const auto over = simulate::detect_overshoot(tr);
  const auto mono = simulate::detect_monotonic(tr);
  const auto adm = design::x0_admissible(c, *f.x0);
  bool adm_ok = true;
  std::string adm_text;
  for (const auto& v : adm) {
    adm_ok = adm_ok && v.verdict.pass;
    adm_text += " y" + std::to_string(v.k) + ":" + (v.verdict.pass ? "pass" : v.verdict.rule);
  }
  const bool shapes = !over[0] && !over[1] && mono[2];
  rep.line(7, shapes && adm_ok,
           std::string("shape verdicts, three-output run: y1 ") + (over[0] ? "overshoots" : "non-overshooting") +
               ", y2 " + (over[1] ? "overshoots" : "non-overshooting") + ", y3 " +
               (mono[2] ? "monotonic" : "not monotonic") + "; x0 coefficient rules" + adm_text);
}

void criterion8(Report& rep) {
  const auto& f = fixtures::two_output();
  const design::Controller& c = fixtures::controller_two();
  const auto sig = simulate::periodic_signal(0.3, 0.1, 3.0);
  const auto tr = simulate::simulate_modal(c, *f.x0, sig);
  const auto mono = simulate::detect_monotonic(tr);
  const double jump = simulate::derivative_jump(c, *f.x0, sig, tr, 2);
  rep.line(8, mono[0] && mono[1] && jump <= 1e-6,
           std::string("shape verdicts, two-output run: y1 ") + (mono[0] ? "monotonic" : "not monotonic") + ", y2 " +
               (mono[1] ? "monotonic" : "not monotonic") + ", y2 derivative jump " + fmt("%.1e", jump));
}

void criterion9(Report& rep) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> rate(-5.0, -0.1), gap(0.5, 5.0);

  // (a) two terms: the rule against the scan, both directions.
  int disagree_a = 0;
  for (int i = 0; i < 1000; ++i) {
    const double l2 = rate(rng), l1 = l2 - gap(rng);
    const double a1 = gauss(rng), a2 = gauss(rng);
    const bool rule = design::two_term_rule(a1, a2).pass;
    if (rule == scan_changes_sign({a1, a2}, {l1, l2})) ++disagree_a;
  }

  // (b) three terms: every pass must survive the scan.
  int false_pass = 0, passes = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> l{rate(rng), rate(rng), rate(rng)};
    std::sort(l.begin(), l.end());
    if (l[1] - l[0] < 1e-3 || l[2] - l[1] < 1e-3) {
      --i;
      continue;
    }
    const double a1 = gauss(rng), a2 = gauss(rng), a3 = gauss(rng);
    if (!design::three_term_rule(a1, a2, a3).pass) continue;
    ++passes;
    if (scan_changes_sign({a1, a2, a3}, l)) ++false_pass;
  }

  // (c) and (d) on both golden scenarios.
  double cross = 0.0, decay = 0.0;
  struct Golden {
    const io::PlantFile* file;
    const design::Controller* c;
  };
  for (const Golden g : {Golden{&fixtures::three_output(), &fixtures::controller_three()},
                         Golden{&fixtures::two_output(), &fixtures::controller_two()}}) {
    const auto sig = simulate::periodic_signal(0.3, 0.1, 3.0);
    const auto rk = simulate::simulate_rk4(*g.c, g.file->plant, *g.file->x0, sig, 1e-4);
    cross = std::max(cross, simulate::relative_sup_distance(rk, simulate::simulate_modal_at(*g.c, *g.file->x0, sig, rk.times)));
    double slowest = INFINITY;
    for (int q : {1, 2}) slowest = std::min(slowest, g.c->modal_rates(q).cwiseAbs().minCoeff());
    const double horizon = 20.0 / slowest;
    const double start = (*g.file->x0 - g.c->ss.x_ss).norm();
    for (std::uint64_t s = 0; s < 100; ++s) {
      const auto end = simulate::simulate_modal_at(*g.c, *g.file->x0, simulate::random_signal(1000 + s, horizon), {horizon});
      decay = std::max(decay, (end.states.back() - g.c->ss.x_ss).norm() / start);
    }
  }

  // (e) sampled against exact feasibility numbers on random plants.
  std::mt19937_64 prng(2024);
  int slots = 0, mismatches = 0, skipped = 0;
  for (int trial = 0; trial < 10; ++trial) {
    rectify::RectificationAnalysis ra(fixtures::random_plant(prng));
    for (int k = 0; k <= static_cast<int>(ra.plant().p()); ++k) {
      int exact_d = -1;
      try {
        exact_d = ra.d_k_exact(k);
      } catch (const SingularTransform&) {
        ++skipped;
        continue;
      }
      ++slots;
      for (std::uint64_t seed = 1; seed <= 20; ++seed)
        if (ra.d_k_sampled(k, seed) != exact_d) ++mismatches;
    }
  }

  const bool ok = disagree_a == 0 && false_pass == 0 && passes > 0 && cross <= 1e-6 && decay <= 1e-3 && mismatches == 0 && slots > 0;
  rep.line(9, ok,
           "properties: (a) " + std::to_string(disagree_a) + " of 1000 two-term disagreements; (b) " +
               std::to_string(false_pass) + " false passes among " + std::to_string(passes) +
               " three-term passes; (c) modal vs RK4 " + fmt("%.1e", cross) + "; (d) worst decay ratio " +
               fmt("%.1e", decay) + " over 200 random signals; (e) " + std::to_string(mismatches) +
               " mismatches over " + std::to_string(slots) + " slots x 20 seeds (" + std::to_string(skipped) +
               " slots without a generic echelon form)");
}

void criterion10(Report& rep) {
  auto full_run = [] {
    cli::Flags flags;
    flags.seed = 42;
    std::string out;
    out += cli::dump(cli::cmd_analyze(fixtures::three_output(), flags).report);
    const auto s = cli::cmd_synthesize(fixtures::three_output(), flags);
    out += cli::dump(s.report) + cli::dump(*s.controller);
    std::ostringstream csv;
    simulate::write_csv(csv, *s.trajectory);
    out += csv.str();
    flags.mode = design::Mode::Monotonic;
    const auto m = cli::cmd_synthesize(fixtures::two_output(), flags);
    out += cli::dump(m.report) + cli::dump(*m.controller);
    return out;
  };
  const std::string a = full_run(), b = full_run();
  rep.line(10, a == b && !a.empty(),
           "determinism: two full runs with seed 42 " + std::string(a == b ? "are" : "are not") +
               " byte-identical (" + std::to_string(a.size()) + " bytes)");
}

}  // namespace

int main() {
  Report rep;
  const std::vector<std::function<void(Report&)>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                           criterion6, criterion7, criterion8, criterion9, criterion10};
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    try {
      criteria[i](rep);
    } catch (const std::exception& e) {
      rep.line(static_cast<int>(i + 1), false, std::string("threw: ") + e.what());
    }
  }
  std::printf("%d of %zu criteria failed\n", rep.failed, criteria.size());
  return rep.failed == 0 ? 0 : 1;
}
