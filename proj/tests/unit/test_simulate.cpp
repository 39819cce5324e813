#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "support/controllers.hpp"
#include "swrect/simulate/simulate.hpp"

using namespace swrect;
using namespace swrect::simulate;
using design::EigenPlan;
using design::Partitioning;
using exact::BigRational;
using exact::QMatrix;

namespace {

// x' = rate_q x with y = x, built directly so the closed loop is known.
struct Scalar {
  sysmodel::SwitchedPlant plant;
  Controller c;
};

Scalar scalar(long rate1, long rate2, double r = 0.0) {
  Scalar s{sysmodel::SwitchedPlant::from_exact(QMatrix{{0}}, QMatrix{{1}}, QMatrix{{0}}, QMatrix{{1}}, QMatrix{{1}}),
           {}};
  std::map<std::pair<int, int>, std::vector<BigRational>> lists{{{1, 0}, {}},
                                                                {{2, 0}, {}},
                                                                {{1, 1}, {BigRational(rate1)}},
                                                                {{2, 1}, {BigRational(rate2)}}};
  s.c.plan = EigenPlan::make(Partitioning{{0, 1}}, lists);
  s.c.columns = {{1, 0}};
  s.c.V = Matrix::Identity(1, 1);
  s.c.C = Matrix::Identity(1, 1);
  s.c.F1 = Matrix::Constant(1, 1, static_cast<double>(rate1));
  s.c.F2 = Matrix::Constant(1, 1, static_cast<double>(rate2));
  s.c.ss.x_ss = Vector::Constant(1, r);
  s.c.ss.u1_ss = s.c.ss.u2_ss = Vector::Zero(1);
  s.c.ss.r = Vector::Constant(1, r);
  s.c.G1 = Vector::Constant(1, -rate1 * r);
  s.c.G2 = Vector::Constant(1, -rate2 * r);
  return s;
}

Vector vec1(double v) { return Vector::Constant(1, v); }

}  // namespace

TEST_CASE("switching signals") {
  SwitchingSignal s = periodic_signal(0.3, 0.1, 1.0);
  REQUIRE(s.intervals() == 5);
  CHECK(s.modes == std::vector<int>{1, 2, 1, 2, 1});
  CHECK(s.breakpoints[3] == doctest::Approx(0.7));
  CHECK(s.end(4) == 1.0);
  CHECK(s.mode_at(0.0) == 1);
  CHECK(s.mode_at(0.3) == 2);
  CHECK(s.mode_at(0.35) == 2);
  CHECK(s.mode_at(1.0) == 1);
  CHECK_THROWS_AS(periodic_signal(0.0, 0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(periodic_signal(0.3, -1.0, 1.0), std::invalid_argument);

  CHECK(constant_signal(2, 5.0).modes == std::vector<int>{2});
  SwitchingSignal r1 = random_signal(7, 10.0), r2 = random_signal(7, 10.0);
  CHECK(r1.breakpoints == r2.breakpoints);
  CHECK(r1.modes == r2.modes);
  for (std::size_t j = 0; j < r1.intervals(); ++j) {
    CHECK(r1.end(j) - r1.start(j) > 0);
    CHECK(r1.end(j) - r1.start(j) <= 1.0);
  }
}

TEST_CASE("scalar decay matches the closed form") {
  Scalar s = scalar(-1, -1);
  SwitchingSignal sig = periodic_signal(0.3, 0.1, 3.0);
  Trajectory tr = simulate_modal(s.c, vec1(2.0), sig);
  CHECK(tr.times.size() == sig.intervals() * 64 + 1);
  CHECK(tr.times.back() == 3.0);
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    CHECK(std::abs(tr.states[i](0) - 2.0 * std::exp(-tr.times[i])) <= 1e-14);

  Trajectory rk = simulate_rk4(s.c, s.plant, vec1(2.0), sig, 1e-3);
  CHECK(rk.times.back() == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(std::abs(rk.states.back()(0) - 2.0 * std::exp(-3.0)) <= 1e-12);
}

TEST_CASE("switched scalar rates compose across breakpoints") {
  Scalar s = scalar(-1, -4);
  SwitchingSignal sig = periodic_signal(0.5, 0.25, 1.5);
  Trajectory tr = simulate_modal(s.c, vec1(1.0), sig, 8);
  // Two cycles: exponent -(2 * 0.5 + 4 * 2 * 0.25) = -3.
  CHECK(std::abs(tr.states.back()(0) - std::exp(-3.0)) <= 1e-14);
  CHECK(tr.modes.front() == 1);
  CHECK(tr.modes[8] == 2);
}

TEST_CASE("equilibrium stays put") {
  for (const Controller* c : {&fixtures::controller_three(), &fixtures::controller_two()}) {
    SwitchingSignal sig = periodic_signal(0.3, 0.1, 3.0);
    Trajectory tr = simulate_modal(*c, c->ss.x_ss, sig);
    for (const auto& e : tr.errors) CHECK(e.lpNorm<Eigen::Infinity>() <= 1e-9);
  }
}

TEST_CASE("modal and RK4 agree") {
  const auto& f = fixtures::three_output();
  const Controller& c = fixtures::controller_three();
  SwitchingSignal sig = periodic_signal(0.3, 0.1, 3.0);
  Trajectory rk = simulate_rk4(c, f.plant, *f.x0, sig, 1e-4);
  Trajectory modal = simulate_modal_at(c, *f.x0, sig, rk.times);
  CHECK(relative_sup_distance(rk, modal) <= 1e-6);
  CHECK(rk.modes == modal.modes);
}

TEST_CASE("overshoot and monotonic detectors") {
  Trajectory tr;
  tr.r = Vector::Constant(2, 10.0);
  auto add = [&](double e1, double e2) {
    Vector e(2);
    e << e1, e2;
    tr.errors.push_back(e);
  };
  add(5, 3);
  add(2, 4);
  add(-1e-6, 1);
  add(0, -0.5);
  // Output 1 dips by less than the slack 1e-5; output 2 crosses.
  CHECK(detect_overshoot(tr) == std::vector<bool>{false, true});
  CHECK(detect_monotonic(tr) == std::vector<bool>{true, false});

  Trajectory t2;
  t2.r = Vector::Constant(1, 0.0);
  for (double e : {3.0, 2.0, 2.5, 1.0}) t2.errors.push_back(vec1(e));
  CHECK(detect_overshoot(t2) == std::vector<bool>{false});
  CHECK(detect_monotonic(t2) == std::vector<bool>{false});
  CHECK_THROWS_AS(detect_overshoot(t2, -1.0), std::invalid_argument);

  Trajectory decay, crossing;
  decay.r = crossing.r = Vector::Zero(1);
  for (int i = 0; i <= 500; ++i) {
    const double t = i / 100.0;
    decay.errors.push_back(vec1(std::exp(-t)));
    crossing.errors.push_back(vec1((1 - 2 * t) * std::exp(-t)));
  }
  CHECK(detect_overshoot(decay) == std::vector<bool>{false});
  CHECK(detect_monotonic(decay) == std::vector<bool>{true});
  CHECK(detect_overshoot(crossing) == std::vector<bool>{true});
}

TEST_CASE("analytic shape on a scalar run") {
  Scalar s = scalar(-1, -3, 1.0);
  auto v = analytic_shape(s.c, vec1(0.0), periodic_signal(0.3, 0.1, 3.0));
  REQUIRE(v.size() == 1);
  CHECK(v[0].pass);
}

TEST_CASE("derivative jump") {
  Scalar same = scalar(-2, -2);
  SwitchingSignal sig = periodic_signal(0.3, 0.1, 3.0);
  Trajectory tr = simulate_modal(same.c, vec1(1.0), sig);
  CHECK(derivative_jump(same.c, vec1(1.0), sig, tr, 1) <= 1e-15);

  // Slope -x before and -4x after the first switch at x = exp(-0.3).
  Scalar diff = scalar(-1, -4);
  Trajectory td = simulate_modal(diff.c, vec1(1.0), sig);
  const double jump = derivative_jump(diff.c, vec1(1.0), sig, td, 1);
  // The steepest sample is just after that switch, slope 4 exp(-0.3).
  CHECK(jump == doctest::Approx(0.75));
}

TEST_CASE("csv layout") {
  Scalar s = scalar(-1, -2);
  Trajectory tr = simulate_modal(s.c, vec1(0.1), periodic_signal(0.3, 0.1, 0.4), 2);
  std::ostringstream os;
  write_csv(os, tr);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "t,x1,y1,e1,mode");
  int rows = 0;
  std::string first;
  while (std::getline(is, line)) {
    if (rows == 0) first = line;
    ++rows;
  }
  CHECK(rows == 5);
  CHECK(first == "0,0.10000000000000001,0.10000000000000001,-0.10000000000000001,1");
}

TEST_CASE("admissible initial states never overshoot") {
  const Controller& c = fixtures::controller_three();
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  int accepted = 0, draws = 0, overshoots = 0;
  while (accepted < 50 && draws < 100000) {
    ++draws;
    Vector alpha(7);
    for (Eigen::Index i = 0; i < 7; ++i) alpha(i) = g(rng);
    const Vector x0 = c.ss.x_ss + c.V * alpha;
    const auto verdicts = design::x0_admissible(c, x0);
    if (!std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.verdict.pass; })) continue;
    ++accepted;
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto tr = simulate_modal(c, x0, random_signal(100 * accepted + s, 10.0));
      for (bool o : detect_overshoot(tr)) overshoots += o ? 1 : 0;
    }
  }
  REQUIRE(accepted == 50);
  CHECK(overshoots == 0);
}
