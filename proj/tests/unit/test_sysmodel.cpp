#include <doctest.h>

#include <random>

#include "support/fixtures.hpp"
#include "swrect/errors.hpp"
#include "swrect/sysmodel/plant.hpp"

using namespace swrect;
using namespace swrect::sysmodel;
using exact::BigRational;
using exact::QMatrix;

namespace {

void check_close(const Vector& got, std::initializer_list<double> want, double tol) {
  REQUIRE(got.size() == static_cast<Eigen::Index>(want.size()));
  Eigen::Index i = 0;
  for (double w : want) {
    CHECK_MESSAGE(std::abs(got(i) - w) <= tol, "entry " << i << ": " << got(i) << " vs " << w);
    ++i;
  }
}

QMatrix random_int_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  std::uniform_int_distribution<long> d(-5, 5);
  QMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = BigRational(d(rng));
  return m;
}

}  // namespace

TEST_CASE("validate on the seven-state plant") {
  const auto& plant = fixtures::three_output().plant;
  ValidationReport rep = validate(plant);
  CHECK(rep.ok());
  const Check* dims = rep.find("n+p<2m");
  REQUIRE(dims != nullptr);
  CHECK(dims->status == CheckStatus::Warn);
  for (const char* name : {"rank B1", "rank B2", "rank C", "right-invertible 1", "right-invertible 2"}) {
    const Check* c = rep.find(name);
    REQUIRE_MESSAGE(c != nullptr, name);
    CHECK_MESSAGE(c->status == CheckStatus::Pass, name);
  }
  // Two outputs leave strict slack in the dimension inequality.
  CHECK(validate(fixtures::two_output().plant).find("n+p<2m")->status == CheckStatus::Pass);
}

TEST_CASE("validate flags dimension and rank failures") {
  QMatrix a{{-1, 0}, {0, -2}};
  QMatrix b{{1}, {1}};
  QMatrix c{{1, 0}};
  ValidationReport single = validate(SwitchedPlant::from_exact(a, b, a, b, c));
  CHECK(single.find("n+p<2m")->status == CheckStatus::Fail);
  CHECK_FALSE(single.ok());

  QMatrix dup{{1, 1}, {0, 0}};
  QMatrix c2{{1, 0}};
  ValidationReport rank = validate(SwitchedPlant::from_exact(a, dup, a, QMatrix{{1, 0}, {0, 1}}, c2));
  CHECK(rank.find("rank B1")->status == CheckStatus::Fail);
  CHECK(rank.find("rank B2")->status == CheckStatus::Pass);
}

TEST_CASE("drop_output") {
  const auto& plant = fixtures::three_output().plant;
  OutputSelection s3 = drop_output(plant.C_exact(), 3);
  REQUIRE(s3.p_k() == 2);
  CHECK(s3.C_exact.rows() == 2);
  for (std::size_t j = 0; j < 7; ++j) {
    CHECK(s3.C_exact(0, j) == plant.C_exact()(0, j));
    CHECK(s3.C_exact(1, j) == plant.C_exact()(1, j));
  }
  CHECK(drop_output(plant.C_exact(), 0).C_exact == plant.C_exact());
  CHECK_THROWS_AS(drop_output(plant.C_exact(), 4), IndexOutOfRange);
  CHECK_THROWS_AS(drop_output(plant.C_exact(), -1), IndexOutOfRange);

  OutputSelection empty = drop_output(QMatrix{{1, 2}}, 1);
  CHECK(empty.p_k() == 0);
  CHECK(empty.C.cols() == 2);

  // Reinserting the dropped row restores C.
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    QMatrix c = random_int_matrix(rng, 1 + trial % 4, 5);
    for (int k = 1; k <= static_cast<int>(c.rows()); ++k) {
      QMatrix rest = drop_output(c, k).C_exact;
      QMatrix back(c.rows(), c.cols());
      for (std::size_t i = 0, src = 0; i < c.rows(); ++i) {
        for (std::size_t j = 0; j < c.cols(); ++j)
          back(i, j) = (static_cast<int>(i) == k - 1) ? c(i, j) : rest(src, j);
        if (static_cast<int>(i) != k - 1) ++src;
      }
      CHECK(back == c);
    }
  }
}

TEST_CASE("invariant zeros") {
  QMatrix a{{-1, 0}, {0, -2}};
  Subsystem full = Subsystem::from_exact(1, a, QMatrix{{1, 0}, {0, 1}});
  OutputSelection c = drop_output(QMatrix{{1, 0}}, 0);
  CHECK_FALSE(is_invariant_zero(full, c, -2.0));
  for (int i = -40; i <= 40; ++i) CHECK_FALSE(is_invariant_zero(full, c, i / 8.0));

  // 2/(s+1) - 3/(s+2) = (1 - s)/((s+1)(s+2)) vanishes at s = 1.
  Subsystem siso = Subsystem::from_exact(1, a, QMatrix{{1}, {1}});
  OutputSelection c_zero = drop_output(QMatrix{{2, -3}}, 0);
  CHECK(is_invariant_zero(siso, c_zero, 1.0));
  CHECK_FALSE(is_invariant_zero(siso, c_zero, 0.5));
  CHECK(std::abs(rosenbrock_matrix(siso, c_zero, 1.0).determinant()) < 1e-12);

  // B square and invertible leaves no zeros anywhere.
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> grid(-10, 10);
  for (int trial = 0; trial < 5; ++trial) {
    QMatrix aa = random_int_matrix(rng, 3, 3);
    QMatrix bb = random_int_matrix(rng, 3, 3);
    for (std::size_t i = 0; i < 3; ++i) bb(i, i) += BigRational(20);
    Subsystem sub = Subsystem::from_exact(1, aa, bb);
    OutputSelection sel = drop_output(random_int_matrix(rng, 2, 3), 0);
    if (numlin::rank_tol(sel.C) < 2) continue;
    for (int i = 0; i < 100; ++i) CHECK_FALSE(is_invariant_zero(sub, sel, grid(rng)));
  }
}

TEST_CASE("steady state of the three-output plant") {
  const auto& f = fixtures::three_output();
  SteadyState ss = steady_state(f.plant, f.r);
  check_close(ss.x_ss, {-9, 10, 0, 14.67, 59.11, 36.44, -6}, 0.01);
  check_close(ss.u1_ss, {0, 13.33, 3.33, 0, 0}, 0.01);
  check_close(ss.u2_ss, {-153.33, -65.67, 11, -72.89, 20}, 0.01);
  for (int q : {1, 2})
    CHECK((f.plant.sub(q).A * ss.x_ss + f.plant.sub(q).B * ss.u(q)).norm() <= 1e-8);
  CHECK((f.plant.C() * ss.x_ss - f.r).norm() <= 1e-8);
}

TEST_CASE("steady state of the two-output plant") {
  const auto& f = fixtures::two_output();
  SteadyState ss = steady_state(f.plant, f.r);
  check_close(ss.x_ss, {7, -6, 0, -8, -26.67, -22.67, 0}, 0.01);
  check_close(ss.u1_ss, {0, -8, -2, 0, 0}, 0.01);
  check_close(ss.u2_ss, {88, 39, -5, 45.33, -12}, 0.01);
}

TEST_CASE("zero reference gives the zero steady state") {
  const auto& f = fixtures::three_output();
  SteadyState ss = steady_state(f.plant, Vector::Zero(3));
  CHECK(ss.x_ss.norm() <= 1e-12);
  CHECK(ss.u1_ss.norm() <= 1e-12);
  CHECK(ss.u2_ss.norm() <= 1e-12);
}

TEST_CASE("unreachable reference is inconsistent") {
  QMatrix a{{-1, 0}, {0, -1}};
  QMatrix b{{1}, {0}};
  // Both subsystems pin x2 = 0, so y = x2 cannot track 1.
  SwitchedPlant plant = SwitchedPlant::from_exact(a, b, a, b, QMatrix{{0, 1}});
  Vector r(1);
  r << 1;
  CHECK_THROWS_AS(steady_state(plant, r), Inconsistent);
}

TEST_CASE("feedforward") {
  const auto& f = fixtures::three_output();
  SteadyState ss = steady_state(f.plant, f.r);
  CHECK((feedforward(Matrix::Zero(5, 7), ss, 1) - ss.u1_ss).norm() == 0.0);
  SteadyState origin = ss;
  origin.x_ss.setZero();
  std::mt19937_64 rng(1);
  Matrix fr = fixtures::gaussian(rng, 5, 7);
  CHECK((feedforward(fr, origin, 2) - ss.u2_ss).norm() == 0.0);
  for (int q : {1, 2}) {
    const auto& s = f.plant.sub(q);
    Vector g = feedforward(fr, ss, q);
    Vector eq = (s.A + s.B * fr) * ss.x_ss + s.B * g;
    CHECK(eq.norm() <= 1e-6 * (1 + ss.x_ss.norm()));
  }
}
