#include <doctest.h>

#include <cmath>

#include "odeident/dynamics.hpp"
#include "odeident/errors.hpp"
#include "odeident/randgen.hpp"

using namespace odeident;

TEST_CASE("time grid validation") {
  CHECK_THROWS_AS(TimeGrid({0.0}), Error);
  CHECK_THROWS_AS(TimeGrid({0.0, 0.0, 1.0}), Error);
  CHECK_THROWS_AS(TimeGrid({0.0, std::nan(""), 1.0}), Error);
  const auto g = TimeGrid::uniform(0.0, 1.0, 11);
  double dt = 0.0;
  CHECK(g.uniform_step(1e-9, &dt));
  CHECK(dt == doctest::Approx(0.1));
  CHECK_FALSE(TimeGrid({0.0, 0.1, 0.5}).uniform_step(1e-9, &dt));
  const Vec w = g.trapezoid_weights();
  CHECK(w.sum() == doctest::Approx(1.0));
  CHECK(w(0) == doctest::Approx(0.05));
}

TEST_CASE("scalar decay matches closed form") {
  const auto g = TimeGrid::uniform(0.0, 3.0, 31);
  const auto t = solve(Mat::Constant(1, 1, -0.7), Vec::Constant(1, 2.0), g);
  for (int j = 0; j < g.size(); ++j) CHECK(t.X(0, j) == doctest::Approx(2.0 * std::exp(-0.7 * g[j])));
  CHECK(t.X(0, 0) == 2.0);
}

TEST_CASE("rotation preserves norm") {
  Mat A(2, 2);
  A << 0.0, -2.0, 2.0, 0.0;
  const auto t = solve(A, Eigen::Vector2d(1.0, 0.0), TimeGrid::uniform(0.0, 5.0, 51));
  for (int j = 0; j < t.X.cols(); ++j) CHECK(t.X.col(j).norm() == doctest::Approx(1.0));
}

TEST_CASE("overflow is reported") {
  try {
    solve(Mat::Constant(1, 1, 800.0), Vec::Ones(1), TimeGrid::uniform(0.0, 1.0, 3));
    FAIL("expected Overflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Overflow);
  }
}

TEST_CASE("noise is reproducible and has the requested scale") {
  const auto g = TimeGrid::uniform(0.0, 1.0, 2001);
  const auto t = solve(Mat::Zero(2, 2), Vec::Zero(2), g);
  const auto a = add_noise(t, 0.3, 5);
  const auto b = add_noise(t, 0.3, 5);
  CHECK(a.Y == b.Y);
  const double sd = std::sqrt(a.Y.squaredNorm() / a.Y.size());
  CHECK(sd == doctest::Approx(0.3).epsilon(0.05));
  CHECK(add_noise(t, 0.0, 5).Y == t.X);
}

TEST_CASE("gram matches analytic integrals") {
  const auto g = TimeGrid::uniform(0.0, 1.0, 2001);
  const auto t = solve(Mat::Constant(1, 1, 1.0), Vec::Ones(1), g);
  const Mat G = gram(t, t);
  CHECK(G(0, 0) == doctest::Approx((std::exp(2.0) - 1.0) / 2.0).epsilon(1e-6));
  const auto other = TimeGrid::uniform(0.0, 1.0, 11);
  CHECK_THROWS_AS(gram(g, t.X, other, Mat::Ones(1, 11)), Error);
}
