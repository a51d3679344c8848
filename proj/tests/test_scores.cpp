#include <doctest.h>

#include <cmath>

#include "odeident/dynamics.hpp"
#include "odeident/errors.hpp"
#include "odeident/randgen.hpp"
#include "odeident/scores.hpp"
#include "odeident/twostage.hpp"

using namespace odeident;

TEST_CASE("kappa uses the first d columns") {
  Mat Y(2, 4);
  Y << 1, 0, 5, 7, 0, 1, 3, 9;
  CHECK(stanhope_kappa(Y) == doctest::Approx(2.0));
  Mat Z = Y;
  Z.col(1) = Z.col(0);
  CHECK(std::isinf(stanhope_kappa(Z)));
}

TEST_CASE("W formula matches a direct evaluation") {
  SeededRng rng(21);
  const auto g = TimeGrid::uniform(0.0, 3.0, 31);
  const auto ops = spline_operators(g, 1e-3);
  Mat A(2, 2);
  A << -0.4, 1.2, -1.0, -0.3;
  const Mat X = solve(A, Eigen::Vector2d(1.0, -0.5), g).X;
  const auto w = w_function(X, A, ops);
  CHECK(w.value == doctest::Approx(w.trace_part + w.scalar_part));
  // Scaling X by c scales W by 1/c^2.
  const auto w2 = w_function(Mat(2.0 * X), A, ops);
  CHECK(w2.value == doctest::Approx(w.value / 4.0));
}

TEST_CASE("ident report fields") {
  const auto g = TimeGrid::uniform(0.0, 6.0, 61);
  const auto ops = spline_operators(g, 1e-3);
  Mat A(2, 2);
  A << -0.4, 1.2, -1.0, -0.3;
  const Vec x0 = Eigen::Vector2d(1.0, 0.2);
  const auto obs = add_noise(solve(A, x0, g), 0.05, 3);
  const auto r = ident_report(obs.Y, ops, A, x0);
  REQUIRE(r.icis.has_value());
  CHECK(*r.icis > 0.0);
  CHECK(r.d == 2);
  CHECK(r.n == 61);
  CHECK(r.scn > 1.0);
  CHECK(std::isfinite(r.pis));
  CHECK_FALSE(r.gram_singular);
  const auto bare = ident_report(obs.Y, ops);
  CHECK_FALSE(bare.icis.has_value());
  CHECK(bare.scn == r.scn);
}

TEST_CASE("singular data scores as infinite") {
  const auto g = TimeGrid::uniform(0.0, 1.0, 21);
  const auto ops = spline_operators(g, 1e-3);
  Mat Y(2, 21);
  for (int j = 0; j < 21; ++j) Y(0, j) = Y(1, j) = std::exp(-g[j]);
  const auto r = ident_report(Y, ops);
  CHECK(r.gram_singular);
  CHECK(std::isinf(r.scn));
  CHECK(std::isinf(r.pis));
}

TEST_CASE("icis_any handles repeated eigenvalues") {
  bool repeated = false;
  const double v = icis_any(Mat::Identity(2, 2), Eigen::Vector2d(3.0, 4.0), &repeated);
  CHECK(repeated);
  CHECK(v >= 0.0);
}
