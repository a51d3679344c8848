#include <doctest.h>

#include <cmath>

#include "odeident/dynamics.hpp"
#include "odeident/errors.hpp"
#include "odeident/fixtures.hpp"
#include "odeident/identcore.hpp"
#include "odeident/randgen.hpp"

using namespace odeident;

TEST_CASE("three-state system coefficients") {
  const auto jf = real_jordan(fixtures::three_state());
  const auto a = block_coefficients(jf, jf.Q * Eigen::Vector3d(2.0, -1.0, 0.0));
  CHECK(a.magnitudes[0] == doctest::Approx(2.0));
  CHECK(a.magnitudes[1] == doctest::Approx(1.0));
  CHECK(a.icis == doctest::Approx(1.0));
  const auto b = block_coefficients(jf, jf.Q * Eigen::Vector3d(0.0, -2.0, 3.0));
  CHECK(b.icis == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(b.magnitudes[1] == doctest::Approx(std::sqrt(13.0)));
}

TEST_CASE("rotated pair coefficients") {
  const auto jf = real_jordan(fixtures::rotated_pair(nullptr));
  const auto a = block_coefficients(jf, Eigen::Vector2d(1.0, 1.0));
  CHECK(a.magnitudes[1] == doctest::Approx(1.366).epsilon(1e-3));
  CHECK(a.magnitudes[0] == doctest::Approx(0.366).epsilon(1e-3));
  const auto b = block_coefficients(jf, Eigen::Vector2d(1.72, 1.0));
  CHECK(b.magnitudes[1] == doctest::Approx(1.990).epsilon(1e-3));
  CHECK(std::abs(b.magnitudes[0] - 0.006) < 1e-3);
}

TEST_CASE("verdicts") {
  const Mat A = fixtures::three_state();
  const auto jf = real_jordan(A);
  CHECK(is_identifiable(A, jf.Q * Eigen::Vector3d(1.0, 1.0, 1.0)).verdict == Verdict::Identifiable);
  CHECK(is_identifiable(A, jf.Q * Eigen::Vector3d(0.0, 1.0, 1.0)).verdict ==
        Verdict::UnidentifiableInitialCondition);
  const auto rep = is_identifiable(Mat::Identity(2, 2), Eigen::Vector2d(1.0, 0.0));
  CHECK(rep.verdict == Verdict::UnidentifiableRepeatedEigen);
  CHECK(std::isnan(rep.icis));
  const auto zero = is_identifiable(A, Vec::Zero(3));
  CHECK(zero.verdict == Verdict::UnidentifiableInitialCondition);
  CHECK(zero.icis == 0.0);
}

TEST_CASE("class errors") {
  const auto jf = real_jordan(fixtures::three_state());
  auto kind_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidArgument;
  };
  CHECK(kind_of([&] { unidentifiable_class(jf, jf.Q * Eigen::Vector3d(1.0, 1.0, 1.0)); }) ==
        ErrorKind::FullyIdentifiable);
  CHECK(kind_of([&] { unidentifiable_class(jf, Vec::Zero(3)); }) == ErrorKind::ZeroInitialCondition);
  CHECK(kind_of([&] { unidentifiable_class(jf, Vec::Zero(2)); }) == ErrorKind::DimensionMismatch);
  CHECK(kind_of([&] { repeated_eigen_class(fixtures::three_state(), Vec::Ones(3)); }) ==
        ErrorKind::NoRepeatedEigenvalue);
}

TEST_CASE("class member dimensions and identity at D = 0") {
  const auto jf = real_jordan(fixtures::three_state());
  const auto cls = unidentifiable_class(jf, jf.Q * Eigen::Vector3d(0.0, -2.0, 3.0));
  CHECK(cls.dof == 1);
  CHECK(cls.param_dim() == 1);
  CHECK((class_member(cls, Mat::Zero(1, 1)) - fixtures::three_state()).norm() < 1e-12);
  CHECK_THROWS_AS(class_member(cls, Mat::Zero(2, 2)), Error);
}

TEST_CASE("complex zero block gives four degrees of freedom") {
  const auto jf = real_jordan(fixtures::three_state());
  const Vec x0 = jf.Q * Eigen::Vector3d(1.5, 0.0, 0.0);
  const auto cls = unidentifiable_class(jf, x0);
  CHECK(cls.dof == 4);
  SeededRng rng(4);
  const Mat D = ginoe(2, rng);
  const auto grid = TimeGrid::uniform(0.0, 2.0, 41);
  const double diff = (solve(class_member(cls, D), x0, grid).X - solve(jf.A, x0, grid).X).cwiseAbs().maxCoeff();
  CHECK(diff < 1e-10);
}

TEST_CASE("repeated identity closed form") {
  const double th = 0.7;
  const Vec x0 = Eigen::Vector2d(std::cos(th), std::sin(th));
  const auto cls = repeated_eigen_class(Mat::Identity(2, 2), x0);
  CHECK(cls.multiplicity == 2);
  CHECK(cls.dof == 1);
  const double s = std::sin(th), c = std::cos(th);
  Mat expect(2, 2);
  expect << 1 + 0.5 * s * s, -0.5 * s * c, -0.5 * s * c, 1 + 0.5 * c * c;
  CHECK((class_member(cls, Mat::Constant(1, 1, 0.5)) - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("prior compatibility on the three-state system") {
  const auto jf = real_jordan(fixtures::three_state());
  const auto cls = unidentifiable_class(jf, jf.Q * Eigen::Vector3d(0.0, -2.0, 3.0));
  const auto proper = prior_compatibility(AffinePrior::fix_entries(3, {{0, 2, 0.0}}), cls);
  REQUIRE(proper.verdict == PriorVerdict::Proper);
  CHECK((*proper.member - fixtures::three_state_alternative()).cwiseAbs().maxCoeff() < 1e-10);
  const auto back = prior_compatibility(AffinePrior::fix_entries(3, {{0, 0, 0.0}}), cls);
  REQUIRE(back.verdict == PriorVerdict::Proper);
  CHECK((*back.member - fixtures::three_state()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(prior_compatibility(AffinePrior::fix_entries(3, {{0, 0, 0.0}, {0, 2, 0.0}}), cls).verdict ==
        PriorVerdict::Incompatible);
  const auto free = prior_compatibility(AffinePrior::fix_entries(3, {}), cls);
  CHECK(free.verdict == PriorVerdict::CompatibleNonUnique);
  CHECK(free.dof == 1);
}

TEST_CASE("inhomogeneous augmentation layout") {
  Mat A(2, 2);
  A << 1, 2, 3, 4;
  const Mat Ab = augment_inhomogeneous(A, Eigen::Vector2d(5, 6));
  REQUIRE(Ab.rows() == 3);
  CHECK(Ab.topLeftCorner(2, 2) == A);
  CHECK(Ab(0, 2) == 5.0);
  CHECK(Ab(1, 2) == 6.0);
  CHECK(Ab.row(2).isZero());
  CHECK_THROWS_AS(augment_inhomogeneous(A, Vec::Ones(3)), Error);
}
