#include <doctest.h>

#include <cmath>

#include "odeident/identcore.hpp"
#include "odeident/randgen.hpp"

using namespace odeident;

namespace {

// Reference xoshiro256** seeded through splitmix64, written out directly.
std::uint64_t splitmix(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

TEST_CASE("generator matches a reference xoshiro256** stream") {
  const std::uint64_t seed = 42, stream = 3;
  std::uint64_t sm = stream;
  std::uint64_t x = seed ^ splitmix(sm);
  std::uint64_t s[4];
  for (auto& v : s) v = splitmix(x);
  SeededRng rng(seed, stream);
  for (int k = 0; k < 100; ++k) {
    const std::uint64_t expect = rotl(s[1] * 5, 7) * 9;
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    REQUIRE(rng.next_u64() == expect);
  }
}

TEST_CASE("uniform and normal moments") {
  SeededRng rng(1);
  const int n = 200000;
  double su = 0.0, sn = 0.0, sn2 = 0.0;
  for (int k = 0; k < n; ++k) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
  }
  CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::abs(sn / n) < 0.01);
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("ensembles have the expected structure") {
  SeededRng rng(2);
  const Mat G = goe(6, rng);
  CHECK((G - G.transpose()).norm() == 0.0);
  const Mat H = haar_orthogonal(6, rng);
  CHECK((H.transpose() * H - Mat::Identity(6, 6)).norm() < 1e-13);
  const Vec s = uniform_sphere(7, rng);
  CHECK(s.norm() == doctest::Approx(1.0));
  CHECK(ginoe(4, rng).rows() == 4);
}

TEST_CASE("Haar samples have mean zero entries") {
  SeededRng rng(3);
  Mat acc = Mat::Zero(3, 3);
  const int n = 20000;
  for (int k = 0; k < n; ++k) acc += haar_orthogonal(3, rng);
  CHECK((acc / n).cwiseAbs().maxCoeff() < 0.03);
}

TEST_CASE("SIM2 pair construction") {
  SeededRng rng(4, 7);
  const auto p = sim2_pair(rng);
  CHECK((p.Q.transpose() * p.Q - Mat::Identity(4, 4)).norm() < 1e-12);
  CHECK(p.A.rows() == 4);
  CHECK(std::abs(p.Q.col(3).dot(p.x0b)) < 1e-12);
  CHECK(p.x0b.norm() == doctest::Approx(1.0));
  CHECK(block_coefficients(real_jordan(p.A), p.x0a).icis > 0.2);
  SeededRng again(4, 7);
  CHECK(sim2_pair(again).A == p.A);
}
