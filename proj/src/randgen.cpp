#include "odeident/randgen.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/QR>

#include "odeident/errors.hpp"
#include "odeident/identcore.hpp"

namespace odeident {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

SeededRng::SeededRng(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_(stream_id) {
  std::uint64_t h = stream_id;
  std::uint64_t x = seed ^ splitmix64(h);
  for (auto& word : s_) word = splitmix64(x);
}

std::uint64_t SeededRng::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double SeededRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double SeededRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double SeededRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

Vec standard_normal_vector(int d, SeededRng& rng) {
  Vec v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.normal();
  return v;
}

Mat ginoe(int d, SeededRng& rng) {
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "dimension must be >= 1");
  Mat G(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) G(i, j) = rng.normal();
  return G;
}

Mat goe(int d, SeededRng& rng) {
  const Mat G = ginoe(d, rng);
  return (G + G.transpose()) / std::numbers::sqrt2;
}

Mat haar_orthogonal(int d, SeededRng& rng) {
  const Mat G = ginoe(d, rng);
  Eigen::HouseholderQR<Mat> qr(G);
  Mat Q = qr.householderQ() * Mat::Identity(d, d);
  const Mat& R = qr.matrixQR();
  for (int j = 0; j < d; ++j)
    if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
  return Q;
}

Vec uniform_sphere(int d, SeededRng& rng) {
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "dimension must be >= 1");
  Vec z = standard_normal_vector(d, rng);
  double n = z.norm();
  while (n == 0.0) {
    z = standard_normal_vector(d, rng);
    n = z.norm();
  }
  return z / n;
}

Sim2Pair sim2_pair(SeededRng& rng) {
  Sim2Pair p;
  p.b = rng.uniform(2.0, 4.0);
  p.lambda3 = rng.uniform(-0.8, -0.4);
  p.lambda4 = rng.uniform(-2.0, -1.2);
  p.Q = haar_orthogonal(4, rng);

  Mat LA = Mat::Zero(4, 4);
  LA(0, 0) = -0.1;
  LA(0, 1) = p.b;
  LA(1, 0) = -p.b;
  LA(1, 1) = -0.1;
  LA(2, 2) = p.lambda3;
  Mat LB = LA;
  LA(3, 3) = p.lambda4;
  LB(3, 3) = p.lambda3;
  p.A = p.Q * LA * p.Q.transpose();
  p.B = p.Q * LB * p.Q.transpose();

  const auto jf = real_jordan(p.A);
  constexpr int kCap = 10000;
  for (p.resamples = 1; p.resamples <= kCap; ++p.resamples) {
    const Vec x = uniform_sphere(4, rng);
    if (block_coefficients(jf, x).icis > 0.2) {
      p.x0a = x;
      break;
    }
  }
  if (p.x0a.size() == 0)
    throw Error(ErrorKind::ResampleLimit, "no x0 with ICIS > 0.2 found",
                {{"attempts", kCap}});
  const Vec q4 = p.Q.col(3);
  const Vec proj = p.x0a - q4 * q4.dot(p.x0a);
  p.x0b = proj / proj.norm();
  return p;
}

}  // namespace odeident
