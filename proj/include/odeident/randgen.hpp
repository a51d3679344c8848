#pragma once

#include <array>
#include <cstdint>
#include <limits>

#include "odeident/realjordan.hpp"

namespace odeident {

// xoshiro256** seeded through splitmix64 from (seed, stream_id). Normal
// variates use the Box-Muller transform, returning the cosine branch first and
// caching the sine branch. Matrices are filled column-major.
class SeededRng {
 public:
  using result_type = std::uint64_t;

  explicit SeededRng(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t next_u64();
  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  double normal();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

 private:
  std::array<std::uint64_t, 4> s_{};
  std::uint64_t seed_;
  std::uint64_t stream_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

Vec standard_normal_vector(int d, SeededRng& rng);
Mat ginoe(int d, SeededRng& rng);
Mat goe(int d, SeededRng& rng);
Mat haar_orthogonal(int d, SeededRng& rng);
Vec uniform_sphere(int d, SeededRng& rng);

struct Sim2Pair {
  Mat A;
  Mat B;
  Mat Q;
  Vec x0a;
  Vec x0b;
  double b = 0.0;
  double lambda3 = 0.0;
  double lambda4 = 0.0;
  int resamples = 0;
};

// Draw order: b, lambda3, lambda4, Q, then x0a candidates until ICIS > 0.2.
Sim2Pair sim2_pair(SeededRng& rng);

}  // namespace odeident
