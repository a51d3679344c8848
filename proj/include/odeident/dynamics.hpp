#pragma once

#include <cstdint>
#include <vector>

#include "odeident/randgen.hpp"
#include "odeident/realjordan.hpp"

namespace odeident {

class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> points);
  static TimeGrid uniform(double t0, double t1, int n);

  const std::vector<double>& points() const { return points_; }
  int size() const { return static_cast<int>(points_.size()); }
  double operator[](int j) const { return points_[j]; }
  double front() const { return points_.front(); }
  double back() const { return points_.back(); }

  // Common spacing if every step matches the mean step to relative tolerance.
  bool uniform_step(double rtol, double* dt) const;
  // Composite trapezoid weights.
  Vec trapezoid_weights() const;

  bool operator==(const TimeGrid& o) const { return points_ == o.points_; }

 private:
  std::vector<double> points_;
};

struct Trajectory {
  TimeGrid grid;
  Mat X;  // d x n
};

struct Observations {
  TimeGrid grid;
  Mat Y;  // d x n
  double sigma = 0.0;
};

// Column j is exp(t_j A) x0, each exponential formed independently.
Trajectory solve(const Mat& A, const Vec& x0, const TimeGrid& grid);

// i.i.d. N(0, sigma^2) noise, drawn column by column.
Observations add_noise(const Trajectory& traj, double sigma, SeededRng& rng);
Observations add_noise(const Trajectory& traj, double sigma, std::uint64_t seed);

Mat gram(const TimeGrid& grid_a, const Mat& Xa, const TimeGrid& grid_b, const Mat& Xb);
Mat gram(const Trajectory& a, const Trajectory& b);

}  // namespace odeident
