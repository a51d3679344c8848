#include "odeident/dynamics.hpp"

#include <cmath>

#include "odeident/errors.hpp"
#include "odeident/expm.hpp"

namespace odeident {

TimeGrid::TimeGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2)
    throw Error(ErrorKind::InvalidGrid, "time grid needs at least two points",
                {{"n", static_cast<double>(points_.size())}});
  for (size_t j = 0; j < points_.size(); ++j) {
    if (!std::isfinite(points_[j]))
      throw Error(ErrorKind::NonFinite, "time grid contains NaN or Inf");
    if (j > 0 && !(points_[j] > points_[j - 1]))
      throw Error(ErrorKind::InvalidGrid, "time grid must be strictly increasing",
                  {{"index", static_cast<double>(j)}});
  }
}

TimeGrid TimeGrid::uniform(double t0, double t1, int n) {
  if (n < 2) throw Error(ErrorKind::InvalidGrid, "time grid needs at least two points");
  std::vector<double> pts(n);
  const double h = (t1 - t0) / (n - 1);
  for (int j = 0; j < n; ++j) pts[j] = t0 + j * h;
  pts[n - 1] = t1;
  return TimeGrid(std::move(pts));
}

bool TimeGrid::uniform_step(double rtol, double* dt) const {
  const double h = (back() - front()) / (size() - 1);
  for (int j = 1; j < size(); ++j)
    if (std::abs((points_[j] - points_[j - 1]) - h) > rtol * std::abs(h)) return false;
  if (dt) *dt = h;
  return true;
}

Vec TimeGrid::trapezoid_weights() const {
  const int n = size();
  Vec w = Vec::Zero(n);
  for (int j = 0; j + 1 < n; ++j) {
    const double h = points_[j + 1] - points_[j];
    w(j) += 0.5 * h;
    w(j + 1) += 0.5 * h;
  }
  return w;
}

Trajectory solve(const Mat& A, const Vec& x0, const TimeGrid& grid) {
  require_finite(A, "system matrix");
  require_finite(x0, "initial condition");
  if (A.rows() != A.cols() || x0.size() != A.rows())
    throw Error(ErrorKind::DimensionMismatch, "system matrix and x0 dimensions differ");
  Trajectory out{grid, Mat(A.rows(), grid.size())};
  for (int j = 0; j < grid.size(); ++j) {
    const double t = grid[j];
    if (t == 0.0) {
      out.X.col(j) = x0;
      continue;
    }
    const Mat E = expm(t * A);
    out.X.col(j) = E * x0;
    if (!out.X.col(j).allFinite())
      throw Error(ErrorKind::Overflow, "trajectory exceeds floating-point range",
                  {{"t", t}});
  }
  return out;
}

Observations add_noise(const Trajectory& traj, double sigma, SeededRng& rng) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw Error(ErrorKind::InvalidArgument, "sigma must be finite and >= 0");
  require_finite(traj.X, "trajectory");
  Observations obs{traj.grid, traj.X, sigma};
  for (Eigen::Index j = 0; j < obs.Y.cols(); ++j)
    for (Eigen::Index i = 0; i < obs.Y.rows(); ++i) obs.Y(i, j) += sigma * rng.normal();
  return obs;
}

Observations add_noise(const Trajectory& traj, double sigma, std::uint64_t seed) {
  SeededRng rng(seed);
  return add_noise(traj, sigma, rng);
}

Mat gram(const TimeGrid& grid_a, const Mat& Xa, const TimeGrid& grid_b, const Mat& Xb) {
  if (!(grid_a == grid_b) || Xa.cols() != grid_a.size() || Xb.cols() != grid_b.size())
    throw Error(ErrorKind::GridMismatch, "curves are sampled on different grids");
  const Vec w = grid_a.trapezoid_weights();
  Mat G = Xa * w.asDiagonal() * Xb.transpose();
  if (&Xa == &Xb || (Xa.rows() == Xb.rows() && Xa == Xb)) G = 0.5 * (G + G.transpose()).eval();
  return G;
}

Mat gram(const Trajectory& a, const Trajectory& b) { return gram(a.grid, a.X, b.grid, b.X); }

}  // namespace odeident
