#include "odeident/bspline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "odeident/errors.hpp"

namespace odeident {

void gauss_legendre(int q, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(q, 0.0);
  weights.assign(q, 0.0);
  for (int i = 0; i < (q + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= q; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (q == 1) p0 = 1.0;
      dp = q * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = -x;
    nodes[q - 1 - i] = x;
    weights[i] = weights[q - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

BSplineBasis::BSplineBasis(const TimeGrid& grid, int order) : order_(order) {
  if (order < 1) throw Error(ErrorKind::InvalidArgument, "spline order must be >= 1");
  const auto& t = grid.points();
  const int n = grid.size();
  knots_.assign(order, t.front());
  for (int j = 1; j + 1 < n; ++j) knots_.push_back(t[j]);
  knots_.insert(knots_.end(), order, t.back());
  size_ = static_cast<int>(knots_.size()) - order;
}

int BSplineBasis::first_active(double t) const {
  const int p = order_ - 1;
  // span i with knots[i] <= t < knots[i+1], clamped to the last nonempty span
  const int last = size_ - 1;
  if (t >= knots_[last + 1]) return last - p;
  if (t <= knots_[p]) return 0;
  const auto it = std::upper_bound(knots_.begin() + p, knots_.begin() + last + 1, t);
  const int span = static_cast<int>(it - knots_.begin()) - 1;
  return span - p;
}

Mat BSplineBasis::active_derivatives(double t, int nderiv) const {
  const int p = order_ - 1;
  const int span = first_active(t) + p;
  const auto& U = knots_;
  // Derivatives of the nonzero basis functions (Piegl & Tiller, A2.3).
  Mat ndu(p + 1, p + 1);
  std::vector<double> left(p + 1), right(p + 1);
  ndu(0, 0) = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = t - U[span + 1 - j];
    right[j] = U[span + j] - t;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu(j, r) = right[r + 1] + left[j - r];
      const double temp = ndu(r, j - 1) / ndu(j, r);
      ndu(r, j) = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu(j, j) = saved;
  }
  Mat ders = Mat::Zero(nderiv + 1, p + 1);
  for (int j = 0; j <= p; ++j) ders(0, j) = ndu(j, p);
  Mat a(2, p + 1);
  for (int r = 0; r <= p; ++r) {
    int s1 = 0, s2 = 1;
    a(0, 0) = 1.0;
    for (int k = 1; k <= std::min(nderiv, p); ++k) {
      double d = 0.0;
      const int rk = r - k, pk = p - k;
      if (r >= k) {
        a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
        d = a(s2, 0) * ndu(rk, pk);
      }
      const int j1 = rk >= -1 ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
        d += a(s2, j) * ndu(rk + j, pk);
      }
      if (r <= pk) {
        a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, r);
        d += a(s2, k) * ndu(r, pk);
      }
      ders(k, r) = d;
      std::swap(s1, s2);
    }
  }
  double fac = p;
  for (int k = 1; k <= std::min(nderiv, p); ++k) {
    ders.row(k) *= fac;
    fac *= (p - k);
  }
  return ders;
}

SpMat BSplineBasis::evaluate(const std::vector<double>& ts, int deriv) const {
  std::vector<Eigen::Triplet<double>> trip;
  for (size_t i = 0; i < ts.size(); ++i) {
    const int first = first_active(ts[i]);
    const Mat d = active_derivatives(ts[i], deriv);
    for (int j = 0; j < order_; ++j)
      trip.emplace_back(static_cast<int>(i), first + j, d(deriv, j));
  }
  SpMat M(static_cast<int>(ts.size()), size_);
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

SpMat BSplineBasis::integral(int da, int db) const {
  const int q = order_ + 1;
  std::vector<double> xs, ws;
  gauss_legendre(q, xs, ws);
  const int nd = std::max(da, db);
  std::vector<Eigen::Triplet<double>> trip;
  for (int i = order_ - 1; i < size_; ++i) {
    const double lo = knots_[i], hi = knots_[i + 1];
    if (!(hi > lo)) continue;
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    for (int g = 0; g < q; ++g) {
      const double t = mid + half * xs[g];
      const int first = first_active(t);
      const Mat d = active_derivatives(t, nd);
      const double w = ws[g] * half;
      for (int a = 0; a < order_; ++a)
        for (int b = 0; b < order_; ++b)
          trip.emplace_back(first + a, first + b, w * d(da, a) * d(db, b));
    }
  }
  SpMat M(size_, size_);
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

}  // namespace odeident
