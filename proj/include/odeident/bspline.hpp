#pragma once

#include <vector>

#include <Eigen/Sparse>

#include "odeident/dynamics.hpp"

namespace odeident {

using SpMat = Eigen::SparseMatrix<double>;

// B-spline basis of the given order (degree order-1) on a clamped knot vector
// with a simple interior knot at every grid point.
class BSplineBasis {
 public:
  BSplineBasis(const TimeGrid& grid, int order);

  int order() const { return order_; }
  int size() const { return size_; }
  const std::vector<double>& knots() const { return knots_; }

  // Index of the first basis function that is nonzero at t; the nonzero ones
  // are first .. first + order - 1.
  int first_active(double t) const;
  // (nderiv + 1) x order matrix: row k holds the k-th derivatives of the
  // active basis functions at t.
  Mat active_derivatives(double t, int nderiv) const;

  // n x B evaluation matrix at the grid points.
  SpMat evaluate(const std::vector<double>& ts, int deriv = 0) const;

  // Exact Gram-type integrals over the knot range by Gauss-Legendre quadrature:
  // entry (a, b) = integral of D^da phi_a * D^db phi_b.
  SpMat integral(int da, int db) const;

 private:
  int order_;
  int size_;
  std::vector<double> knots_;
};

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int q, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace odeident
