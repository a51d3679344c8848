#pragma once

#include <memory>
#include <optional>

#include "odeident/bspline.hpp"
#include "odeident/dynamics.hpp"

namespace odeident {

enum class OperatorKind { Simple, Spline };

// Penalized regression pieces of a spline smoother: coefficients are Y * H.
struct SplineFit {
  BSplineBasis basis;
  Mat H;      // n x B
  SpMat J;    // <phi, phi>
  SpMat JD;   // <D phi, phi>
  SpMat R;    // <D^2 phi, D^2 phi>
  double system_cond = 0.0;

  // Fitted curves (or their derivatives) of the rows of Y at times ts: d x |ts|.
  Mat evaluate(const Mat& Y, const std::vector<double>& ts, int deriv = 0) const;
};

struct SmootherOperators {
  OperatorKind kind = OperatorKind::Simple;
  Mat S;  // n x n
  Mat L;  // n x n
  double lambda = 0.0;
  int basis_size = 0;
  int order = 0;
  std::shared_ptr<const SplineFit> fit;  // spline kind only

  int n() const { return static_cast<int>(S.rows()); }
};

SmootherOperators simple_operators(const TimeGrid& grid);

// Knots at every grid point; penalty on the integrated squared second
// derivative; L = H <D phi, phi> H'.
SmootherOperators spline_operators(const TimeGrid& grid, double lambda, int order = 4);

// Frobenius condition number ||M||_F ||M^-1||_F; +inf when the smallest
// singular value is below 1e-14 times the largest.
double frobenius_cond(const Mat& M);

struct EstimateReport {
  Mat A_hat;
  std::optional<double> ree;
  double gram_cond = 0.0;
};

EstimateReport two_stage_estimate(const Mat& Y, const SmootherOperators& ops,
                                  const std::optional<Mat>& truth = std::nullopt);
EstimateReport two_stage_estimate(const Observations& obs, const SmootherOperators& ops,
                                  const std::optional<Mat>& truth = std::nullopt);

double ree(const Mat& A_hat, const Mat& A);

}  // namespace odeident
