#pragma once

#include <optional>

#include "odeident/twostage.hpp"

namespace odeident {

// Stanhope's kappa: Frobenius condition number of the first d columns of Y.
double stanhope_kappa(const Mat& Y);

// Frobenius condition number of Y S Y'.
double scn(const Mat& Y, const SmootherOperators& ops);

// Leading-order MSE bound per unit noise variance of the two-stage estimate,
// evaluated at (X, A).
struct WValue {
  double value = 0.0;
  double trace_part = 0.0;   // tr(N^2 M)
  double scalar_part = 0.0;  // c * tr(N^2)
  bool negative() const { return value < 0.0; }
};
WValue w_function(const Mat& X, const Mat& A, const SmootherOperators& ops);

// W(Y | A_hat) with A_hat the two-stage estimate from Y.
WValue pis(const Mat& Y, const SmootherOperators& ops);

struct IdentReport {
  std::optional<double> icis;
  double kappa = 0.0;
  double scn = 0.0;
  double pis = 0.0;
  int d = 0;
  int n = 0;
  std::optional<double> sigma;
  std::optional<double> lambda;
  bool w_negative = false;
  bool gram_singular = false;
  bool repeated_eigenvalues = false;
};

// All four scores; singular Gram matrices give scn = pis = +inf. ICIS is
// filled when A and x0 are supplied (a repeated-eigenvalue A uses an
// orthonormal eigenspace basis and sets repeated_eigenvalues).
IdentReport ident_report(const Mat& Y, const SmootherOperators& ops,
                         const std::optional<Mat>& A = std::nullopt,
                         const std::optional<Vec>& x0 = std::nullopt);

// ICIS that tolerates non-defective repeated eigenvalues.
double icis_any(const Mat& A, const Vec& x0, bool* repeated = nullptr);

}  // namespace odeident
