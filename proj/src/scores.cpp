#include "odeident/scores.hpp"

#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "odeident/errors.hpp"
#include "odeident/identcore.hpp"

namespace odeident {

double stanhope_kappa(const Mat& Y) {
  const Eigen::Index d = Y.rows();
  if (Y.cols() < d)
    throw Error(ErrorKind::TooFewTimePoints, "need at least d time points",
                {{"d", static_cast<double>(d)}, {"n", static_cast<double>(Y.cols())}});
  return frobenius_cond(Y.leftCols(d));
}

double scn(const Mat& Y, const SmootherOperators& ops) {
  if (Y.cols() != ops.n())
    throw Error(ErrorKind::DimensionMismatch, "observation count differs from operator size");
  Mat G = Y * ops.S * Y.transpose();
  G = 0.5 * (G + G.transpose()).eval();
  return frobenius_cond(G);
}

WValue w_function(const Mat& X, const Mat& A, const SmootherOperators& ops) {
  const Eigen::Index d = X.rows();
  if (X.cols() != ops.n() || A.rows() != d || A.cols() != d)
    throw Error(ErrorKind::DimensionMismatch, "W inputs have inconsistent shapes");
  const Mat& S = ops.S;
  const Mat& L = ops.L;
  Mat G = X * S * X.transpose();
  G = 0.5 * (G + G.transpose()).eval();
  const double cond = frobenius_cond(G);
  if (!std::isfinite(cond))
    throw Error(ErrorKind::SingularGram, "X S X' is numerically singular", {{"cond", cond}});
  const Mat N = G.colPivHouseholderQr().inverse();
  const Mat N2 = N * N;

  const Mat XS = X * S;
  const Mat XSt = X * S.transpose();
  const Mat XL = X * L;
  const Mat XLt = X * L.transpose();
  const Mat AtA = A.transpose() * A;
  const double dd = static_cast<double>(d);

  Mat M = XL * XLt.transpose();                                 // X L^2 X'
  M += dd * (XLt * XLt.transpose());                            // d X L'L X'
  M += XLt * XL.transpose();                                    // X (L')^2 X'
  M -= 2.0 * A * (XS * XLt.transpose());                        // A X S L X'
  M -= 2.0 * A.trace() * (XSt * XLt.transpose());               // tr(A) X S'L X'
  M -= 2.0 * (XSt * XL.transpose()) * A;                        // X S'L' X' A
  M += AtA * (XS * XSt.transpose());                            // A'A X S^2 X'
  M += AtA.trace() * (XSt * XSt.transpose());                   // tr(A'A) X S'S X'
  M += (XSt * XS.transpose()) * AtA;                            // X (S')^2 X' A'A

  const Mat AXS = A * XS;
  const double c = XL.squaredNorm() - 2.0 * (AXS.array() * XL.array()).sum() +
                   AXS.squaredNorm();

  WValue w;
  w.trace_part = (N2 * M).trace();
  w.scalar_part = c * N2.trace();
  w.value = w.trace_part + w.scalar_part;
  return w;
}

WValue pis(const Mat& Y, const SmootherOperators& ops) {
  const auto est = two_stage_estimate(Y, ops);
  return w_function(Y, est.A_hat, ops);
}

double icis_any(const Mat& A, const Vec& x0, bool* repeated) {
  try {
    const auto jf = real_jordan(A);
    if (repeated) *repeated = false;
    return block_coefficients(jf, x0).icis;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::RepeatedEigenvalues) throw;
  }
  if (repeated) *repeated = true;
  return block_coefficients(real_jordan(A, 1e-8, true), x0).icis;
}

IdentReport ident_report(const Mat& Y, const SmootherOperators& ops,
                         const std::optional<Mat>& A, const std::optional<Vec>& x0) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  IdentReport rep;
  rep.d = static_cast<int>(Y.rows());
  rep.n = static_cast<int>(Y.cols());
  if (ops.kind == OperatorKind::Spline) rep.lambda = ops.lambda;
  if (A && x0) rep.icis = icis_any(*A, *x0, &rep.repeated_eigenvalues);
  rep.kappa = stanhope_kappa(Y);
  rep.scn = scn(Y, ops);
  if (!std::isfinite(rep.scn)) {
    rep.gram_singular = true;
    rep.pis = inf;
    return rep;
  }
  try {
    const auto w = pis(Y, ops);
    rep.pis = std::isfinite(w.value) ? w.value : inf;
    rep.w_negative = w.negative();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingularGram) throw;
    rep.gram_singular = true;
    rep.scn = inf;
    rep.pis = inf;
  }
  return rep;
}

}  // namespace odeident
