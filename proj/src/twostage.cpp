#include "odeident/twostage.hpp"

#include <cmath>
#include <limits>

#include <Eigen/SVD>
#include <Eigen/SparseCholesky>

#include "odeident/errors.hpp"

namespace odeident {

namespace {

constexpr double kMaxSystemCond = 1e14;

// Condition number of an SPD sparse matrix from power iteration (largest
// eigenvalue) and inverse iteration through its Cholesky factor (smallest).
double spd_condition(const SpMat& M, const Eigen::SimplicialLLT<SpMat>& llt) {
  const int n = static_cast<int>(M.rows());
  Vec x(n);
  for (int i = 0; i < n; ++i) x(i) = 1.0 + 0.5 * std::sin(1.0 + i);
  x.normalize();
  double lmax = 0.0;
  for (int it = 0; it < 200; ++it) {
    Vec y = M * x;
    const double nrm = y.norm();
    if (nrm == 0.0) return std::numeric_limits<double>::infinity();
    lmax = x.dot(y);
    x = y / nrm;
  }
  for (int i = 0; i < n; ++i) x(i) = 1.0 + 0.5 * std::cos(2.0 + 3.0 * i);
  x.normalize();
  double lmin = 0.0;
  for (int it = 0; it < 200; ++it) {
    Vec y = llt.solve(x);
    const double nrm = y.norm();
    if (!std::isfinite(nrm) || nrm == 0.0) return std::numeric_limits<double>::infinity();
    lmin = 1.0 / x.dot(y);
    x = y / nrm;
  }
  if (!(lmin > 0.0)) return std::numeric_limits<double>::infinity();
  return lmax / lmin;
}

}  // namespace

Mat SplineFit::evaluate(const Mat& Y, const std::vector<double>& ts, int deriv) const {
  const Mat C = Y * H;
  const SpMat Phi = basis.evaluate(ts, deriv);
  return C * Phi.transpose();
}

SmootherOperators simple_operators(const TimeGrid& grid) {
  double dt = 0.0;
  if (!grid.uniform_step(1e-10, &dt))
    throw Error(ErrorKind::NonUniformGrid, "simple operators need a uniform grid");
  const int n = grid.size();
  SmootherOperators ops;
  ops.kind = OperatorKind::Simple;
  ops.S = Mat::Identity(n, n);
  ops.L = Mat::Zero(n, n);
  for (int j = 0; j + 1 < n; ++j) {
    ops.L(j, j) = -1.0 / dt;
    ops.L(j + 1, j) = 1.0 / dt;
  }
  return ops;
}

SmootherOperators spline_operators(const TimeGrid& grid, double lambda, int order) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw Error(ErrorKind::InvalidArgument, "lambda must be finite and >= 0");
  if (order < 2) throw Error(ErrorKind::InvalidArgument, "spline order must be >= 2");
  auto fit = std::make_shared<SplineFit>(SplineFit{BSplineBasis(grid, order), {}, {}, {}, {}, 0.0});
  const auto& basis = fit->basis;
  const SpMat Phi = basis.evaluate(grid.points());
  fit->J = basis.integral(0, 0);
  fit->JD = basis.integral(1, 0);
  fit->R = order >= 3 ? basis.integral(2, 2) : SpMat(basis.size(), basis.size());

  SpMat M = SpMat(Phi.transpose() * Phi) + lambda * fit->R;
  M.makeCompressed();
  Eigen::SimplicialLLT<SpMat> llt(M);
  if (llt.info() != Eigen::Success) {
    SpMat jitter(M.rows(), M.cols());
    jitter.setIdentity();
    double trace = 0.0;
    for (int i = 0; i < M.rows(); ++i) trace += M.coeff(i, i);
    M += (1e-12 * trace) * jitter;
    llt.compute(M);
  }
  double cond = std::numeric_limits<double>::infinity();
  if (llt.info() == Eigen::Success) cond = spd_condition(M, llt);
  fit->system_cond = cond;
  if (!(cond <= kMaxSystemCond))
    throw Error(ErrorKind::IllConditionedBasis, "penalized basis system is ill-conditioned",
                {{"cond", cond}, {"lambda", lambda}});

  const Mat PhiT = Mat(Phi.transpose());
  fit->H = llt.solve(PhiT).transpose();

  SmootherOperators ops;
  ops.kind = OperatorKind::Spline;
  ops.lambda = lambda;
  ops.order = order;
  ops.basis_size = basis.size();
  const Mat HJ = fit->H * fit->J;
  const Mat HJD = fit->H * fit->JD;
  ops.S = HJ * fit->H.transpose();
  ops.S = 0.5 * (ops.S + ops.S.transpose()).eval();
  ops.L = HJD * fit->H.transpose();
  ops.fit = std::move(fit);
  return ops;
}

double frobenius_cond(const Mat& M) {
  if (M.size() == 0 || !M.allFinite()) return std::numeric_limits<double>::infinity();
  if (M.rows() != M.cols())
    throw Error(ErrorKind::DimensionMismatch, "condition number needs a square matrix");
  Eigen::JacobiSVD<Mat> svd(M);
  const Vec s = svd.singularValues();
  const double smax = s(0), smin = s(s.size() - 1);
  if (!(smax > 0.0) || smin < 1e-14 * smax) return std::numeric_limits<double>::infinity();
  return std::sqrt(s.squaredNorm()) * std::sqrt(s.cwiseInverse().squaredNorm());
}

EstimateReport two_stage_estimate(const Mat& Y, const SmootherOperators& ops,
                                  const std::optional<Mat>& truth) {
  require_finite(Y, "observations");
  if (Y.cols() != ops.n())
    throw Error(ErrorKind::DimensionMismatch, "observation count differs from operator size",
                {{"n_data", static_cast<double>(Y.cols())},
                 {"n_ops", static_cast<double>(ops.n())}});
  Mat G = Y * ops.S * Y.transpose();
  G = 0.5 * (G + G.transpose()).eval();
  const Mat C = Y * ops.L * Y.transpose();
  EstimateReport rep;
  rep.gram_cond = frobenius_cond(G);
  if (!std::isfinite(rep.gram_cond))
    throw Error(ErrorKind::SingularGram, "smoothed Gram matrix is numerically singular",
                {{"cond", rep.gram_cond}});
  rep.A_hat = G.colPivHouseholderQr().solve(C.transpose()).transpose();
  if (truth) rep.ree = ree(rep.A_hat, *truth);
  return rep;
}

EstimateReport two_stage_estimate(const Observations& obs, const SmootherOperators& ops,
                                  const std::optional<Mat>& truth) {
  return two_stage_estimate(obs.Y, ops, truth);
}

double ree(const Mat& A_hat, const Mat& A) {
  if (A_hat.rows() != A.rows() || A_hat.cols() != A.cols())
    throw Error(ErrorKind::DimensionMismatch, "estimate and truth shapes differ");
  const double na = A.norm();
  if (na == 0.0) throw Error(ErrorKind::ZeroTruth, "true matrix is zero");
  return (A_hat - A).norm() / na;
}

}  // namespace odeident
