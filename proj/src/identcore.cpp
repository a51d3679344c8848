#include "odeident/identcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "odeident/errors.hpp"

namespace odeident {

namespace {

void check_x0(const Mat& A, const Vec& x0) {
  require_finite(A, "system matrix");
  require_finite(x0, "initial condition");
  if (A.rows() != A.cols() || x0.size() != A.rows())
    throw Error(ErrorKind::DimensionMismatch, "system matrix and x0 dimensions differ",
                {{"d", static_cast<double>(A.rows())},
                 {"x0_length", static_cast<double>(x0.size())}});
}

int numerical_rank(const Mat& M) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(M);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > 1e-10 * s(0)) ++r;
  return r;
}

Mat kron(const Mat& X, const Mat& Y) {
  Mat K(X.rows() * Y.rows(), X.cols() * Y.cols());
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.cols(); ++j)
      K.block(i * Y.rows(), j * Y.cols(), Y.rows(), Y.cols()) = X(i, j) * Y;
  return K;
}

Vec vec(const Mat& M) { return Eigen::Map<const Vec>(M.data(), M.size()); }

// Real basis of the invariant subspace for an eigenvalue group, in real Jordan
// pair layout for complex groups.
Mat real_layout(const CMat& V, bool real_group) {
  const int d = static_cast<int>(V.rows());
  const int m = static_cast<int>(V.cols());
  if (real_group) {
    Mat P(d, m);
    for (int j = 0; j < m; ++j) P.col(j) = V.col(j).real().normalized();
    return P;
  }
  Mat P(d, 2 * m);
  for (int j = 0; j < m; ++j) {
    P.col(2 * j) = V.col(j).real();
    P.col(2 * j + 1) = -V.col(j).imag();
  }
  return P;
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Identifiable: return "Identifiable";
    case Verdict::UnidentifiableInitialCondition: return "UnidentifiableInitialCondition";
    case Verdict::UnidentifiableRepeatedEigen: return "UnidentifiableRepeatedEigen";
  }
  return "Unknown";
}

const char* prior_verdict_name(PriorVerdict v) {
  switch (v) {
    case PriorVerdict::Proper: return "Proper";
    case PriorVerdict::CompatibleNonUnique: return "CompatibleNonUnique";
    case PriorVerdict::Incompatible: return "Incompatible";
  }
  return "Unknown";
}

BlockCoefficients block_coefficients(const RealJordanForm& jf, const Vec& x0) {
  if (x0.size() != jf.dim())
    throw Error(ErrorKind::DimensionMismatch, "x0 length differs from system dimension",
                {{"d", static_cast<double>(jf.dim())},
                 {"x0_length", static_cast<double>(x0.size())}});
  const Vec xt = jf.Qinv * x0;
  BlockCoefficients bc;
  bc.icis = std::numeric_limits<double>::infinity();
  for (const auto& blk : jf.blocks) {
    Vec w = xt.segment(blk.column_start, blk.width());
    const double mag = w.norm();
    bc.w0.push_back(std::move(w));
    bc.magnitudes.push_back(mag);
    bc.icis = std::min(bc.icis, mag);
  }
  return bc;
}

IdentVerdict is_identifiable(const Mat& A, const Vec& x0, double icis_tol,
                             double eig_tol) {
  check_x0(A, x0);
  IdentVerdict out;
  const auto eigs = eigenvalues(A);
  out.gap = min_eigen_gap(A);
  if (out.gap < eig_tol * std::max(1.0, spectral_radius(eigs))) {
    out.verdict = Verdict::UnidentifiableRepeatedEigen;
    out.icis = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const auto jf = real_jordan(A, eig_tol);
  out.icis = block_coefficients(jf, x0).icis;
  out.verdict = out.icis > icis_tol * x0.norm() ? Verdict::Identifiable
                                                : Verdict::UnidentifiableInitialCondition;
  return out;
}

UnidentifiableClass unidentifiable_class(const RealJordanForm& jf, const Vec& x0,
                                         double zero_tol) {
  const auto bc = block_coefficients(jf, x0);
  const double nx = x0.norm();
  if (nx == 0.0)
    throw Error(ErrorKind::ZeroInitialCondition, "x0 is the zero vector");
  UnidentifiableClass cls;
  cls.kind = ClassKind::InvariantSubspace;
  cls.base = jf.A;
  cls.Q = jf.Q;
  cls.Qinv = jf.Qinv;
  cls.I0 = Vec::Zero(jf.dim());
  std::vector<int> dims;
  for (int k = 0; k < jf.num_blocks(); ++k) {
    if (bc.magnitudes[k] > zero_tol * nx) continue;
    cls.zero_blocks.push_back(k);
    const auto& blk = jf.blocks[k];
    for (int j = 0; j < blk.width(); ++j) {
      cls.I0(blk.column_start + j) = 1.0;
      dims.push_back(blk.column_start + j);
    }
  }
  if (dims.empty())
    throw Error(ErrorKind::FullyIdentifiable, "no block coefficient is zero",
                {{"icis", bc.icis}});
  std::sort(dims.begin(), dims.end());
  const int d0 = static_cast<int>(dims.size());
  cls.left.resize(jf.dim(), d0);
  cls.right.resize(d0, jf.dim());
  for (int j = 0; j < d0; ++j) {
    cls.left.col(j) = jf.Q.col(dims[j]);
    cls.right.row(j) = jf.Qinv.row(dims[j]);
  }
  cls.U = Mat::Identity(d0, d0);
  cls.dof = d0 * d0;
  return cls;
}

Mat class_member(const UnidentifiableClass& cls, const Mat& D) {
  const int p = cls.param_dim();
  if (D.rows() != p || D.cols() != p)
    throw Error(ErrorKind::DimensionMismatch, "free-parameter matrix has the wrong shape",
                {{"expected", static_cast<double>(p)},
                 {"rows", static_cast<double>(D.rows())},
                 {"cols", static_cast<double>(D.cols())}});
  require_finite(D, "free-parameter matrix");
  return cls.base + cls.left * (cls.U * D * cls.U.transpose()) * cls.right;
}

std::vector<EigenGroup> repeated_groups(const Mat& A, double eig_tol) {
  std::vector<EigenGroup> out;
  for (const auto& g : eigenvalue_groups(A, eig_tol))
    if (g.multiplicity >= 2) out.push_back(g);
  return out;
}

UnidentifiableClass repeated_eigen_class(const Mat& A, const Vec& x0, double eig_tol,
                                         int group) {
  check_x0(A, x0);
  const auto groups = repeated_groups(A, eig_tol);
  if (groups.empty())
    throw Error(ErrorKind::NoRepeatedEigenvalue, "all eigenvalues are distinct");
  if (group < 0 || group >= static_cast<int>(groups.size()))
    throw Error(ErrorKind::IndexOutOfRange, "repeated-eigenvalue group out of range",
                {{"group", group}, {"groups", static_cast<double>(groups.size())}});
  const auto& g = groups[group];
  const int m = g.multiplicity;
  const double tol = null_threshold(A, eig_tol);

  const CMat right_vecs = eigenspace_basis(A, g.value, m, tol);
  const CMat left_vecs = eigenspace_basis(A.transpose(), std::conj(g.value), m, tol);
  const Mat P1 = real_layout(right_vecs, g.is_real());
  Mat Lb;
  if (g.is_real()) {
    Lb = left_vecs.real();
  } else {
    Lb.resize(A.rows(), 2 * m);
    Lb << left_vecs.real(), left_vecs.imag();
  }
  const Mat R1 = (Lb.transpose() * P1).fullPivLu().solve(Lb.transpose());

  UnidentifiableClass cls;
  cls.kind = ClassKind::RepeatedEigen;
  cls.base = A;
  cls.left = P1;
  cls.right = R1;
  cls.eigenvalue = g.value;
  cls.multiplicity = m;
  cls.v = R1 * x0;

  const int w = static_cast<int>(P1.cols());
  Mat V;
  if (g.is_real()) {
    V = cls.v;
  } else {
    Vec vbar(w);
    for (int j = 0; j < m; ++j) {
      vbar(2 * j) = -cls.v(2 * j + 1);
      vbar(2 * j + 1) = cls.v(2 * j);
    }
    V.resize(w, 2);
    V << cls.v, vbar;
  }
  Eigen::HouseholderQR<Mat> qr(V);
  const Mat Qfull = qr.householderQ() * Mat::Identity(w, w);
  cls.U = Qfull.rightCols(w - V.cols());
  cls.dof = static_cast<int>(cls.U.cols() * cls.U.cols());
  return cls;
}

AffinePrior AffinePrior::fix_entries(
    int d, const std::vector<std::tuple<int, int, double>>& entries) {
  AffinePrior p;
  p.S = Mat::Zero(static_cast<Eigen::Index>(entries.size()), d * d);
  p.A0 = Mat::Zero(d, d);
  for (size_t r = 0; r < entries.size(); ++r) {
    const auto [i, j, value] = entries[r];
    if (i < 0 || j < 0 || i >= d || j >= d)
      throw Error(ErrorKind::IndexOutOfRange, "prior entry index out of range");
    p.S(static_cast<Eigen::Index>(r), i + j * d) = 1.0;
    p.A0(i, j) = value;
  }
  return p;
}

PriorResult prior_compatibility(const AffinePrior& prior, const UnidentifiableClass& cls) {
  const Eigen::Index d = cls.base.rows();
  if (prior.S.cols() != d * d || prior.A0.rows() != d || prior.A0.cols() != d)
    throw Error(ErrorKind::DimensionMismatch, "prior shape does not match the class");
  PriorResult out;
  const Mat lhs = cls.left * cls.U;
  const Mat rhs = cls.U.transpose() * cls.right;
  const Mat St = prior.S * kron(rhs.transpose(), lhs);
  const Vec b = prior.S * vec(prior.A0 - cls.base);

  out.rank = numerical_rank(St);
  Mat aug(St.rows(), St.cols() + 1);
  aug << St, b;
  if (numerical_rank(aug) > out.rank) {
    out.verdict = PriorVerdict::Incompatible;
    return out;
  }
  if (out.rank == cls.dof) {
    out.verdict = PriorVerdict::Proper;
    const Vec dvec = St.completeOrthogonalDecomposition().solve(b);
    const int p = cls.param_dim();
    out.member = class_member(cls, Eigen::Map<const Mat>(dvec.data(), p, p));
    return out;
  }
  out.verdict = PriorVerdict::CompatibleNonUnique;
  out.dof = cls.dof - out.rank;
  return out;
}

Mat augment_inhomogeneous(const Mat& A, const Vec& b) {
  require_finite(A, "system matrix");
  require_finite(b, "inhomogeneous term");
  if (A.rows() != A.cols() || b.size() != A.rows())
    throw Error(ErrorKind::DimensionMismatch, "A and b dimensions differ");
  const Eigen::Index d = A.rows();
  Mat out = Mat::Zero(d + 1, d + 1);
  out.topLeftCorner(d, d) = A;
  out.topRightCorner(d, 1) = b;
  return out;
}

}  // namespace odeident
