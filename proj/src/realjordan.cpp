#include "odeident/realjordan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "odeident/errors.hpp"

namespace odeident {

namespace {

using CVec = Eigen::VectorXcd;

struct SchurBlock {
  int start;
  int size;
};

std::vector<SchurBlock> schur_blocks(const Mat& T) {
  std::vector<SchurBlock> out;
  const int n = static_cast<int>(T.rows());
  int i = 0;
  while (i < n) {
    if (i + 1 < n && T(i + 1, i) != 0.0) {
      out.push_back({i, 2});
      i += 2;
    } else {
      out.push_back({i, 1});
      i += 1;
    }
  }
  return out;
}

// Eigenvalue with non-negative imaginary part of a standardized 2x2 Schur block.
Complex block_eigenvalue(const Mat& T, int s) {
  const double p = 0.5 * (T(s, s) - T(s + 1, s + 1));
  const double z = p * p + T(s + 1, s) * T(s, s + 1);
  if (z < 0.0) return {T(s + 1, s + 1) + p, std::sqrt(-z)};
  return {T(s + 1, s + 1) + p + std::copysign(std::sqrt(z), p), 0.0};
}

struct EigenItem {
  Complex value;
  int schur_block;
  bool upper;  // stored representative of its conjugate pair (or real)
};

std::vector<EigenItem> schur_eigen_items(const Mat& T,
                                         const std::vector<SchurBlock>& sb) {
  std::vector<EigenItem> items;
  for (int k = 0; k < static_cast<int>(sb.size()); ++k) {
    if (sb[k].size == 1) {
      items.push_back({Complex(T(sb[k].start, sb[k].start), 0.0), k, true});
    } else {
      const Complex lam = block_eigenvalue(T, sb[k].start);
      items.push_back({lam, k, true});
      items.push_back({std::conj(lam), k, false});
    }
  }
  return items;
}

// Single-linkage clusters of values closer than tol.
std::vector<std::vector<int>> cluster(const std::vector<Complex>& vals,
                                      double tol) {
  const int n = static_cast<int>(vals.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(vals[i] - vals[j]) < tol) parent[find(i)] = find(j);
  std::vector<std::vector<int>> groups;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[slot[r]].push_back(i);
  }
  return groups;
}

// Eigenvector of the quasi-triangular T for the eigenvalue lam sitting in
// Schur block `blk`, by back-substitution over the blocks above it.
CVec schur_eigenvector(const Mat& T, const std::vector<SchurBlock>& sb, int blk,
                       Complex lam) {
  const int n = static_cast<int>(T.rows());
  CVec y = CVec::Zero(n);
  const int s = sb[blk].start;
  const int sz = sb[blk].size;
  if (sz == 1) {
    y(s) = 1.0;
  } else {
    const Complex c00 = T(s, s) - lam, c01 = T(s, s + 1);
    const Complex c10 = T(s + 1, s), c11 = T(s + 1, s + 1) - lam;
    Eigen::Vector2cd r1(c01, -c00), r2(-c11, c10);
    y.segment(s, 2) = r1.norm() >= r2.norm() ? r1 : r2;
  }
  const double smin = std::numeric_limits<double>::epsilon() *
                      std::max(1.0, T.cwiseAbs().maxCoeff());
  const int end = s + sz;
  for (int j = blk - 1; j >= 0; --j) {
    const int js = sb[j].start, jz = sb[j].size;
    const int tail = end - (js + jz);
    CVec rhs = -(T.block(js, js + jz, jz, tail).cast<Complex>() *
                 y.segment(js + jz, tail));
    if (jz == 1) {
      Complex den = T(js, js) - lam;
      if (std::abs(den) < smin) den = smin;
      y(js) = rhs(0) / den;
    } else {
      const Complex m00 = T(js, js) - lam, m01 = T(js, js + 1);
      const Complex m10 = T(js + 1, js), m11 = T(js + 1, js + 1) - lam;
      Complex det = m00 * m11 - m01 * m10;
      if (std::abs(det) < smin) det = smin;
      y(js) = (m11 * rhs(0) - m01 * rhs(1)) / det;
      y(js + 1) = (-m10 * rhs(0) + m00 * rhs(1)) / det;
    }
    const double nrm = y.norm();
    if (nrm > 1e100) y /= nrm;
  }
  return y;
}

Eigen::Index argmax_abs(const Vec& v) {
  Eigen::Index idx = 0;
  v.cwiseAbs().maxCoeff(&idx);
  return idx;
}

Vec normalize_real(const Vec& v) {
  Vec out = v / v.norm();
  if (out(argmax_abs(out)) < 0.0) out = -out;
  return out;
}

// Columns (Re v, -Im v) of a complex eigenvector, phased so both have the same
// norm, then scaled to unit norm with a positive dominant entry in column one.
std::pair<Vec, Vec> normalize_pair(const CVec& v) {
  const Vec u0 = v.real(), w0 = v.imag();
  const double alpha = u0.squaredNorm() - w0.squaredNorm();
  const double beta = 2.0 * u0.dot(w0);
  const double phi = 0.5 * std::atan2(alpha, beta);
  const CVec vp = std::polar(1.0, phi) * v;
  const Vec u = vp.real(), w = vp.imag();
  Vec f, s;
  if (u.cwiseAbs().maxCoeff() >= w.cwiseAbs().maxCoeff()) {
    f = u;
    s = -w;
  } else {
    f = -w;
    s = -u;
  }
  if (f(argmax_abs(f)) < 0.0) {
    f = -f;
    s = -s;
  }
  const double scale = std::sqrt(0.5 * (f.squaredNorm() + s.squaredNorm()));
  return {f / scale, s / scale};
}

struct Column {
  EigenBlock block;
  Vec c1, c2;
};

}  // namespace

void require_finite(const Mat& M, const char* what) {
  if (!M.allFinite())
    throw Error(ErrorKind::NonFinite, std::string(what) + " contains NaN or Inf");
}

Mat EigenBlock::matrix() const {
  if (kind == BlockKind::Real) return Mat::Constant(1, 1, c);
  Mat J(2, 2);
  J << a, -b, b, a;
  return J;
}

Mat RealJordanForm::lambda() const {
  Mat L = Mat::Zero(dim(), dim());
  for (const auto& blk : blocks)
    L.block(blk.column_start, blk.column_start, blk.width(), blk.width()) =
        blk.matrix();
  return L;
}

std::vector<int> RealJordanForm::column_blocks() const {
  std::vector<int> out(dim());
  for (int k = 0; k < num_blocks(); ++k)
    for (int j = 0; j < blocks[k].width(); ++j)
      out[blocks[k].column_start + j] = k;
  return out;
}

std::vector<Complex> eigenvalues(const Mat& A) {
  require_finite(A, "matrix");
  if (A.rows() != A.cols())
    throw Error(ErrorKind::DimensionMismatch, "matrix must be square");
  Eigen::RealSchur<Mat> schur(A, false);
  const Mat& T = schur.matrixT();
  std::vector<Complex> out;
  for (const auto& it : schur_eigen_items(T, schur_blocks(T)))
    out.push_back(it.value);
  return out;
}

double spectral_radius(const std::vector<Complex>& eigs) {
  double r = 0.0;
  for (const auto& l : eigs) r = std::max(r, std::abs(l));
  return r;
}

double null_threshold(const Mat& A, double eig_tol) {
  return 100.0 * std::max(eig_tol, 1e-12) * std::max(1.0, A.norm());
}

std::vector<EigenGroup> eigenvalue_groups(const Mat& A, double eig_tol) {
  const auto eigs = eigenvalues(A);
  const double tol = eig_tol * std::max(1.0, spectral_radius(eigs));
  std::vector<EigenGroup> out;
  for (const auto& g : cluster(eigs, tol)) {
    Complex mean = 0.0;
    for (int i : g) mean += eigs[i];
    mean /= static_cast<double>(g.size());
    if (std::abs(mean.imag()) < tol) {
      out.push_back({Complex(mean.real(), 0.0), static_cast<int>(g.size())});
    } else if (mean.imag() > 0.0) {
      out.push_back({mean, static_cast<int>(g.size())});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const EigenGroup& x, const EigenGroup& y) {
    if (x.is_real() != y.is_real()) return x.is_real();
    if (x.value.real() != y.value.real()) return x.value.real() < y.value.real();
    return x.value.imag() < y.value.imag();
  });
  return out;
}

CMat eigenspace_basis(const Mat& A, Complex lambda, int m, double null_tol) {
  const int n = static_cast<int>(A.rows());
  if (m < 1 || m > n)
    throw Error(ErrorKind::InvalidArgument, "eigenspace dimension out of range");
  if (lambda.imag() == 0.0) {
    Mat M = A - lambda.real() * Mat::Identity(n, n);
    Eigen::BDCSVD<Mat> svd(M, Eigen::ComputeFullV);
    const double s = svd.singularValues()(n - m);
    if (s > null_tol)
      throw Error(ErrorKind::DefectiveBlock,
                  "eigenspace smaller than eigenvalue multiplicity",
                  {{"multiplicity", m}, {"singular_value", s}});
    return svd.matrixV().rightCols(m).cast<Complex>();
  }
  CMat M = A.cast<Complex>() - lambda * CMat::Identity(n, n);
  Eigen::BDCSVD<CMat> svd(M, Eigen::ComputeFullV);
  const double s = svd.singularValues()(n - m);
  if (s > null_tol)
    throw Error(ErrorKind::DefectiveBlock,
                "eigenspace smaller than eigenvalue multiplicity",
                {{"multiplicity", m}, {"singular_value", s}});
  return svd.matrixV().rightCols(m);
}

RealJordanForm real_jordan(const Mat& A, double eig_tol, bool allow_repeated) {
  require_finite(A, "matrix");
  if (A.rows() != A.cols() || A.rows() == 0)
    throw Error(ErrorKind::DimensionMismatch, "matrix must be square and nonempty");
  const int n = static_cast<int>(A.rows());

  Eigen::RealSchur<Mat> schur(A, true);
  const Mat& T = schur.matrixT();
  const Mat& Z = schur.matrixU();
  const auto sb = schur_blocks(T);
  const auto items = schur_eigen_items(T, sb);

  std::vector<Complex> vals;
  for (const auto& it : items) vals.push_back(it.value);
  const double tol = eig_tol * std::max(1.0, spectral_radius(vals));
  const auto groups = cluster(vals, tol);

  std::vector<Column> cols;
  for (const auto& g : groups) {
    if (g.size() == 1) {
      const auto& it = items[g[0]];
      if (!it.upper) continue;
      const CVec v = Z.cast<Complex>() * schur_eigenvector(T, sb, it.schur_block, it.value);
      Column col;
      if (it.value.imag() == 0.0) {
        col.block.kind = BlockKind::Real;
        col.block.c = it.value.real();
        col.c1 = normalize_real(v.real());
      } else {
        col.block.kind = BlockKind::ComplexPair;
        col.block.a = it.value.real();
        col.block.b = it.value.imag();
        std::tie(col.c1, col.c2) = normalize_pair(v);
      }
      cols.push_back(col);
      continue;
    }
    if (!allow_repeated) {
      double gap = std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < g.size(); ++i)
        for (size_t j = i + 1; j < g.size(); ++j)
          gap = std::min(gap, std::abs(vals[g[i]] - vals[g[j]]));
      throw Error(ErrorKind::RepeatedEigenvalues,
                  "eigenvalues closer than eig_tol; use the repeated-eigenvalue pathway",
                  {{"group_size", static_cast<double>(g.size())}, {"gap", gap}});
    }
    Complex mean = 0.0;
    for (int i : g) mean += vals[i];
    mean /= static_cast<double>(g.size());
    const int m = static_cast<int>(g.size());
    if (std::abs(mean.imag()) < tol) {
      const CMat V = eigenspace_basis(A, Complex(mean.real(), 0.0), m,
                                      null_threshold(A, eig_tol));
      for (int j = 0; j < m; ++j) {
        Column col;
        col.block.kind = BlockKind::Real;
        col.block.c = mean.real();
        col.c1 = normalize_real(V.col(j).real());
        cols.push_back(col);
      }
    } else if (mean.imag() > 0.0) {
      const CMat V = eigenspace_basis(A, mean, m, null_threshold(A, eig_tol));
      for (int j = 0; j < m; ++j) {
        Column col;
        col.block.kind = BlockKind::ComplexPair;
        col.block.a = mean.real();
        col.block.b = mean.imag();
        std::tie(col.c1, col.c2) = normalize_pair(V.col(j));
        cols.push_back(col);
      }
    }
  }

  std::stable_sort(cols.begin(), cols.end(), [](const Column& x, const Column& y) {
    const bool xr = x.block.kind == BlockKind::Real;
    const bool yr = y.block.kind == BlockKind::Real;
    if (xr != yr) return xr;
    if (xr) return x.block.c < y.block.c;
    if (x.block.a != y.block.a) return x.block.a < y.block.a;
    return x.block.b < y.block.b;
  });

  RealJordanForm jf;
  jf.A = A;
  jf.Q.resize(n, n);
  int col = 0;
  for (auto& c : cols) {
    c.block.column_start = col;
    jf.Q.col(col++) = c.c1;
    if (c.block.kind == BlockKind::ComplexPair) {
      jf.Q.col(col++) = c.c2;
      ++jf.K2;
    } else {
      ++jf.K1;
    }
    jf.blocks.push_back(c.block);
  }
  jf.Qinv = jf.Q.fullPivLu().inverse();
  return jf;
}

Mat invariant_subspace_basis(const RealJordanForm& jf,
                             const std::vector<int>& block_set) {
  if (block_set.empty())
    throw Error(ErrorKind::IndexOutOfRange, "block set is empty");
  int width = 0;
  for (int k : block_set) {
    if (k < 0 || k >= jf.num_blocks())
      throw Error(ErrorKind::IndexOutOfRange, "block index out of range",
                  {{"index", k}, {"num_blocks", jf.num_blocks()}});
    width += jf.blocks[k].width();
  }
  Mat V(jf.dim(), width);
  int c = 0;
  for (int k : block_set) {
    const auto& blk = jf.blocks[k];
    V.middleCols(c, blk.width()) = jf.Q.middleCols(blk.column_start, blk.width());
    c += blk.width();
  }
  return V;
}

double min_eigen_gap(const Mat& A) {
  const auto eigs = eigenvalues(A);
  double gap = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < eigs.size(); ++i)
    for (size_t j = i + 1; j < eigs.size(); ++j)
      gap = std::min(gap, std::abs(eigs[i] - eigs[j]));
  return gap;
}

}  // namespace odeident
