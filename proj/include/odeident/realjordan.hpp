#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace odeident {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using Complex = std::complex<double>;

enum class BlockKind { Real, ComplexPair };

struct EigenBlock {
  BlockKind kind = BlockKind::Real;
  double c = 0.0;  // Real kind
  double a = 0.0;  // ComplexPair kind: block [[a, -b], [b, a]], b > 0
  double b = 0.0;
  int column_start = 0;

  int width() const { return kind == BlockKind::Real ? 1 : 2; }
  Mat matrix() const;
};

// A = Q * Lambda * Qinv with Lambda block diagonal. Real blocks come first
// (ascending), then complex pairs (ascending real part, then imaginary part).
struct RealJordanForm {
  Mat A;
  Mat Q;
  Mat Qinv;
  std::vector<EigenBlock> blocks;
  int K1 = 0;
  int K2 = 0;

  int dim() const { return static_cast<int>(Q.rows()); }
  int num_blocks() const { return static_cast<int>(blocks.size()); }
  Mat lambda() const;
  // k(i): block index owning column i.
  std::vector<int> column_blocks() const;
};

// Eigenvalues of A (conjugate pairs both present), read off a real Schur form.
std::vector<Complex> eigenvalues(const Mat& A);

double spectral_radius(const std::vector<Complex>& eigs);

// Groups of eigenvalues closer than tol * max(1, rho). Only one representative
// of each conjugate pair is kept (imaginary part >= 0).
struct EigenGroup {
  Complex value;
  int multiplicity = 1;
  bool is_real() const { return value.imag() == 0.0; }
};
std::vector<EigenGroup> eigenvalue_groups(const Mat& A, double eig_tol);

// Orthonormal basis (d x m, complex) of ker(A - lambda I). Throws DefectiveBlock
// when the kernel is smaller than m at the given singular-value threshold.
CMat eigenspace_basis(const Mat& A, Complex lambda, int m, double null_tol);

double null_threshold(const Mat& A, double eig_tol);

// With allow_repeated, a non-defective repeated group contributes one block per
// orthonormal eigenspace basis vector instead of raising RepeatedEigenvalues.
RealJordanForm real_jordan(const Mat& A, double eig_tol = 1e-8,
                           bool allow_repeated = false);

Mat invariant_subspace_basis(const RealJordanForm& jf,
                             const std::vector<int>& block_set);

double min_eigen_gap(const Mat& A);

void require_finite(const Mat& M, const char* what);

}  // namespace odeident
