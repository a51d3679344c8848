#pragma once

#include <optional>
#include <tuple>
#include <vector>

#include "odeident/realjordan.hpp"

namespace odeident {

struct BlockCoefficients {
  std::vector<Vec> w0;  // one entry per block, length 1 or 2
  std::vector<double> magnitudes;
  double icis = 0.0;
};

BlockCoefficients block_coefficients(const RealJordanForm& jf, const Vec& x0);

enum class Verdict {
  Identifiable,
  UnidentifiableInitialCondition,
  UnidentifiableRepeatedEigen,
};
const char* verdict_name(Verdict v);

struct IdentVerdict {
  Verdict verdict = Verdict::Identifiable;
  double icis = 0.0;  // unset (NaN) for the repeated-eigenvalue verdict
  double gap = 0.0;   // min_eigen_gap(A)
};

IdentVerdict is_identifiable(const Mat& A, const Vec& x0, double icis_tol = 1e-8,
                             double eig_tol = 1e-8);

enum class ClassKind { InvariantSubspace, RepeatedEigen };

// Members are base + left * U * D * U' * right for a p x p free matrix D,
// p = U.cols(). For the invariant-subspace kind left/right are the Q columns
// and Qinv rows of the zero blocks and U = I; for the repeated-eigenvalue kind
// they are the eigenspace basis P1 and its dual rows R1.
struct UnidentifiableClass {
  ClassKind kind = ClassKind::InvariantSubspace;
  Mat base;
  Mat left;
  Mat right;
  Mat U;
  int dof = 0;

  // InvariantSubspace
  Mat Q, Qinv;
  Vec I0;                       // diagonal of I0, entries 0/1
  std::vector<int> zero_blocks; // S0

  // RepeatedEigen
  Complex eigenvalue{0.0, 0.0};
  int multiplicity = 0;
  Vec v;  // P^{-1} x0 restricted to the repeated block

  int param_dim() const { return static_cast<int>(U.cols()); }
};

UnidentifiableClass unidentifiable_class(const RealJordanForm& jf, const Vec& x0,
                                         double zero_tol = 1e-8);

Mat class_member(const UnidentifiableClass& cls, const Mat& D);

// Class for the `group`-th repeated eigenvalue group of A (in the order of
// repeated_groups).
UnidentifiableClass repeated_eigen_class(const Mat& A, const Vec& x0,
                                         double eig_tol = 1e-8, int group = 0);
std::vector<EigenGroup> repeated_groups(const Mat& A, double eig_tol = 1e-8);

struct AffinePrior {
  Mat S;   // L x d^2, acting on column-major vec(A)
  Mat A0;  // d x d

  // Constraints A(i, j) = value (0-based indices).
  static AffinePrior fix_entries(int d,
                                 const std::vector<std::tuple<int, int, double>>& entries);
};

enum class PriorVerdict { Proper, CompatibleNonUnique, Incompatible };
const char* prior_verdict_name(PriorVerdict v);

struct PriorResult {
  PriorVerdict verdict = PriorVerdict::Incompatible;
  std::optional<Mat> member;  // Proper only
  int dof = 0;                // remaining free parameters (CompatibleNonUnique)
  int rank = 0;               // rank of S~
};

PriorResult prior_compatibility(const AffinePrior& prior, const UnidentifiableClass& cls);

Mat augment_inhomogeneous(const Mat& A, const Vec& b);

}  // namespace odeident
