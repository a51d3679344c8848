#pragma once

#include <cmath>

#include "odeident/realjordan.hpp"

namespace odeident::fixtures {

// Three-state system with one real and one complex eigenvalue pair
// (-1 and 1/2 +- i sqrt(7)/2).
inline Mat three_state() {
  Mat A(3, 3);
  A << 0, 1, -1, 2, 0, 0, 3, 1, 0;
  return A;
}

// Member of the three-state class with a completely different sparsity pattern.
inline Mat three_state_alternative() {
  Mat A(3, 3);
  A << 1, -1, 0, 0, 4, -2, 2, 3, -1;
  return A;
}

// Symmetric 2-D system Rot(pi/6) diag(-1/2, -6) Rot(pi/6)'.
inline Mat rotated_pair(Mat* Q_out = nullptr) {
  const double c = std::sqrt(3.0) / 2.0, s = 0.5;
  Mat Q(2, 2);
  Q << c, -s, s, c;
  Mat L = Mat::Zero(2, 2);
  L(0, 0) = -0.5;
  L(1, 1) = -6.0;
  if (Q_out) *Q_out = Q;
  return Q * L * Q.transpose();
}

}  // namespace odeident::fixtures
