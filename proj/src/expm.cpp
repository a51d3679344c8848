#include "odeident/expm.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "odeident/errors.hpp"

namespace odeident {

namespace {

constexpr std::array<double, 4> kB3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kB5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kB7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                       25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kB9 = {17643225600.0, 8821612800.0, 2075673600.0,
                                        302702400.0,   30270240.0,   2162160.0,
                                        110880.0,      3960.0,       90.0,
                                        1.0};
constexpr std::array<double, 14> kB13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};

constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

template <size_t N>
Mat pade_low(const Mat& A, const std::array<double, N>& b) {
  const Eigen::Index n = A.rows();
  const Mat I = Mat::Identity(n, n);
  const Mat A2 = A * A;
  Mat Upoly = b[1] * I;
  Mat V = b[0] * I;
  Mat P = I;
  for (size_t k = 2; k < N; k += 2) {
    P = P * A2;
    V += b[k] * P;
    Upoly += b[k + 1] * P;
  }
  const Mat U = A * Upoly;
  return (V - U).partialPivLu().solve(V + U);
}

Mat pade13(const Mat& A) {
  const Eigen::Index n = A.rows();
  const Mat I = Mat::Identity(n, n);
  const auto& b = kB13;
  const Mat A2 = A * A;
  const Mat A4 = A2 * A2;
  const Mat A6 = A4 * A2;
  const Mat U = A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 +
                     b[5] * A4 + b[3] * A2 + b[1] * I);
  const Mat V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 +
                b[4] * A4 + b[2] * A2 + b[0] * I;
  return (V - U).partialPivLu().solve(V + U);
}

}  // namespace

Mat expm(const Mat& M) {
  require_finite(M, "matrix");
  if (M.rows() != M.cols())
    throw Error(ErrorKind::DimensionMismatch, "matrix must be square");
  const double norm1 = M.cwiseAbs().colwise().sum().maxCoeff();
  if (norm1 <= kTheta3) return pade_low(M, kB3);
  if (norm1 <= kTheta5) return pade_low(M, kB5);
  if (norm1 <= kTheta7) return pade_low(M, kB7);
  if (norm1 <= kTheta9) return pade_low(M, kB9);
  const int s = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / kTheta13))));
  Mat E = pade13(M / std::ldexp(1.0, s));
  for (int i = 0; i < s; ++i) E = E * E;
  return E;
}

}  // namespace odeident
