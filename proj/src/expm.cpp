#include "oment/linalg.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace oment {

namespace {

// Pade coefficients for degrees 3, 5, 7, 9, 13 and the matching 1-norm
// thresholds (Higham, "The scaling and squaring method for the matrix
// exponential revisited").
constexpr std::array<double, 4> kC3 = {120, 60, 12, 1};
constexpr std::array<double, 6> kC5 = {30240, 15120, 3360, 420, 30, 1};
constexpr std::array<double, 8> kC7 = {17297280, 8648640, 1995840, 277200,
                                       25200, 1512, 56, 1};
constexpr std::array<double, 10> kC9 = {17643225600., 8821612800., 2075673600.,
                                        302702400., 30270240., 2162160.,
                                        110880., 3960., 90., 1.};
constexpr std::array<double, 14> kC13 = {
    64764752532480000., 32382376266240000., 7771770303897600.,
    1187353796428800.,  129060195264000.,   10559470521600.,
    670442572800.,      33522128640.,       1323241920.,
    40840800.,          960960.,            16380.,
    182.,               1.};

constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

using MatX = Eigen::MatrixXcd;

template <size_t N>
void pade_uv(const MatX& A, const std::array<double, N>& c, MatX& U, MatX& V) {
  const auto n = A.rows();
  const MatX A2 = A * A;
  MatX evens = MatX::Identity(n, n) * c[0];
  MatX odds = MatX::Identity(n, n) * c[1];
  MatX pow = MatX::Identity(n, n);
  for (size_t k = 2; k + 1 < N; k += 2) {
    pow = pow * A2;
    evens += c[k] * pow;
    odds += c[k + 1] * pow;
  }
  U = A * odds;
  V = evens;
}

void pade13_uv(const MatX& A, MatX& U, MatX& V) {
  const auto n = A.rows();
  const auto& c = kC13;
  const MatX A2 = A * A;
  const MatX A4 = A2 * A2;
  const MatX A6 = A4 * A2;
  const MatX W1 = c[13] * A6 + c[11] * A4 + c[9] * A2;
  const MatX W2 =
      c[7] * A6 + c[5] * A4 + c[3] * A2 + c[1] * MatX::Identity(n, n);
  const MatX Z1 = c[12] * A6 + c[10] * A4 + c[8] * A2;
  const MatX Z2 =
      c[6] * A6 + c[4] * A4 + c[2] * A2 + c[0] * MatX::Identity(n, n);
  U = A * (A6 * W1 + W2);
  V = A6 * Z1 + Z2;
}

MatX expm_impl(const MatX& A) {
  if (!A.allFinite()) {
    throw std::domain_error("matrix_exponential: non-finite entries");
  }
  const auto n = A.rows();
  const double norm = A.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm
  MatX U, V;
  int squarings = 0;
  if (norm <= kTheta3) {
    pade_uv(A, kC3, U, V);
  } else if (norm <= kTheta5) {
    pade_uv(A, kC5, U, V);
  } else if (norm <= kTheta7) {
    pade_uv(A, kC7, U, V);
  } else if (norm <= kTheta9) {
    pade_uv(A, kC9, U, V);
  } else {
    squarings = std::max(0, static_cast<int>(
                                std::ceil(std::log2(norm / kTheta13))));
    const MatX As = A / std::pow(2.0, squarings);
    pade13_uv(As, U, V);
  }
  MatX F = (V - U).partialPivLu().solve(V + U);
  for (int s = 0; s < squarings; ++s) F = F * F;
  return F;
}

}  // namespace

Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd& A) {
  return expm_impl(A);
}

Mat7 matrix_exponential(const Mat7& A) {
  return Mat7(expm_impl(Eigen::MatrixXcd(A)));
}

}  // namespace oment
