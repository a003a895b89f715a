#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <stdexcept>

#include "oment/linalg.hpp"

using namespace oment;
using Eigen::MatrixXcd;

namespace {

MatrixXcd taylor_exp(const MatrixXcd& a, int terms) {
  MatrixXcd sum = MatrixXcd::Identity(a.rows(), a.cols());
  MatrixXcd pow = sum;
  for (int k = 1; k <= terms; ++k) {
    pow = (pow * a) / static_cast<double>(k);
    sum += pow;
  }
  return sum;
}

MatrixXcd random_complex(int n, unsigned seed, double scale) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m(i, j) = scale * cd(u(rng), u(rng));
    }
  }
  return m;
}

}  // namespace

TEST_CASE("identity and diagonal cases") {
  const MatrixXcd z = MatrixXcd::Zero(4, 4);
  CHECK((matrix_exponential(z) - MatrixXcd::Identity(4, 4)).norm() == 0.0);

  MatrixXcd d = MatrixXcd::Zero(3, 3);
  d(0, 0) = cd(1.0, 0.0);
  d(1, 1) = cd(0.0, kTwoPi / 4.0);  // e^{i pi/2} = i
  d(2, 2) = cd(-2.0, 1.0);
  const MatrixXcd e = matrix_exponential(d);
  CHECK(std::abs(e(0, 0) - std::exp(cd(1.0, 0.0))) < 1e-14);
  CHECK(std::abs(e(1, 1) - cd(0.0, 1.0)) < 1e-14);
  CHECK(std::abs(e(2, 2) - std::exp(cd(-2.0, 1.0))) < 1e-14);
  CHECK(std::abs(e(0, 1)) == 0.0);
}

TEST_CASE("nilpotent and rotation generators") {
  MatrixXcd n = MatrixXcd::Zero(2, 2);
  n(0, 1) = 1.0;
  const MatrixXcd en = matrix_exponential(n);
  CHECK(std::abs(en(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(en(0, 1) - 1.0) < 1e-15);
  CHECK(std::abs(en(1, 0)) < 1e-15);
  CHECK(std::abs(en(1, 1) - 1.0) < 1e-15);

  const double theta = 0.7;
  MatrixXcd g = MatrixXcd::Zero(2, 2);
  g(0, 1) = -theta;
  g(1, 0) = theta;
  const MatrixXcd r = matrix_exponential(g);
  CHECK(std::abs(r(0, 0) - std::cos(theta)) < 1e-14);
  CHECK(std::abs(r(0, 1) + std::sin(theta)) < 1e-14);
  CHECK(std::abs(r(1, 0) - std::sin(theta)) < 1e-14);
}

TEST_CASE("agrees with the Taylor series at small norm") {
  for (unsigned seed : {1u, 2u, 3u}) {
    const MatrixXcd a = random_complex(7, seed, 0.15);
    const MatrixXcd e = matrix_exponential(a);
    const MatrixXcd t = taylor_exp(a, 30);
    CHECK((e - t).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("scaling-and-squaring branch on well-conditioned generators") {
  // Large skew-Hermitian generator: the exact exponential is unitary, so the
  // identity below is perfectly conditioned even at 1-norm ~100.
  MatrixXcd h = random_complex(7, 11u, 8.0);
  h = MatrixXcd(0.5 * (h + h.adjoint()));
  const MatrixXcd a = cd(0.0, -1.0) * h;
  const MatrixXcd e = matrix_exponential(a);
  const MatrixXcd em = matrix_exponential(MatrixXcd(-a));
  CHECK((e * em - MatrixXcd::Identity(7, 7)).cwiseAbs().maxCoeff() < 1e-11);
  CHECK((e * e.adjoint() - MatrixXcd::Identity(7, 7)).cwiseAbs().maxCoeff() <
        1e-11);

  // Jordan block with a large eigenvalue: exp = e^lambda [[1,1],[0,1]].
  const cd lambda(-30.0, 5.0);
  MatrixXcd j = MatrixXcd::Zero(2, 2);
  j(0, 0) = j(1, 1) = lambda;
  j(0, 1) = 1.0;
  const MatrixXcd ej = matrix_exponential(j);
  const cd scale = std::exp(lambda);
  CHECK(std::abs(ej(0, 0) - scale) / std::abs(scale) < 1e-11);
  CHECK(std::abs(ej(0, 1) - scale) / std::abs(scale) < 1e-11);
  CHECK(std::abs(ej(1, 0)) / std::abs(scale) < 1e-11);

  // Doubling identity spanning two degree branches.
  const MatrixXcd b = random_complex(6, 12u, 0.5);
  const MatrixXcd eb = matrix_exponential(b);
  const MatrixXcd e2b = matrix_exponential(MatrixXcd(2.0 * b));
  CHECK((eb * eb - e2b).cwiseAbs().maxCoeff() /
            e2b.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("adjoint commutes with exponentiation") {
  const MatrixXcd a = random_complex(5, 4u, 1.3);
  const MatrixXcd lhs = matrix_exponential(MatrixXcd(a.adjoint()));
  const MatrixXcd rhs = matrix_exponential(a).adjoint();
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("block-diagonal structure is preserved") {
  MatrixXcd a = MatrixXcd::Zero(5, 5);
  const MatrixXcd b1 = random_complex(2, 7u, 0.9);
  const MatrixXcd b2 = random_complex(3, 8u, 0.9);
  a.topLeftCorner(2, 2) = b1;
  a.bottomRightCorner(3, 3) = b2;
  const MatrixXcd e = matrix_exponential(a);
  CHECK((e.topLeftCorner(2, 2) - matrix_exponential(b1)).cwiseAbs().maxCoeff() <
        1e-13);
  CHECK((e.bottomRightCorner(3, 3) - matrix_exponential(b2))
            .cwiseAbs()
            .maxCoeff() < 1e-13);
  CHECK(e.topRightCorner(2, 3).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("anti-Hermitian generators exponentiate to unitaries") {
  MatrixXcd h = random_complex(7, 21u, 1.0);
  h = MatrixXcd(0.5 * (h + h.adjoint()));  // Hermitian
  const MatrixXcd u = matrix_exponential(MatrixXcd(cd(0.0, -1.0) * h));
  CHECK((u * u.adjoint() - MatrixXcd::Identity(7, 7)).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("fixed-size and dynamic-size variants agree") {
  Mat7 a;
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < kNumModes; ++i) {
    for (int j = 0; j < kNumModes; ++j) a(i, j) = cd(u(rng), u(rng));
  }
  const Mat7 e7 = matrix_exponential(a);
  const MatrixXcd ex = matrix_exponential(MatrixXcd(a));
  CHECK((e7 - ex).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("non-finite input is rejected") {
  MatrixXcd a = MatrixXcd::Zero(3, 3);
  a(1, 2) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(matrix_exponential(a), std::domain_error);
  a(1, 2) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(matrix_exponential(a), std::domain_error);
}
