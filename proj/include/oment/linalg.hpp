#pragma once

#include <Eigen/Dense>
#include <complex>

namespace oment {

inline constexpr int kNumModes = 7;
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

using cd = std::complex<double>;
using Mat7 = Eigen::Matrix<cd, kNumModes, kNumModes>;
using Vec7 = Eigen::Matrix<cd, kNumModes, 1>;
using RVec7 = Eigen::Matrix<double, kNumModes, 1>;
using Mat4d = Eigen::Matrix4d;

// e^A for a general (possibly non-normal) complex matrix by scaling-and-squaring
// with a diagonal Pade approximant; backward-error controlled degree selection.
Mat7 matrix_exponential(const Mat7& A);

// Dynamic-size variant used by tests and utility paths.
Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd& A);

}  // namespace oment
