#pragma once

#include <vector>

#include "oment/model.hpp"
#include "oment/params.hpp"
#include "oment/propagator.hpp"

namespace oment {

// Second moments of the two microwave-cavity modes. m12 = <a1 a2> and
// m12dag = <a1† a2†> are tracked independently: the 1/(2π)-scaled noise
// convention used throughout makes the damped propagator non-unitary in the
// Σ = diag(1,...,1,-1) metric, so m12dag is not the exact conjugate of m12
// once damping acts. herm_defect() measures that mismatch; it is zero to
// machine precision for undamped evolution.
struct SecondMoments {
  double n1 = 0.0;
  double n2 = 0.0;
  cd m12 = 0.0;
  cd m12dag = 0.0;

  double herm_defect() const;
};

// Default gate on herm_defect(). The defect is bounded by 2 (triangle
// inequality on the two correlators), so the default never trips on the
// convention-induced skew; callers that run undamped dynamics can pass a
// tight tolerance to catch genuine propagator-grid inconsistencies.
inline constexpr double kDefaultHermTolerance = 2.0;

// 4x4 real covariance matrix of the two microwave quadratures with 2x2
// blocks [[A, C], [C^T, B]].
struct CovarianceMatrix {
  Mat4d v = Mat4d::Zero();

  Eigen::Matrix2d block_a() const { return v.topLeftCorner<2, 2>(); }
  Eigen::Matrix2d block_b() const { return v.bottomRightCorner<2, 2>(); }
  Eigen::Matrix2d block_c() const { return v.topRightCorner<2, 2>(); }
};

// One output sample of an entanglement curve; `t` holds the frequency in
// rad/s when produced by the spectral pipeline.
struct EntanglementPoint {
  double t = 0.0;
  double e_n = 0.0;
  double ent = 0.0;
  double s_rh = 0.0;
};

// Moments at output index j, assembled from the grid's cached propagator
// rows and bath kernels. Initial occupations and the two bath occupation
// numbers come from `thermal`; damping rates and quadrature settings were
// captured by the grid at construction. Throws when herm_defect() exceeds
// herm_tol or when a diagonal moment is negative beyond roundoff.
SecondMoments second_moments(const PropagatorGrid& grid, int j,
                             const ThermalSpec& thermal,
                             double herm_tol = kDefaultHermTolerance);

// Covariance assembly with the structural zero-moment simplifications:
// A = (n1 + 1/2) I, B = (n2 + 1/2) I, and the correlation block built from
// the symmetrized combinations of m12 and m12dag.
CovarianceMatrix covariance_from_moments(const SecondMoments& m);

// Logarithmic negativity from the covariance matrix: with
// b = det A + det B - 2 det C and c = det V, the smaller symplectic
// eigenvalue of the partial transpose is r0 = sqrt((b - sqrt(b^2 - 4c))/2)
// and E_N = max(0, -log2(2 r0)). Throws when b^2 - 4c is negative beyond a
// scaled 1e-12 roundoff allowance.
double log_negativity(const CovarianceMatrix& v);

// Debug assembly of the pre-simplification covariance blocks. The six
// moments dropped by the structural simplification (<a1 a1>, <a1† a1†>,
// <a2 a2>, <a2† a2†>, <a1 a2†>, <a1† a2>) are computed from the literal
// mode solutions: same-type operator pairings against the initial state,
// propagated as tau(t,0) T0 tau(t,0)^T, with no bath contribution because
// Fock-diagonal baths have no same-type correlators. `initial_anomalous`
// lets tests inject a nonzero <v_k(0) v_l(0)> matrix to exercise the
// general path; the physical default is zero, which is what makes the
// simplified assembly exact.
struct GeneralCovarianceDebug {
  CovarianceMatrix general;
  CovarianceMatrix simplified;
  cd a1a1 = 0.0;
  cd a1dag_a1dag = 0.0;
  cd a2a2 = 0.0;
  cd a2dag_a2dag = 0.0;
  cd a1_a2dag = 0.0;
  cd a1dag_a2 = 0.0;
  double max_dropped = 0.0;
  double max_block_deviation = 0.0;
};

GeneralCovarianceDebug debug_general_covariance(
    const PropagatorGrid& grid, int j, const ThermalSpec& thermal,
    const Mat7& initial_anomalous = Mat7::Zero());

// Full time-domain pipeline: per output time, assemble the dynamics matrix
// (for the stability metric), compute moments, covariance, E_N, and the
// entanglement measure derived from it.
std::vector<EntanglementPoint> entanglement_time_series(
    const SystemParams& params, const DriveSchedule& drives,
    const ThermalSpec& thermal, const TimeGrid& grid, const TrotterConfig& cfg,
    double herm_tol = kDefaultHermTolerance);

}  // namespace oment
