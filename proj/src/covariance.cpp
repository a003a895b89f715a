#include "oment/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace oment {

namespace {

// Per-mode weights for the initial-state sums. "plus" carries the +1 on the
// six plain slots and the bare occupation on the daggered slot; "minus" is
// the swap. These are the two orderings a a† vs a† a take on each slot.
RVec7 occupation_plus(const ThermalSpec& thermal) {
  RVec7 w;
  for (int k = 0; k < kNumModes; ++k) w(k) = thermal.n_bar[k] + 1.0;
  w(kMicrowave2Dag) = thermal.n_bar[kMicrowave2Dag];
  return w;
}

RVec7 occupation_minus(const ThermalSpec& thermal) {
  RVec7 w;
  for (int k = 0; k < kNumModes; ++k) w(k) = thermal.n_bar[k];
  w(kMicrowave2Dag) = thermal.n_bar[kMicrowave2Dag] + 1.0;
  return w;
}

double clamp_diagonal_moment(double value, const char* name) {
  if (value >= 0.0) return value;
  const double allowance = 1e-10 * std::max(1.0, std::abs(value));
  if (value >= -allowance) return 0.0;
  std::ostringstream msg;
  msg << "second_moments: " << name << " negative beyond roundoff: " << value;
  throw std::runtime_error(msg.str());
}

}  // namespace

double SecondMoments::herm_defect() const {
  const double scale = std::max(std::abs(m12), std::abs(m12dag));
  if (scale < 1e-300) return 0.0;
  return std::abs(m12dag - std::conj(m12)) / scale;
}

SecondMoments second_moments(const PropagatorGrid& grid, int j,
                             const ThermalSpec& thermal, double herm_tol) {
  const Mat7& phi = grid.tau_from_zero(j);
  const RVec7 w_plus = occupation_plus(thermal);
  const RVec7 w_minus = occupation_minus(thermal);

  SecondMoments m;
  for (int k = 0; k < kNumModes; ++k) {
    const cd r1 = phi(kMicrowave1, k);
    const cd r2 = phi(kMicrowave2Dag, k);
    m.n1 += std::norm(r1) * w_minus(k);
    m.n2 += std::norm(r2) * w_plus(k);
    m.m12 += r1 * std::conj(r2) * w_plus(k);
    m.m12dag += std::conj(r1) * r2 * w_minus(k);
  }

  const double q = thermal.Q_th;
  const double n = thermal.N_th;
  const Mat7& g_oth = grid.kernel(kKernelOther, j);
  const Mat7& g_mech = grid.kernel(kKernelMech, j);
  const Mat7& g_s7 = grid.kernel(kKernelSlot7, j);

  const int r = kMicrowave1;
  const int s = kMicrowave2Dag;
  m.n1 += q * g_oth(r, r).real() + n * g_mech(r, r).real() +
          (q + 1.0) * g_s7(r, r).real();
  m.n2 += (q + 1.0) * g_oth(s, s).real() + (n + 1.0) * g_mech(s, s).real() +
          q * g_s7(s, s).real();
  m.m12 += (q + 1.0) * g_oth(r, s) + (n + 1.0) * g_mech(r, s) +
           q * g_s7(r, s);
  m.m12dag += q * std::conj(g_oth(r, s)) + n * std::conj(g_mech(r, s)) +
              (q + 1.0) * std::conj(g_s7(r, s));

  m.n1 = clamp_diagonal_moment(m.n1, "n1");
  m.n2 = clamp_diagonal_moment(m.n2, "n2");

  const double defect = m.herm_defect();
  if (!(defect <= herm_tol)) {
    std::ostringstream msg;
    msg << "second_moments: cross-correlator mismatch " << defect
        << " exceeds tolerance " << herm_tol;
    throw std::runtime_error(msg.str());
  }
  return m;
}

CovarianceMatrix covariance_from_moments(const SecondMoments& m) {
  CovarianceMatrix out;
  const double a_diag = m.n1 + 0.5;
  const double b_diag = m.n2 + 0.5;
  const double c11 = 0.5 * (m.m12 + m.m12dag).real();
  const double c12 = 0.5 * (m.m12 - m.m12dag).imag();
  out.v(0, 0) = a_diag;
  out.v(1, 1) = a_diag;
  out.v(2, 2) = b_diag;
  out.v(3, 3) = b_diag;
  out.v(0, 2) = c11;
  out.v(2, 0) = c11;
  out.v(1, 3) = -c11;
  out.v(3, 1) = -c11;
  out.v(0, 3) = c12;
  out.v(3, 0) = c12;
  out.v(1, 2) = c12;
  out.v(2, 1) = c12;
  return out;
}

double log_negativity(const CovarianceMatrix& cov) {
  const double det_a = cov.block_a().determinant();
  const double det_b = cov.block_b().determinant();
  const double det_c = cov.block_c().determinant();
  const double det_v = cov.v.determinant();

  const double b = det_a + det_b - 2.0 * det_c;
  const double c = det_v;
  double disc = b * b - 4.0 * c;
  const double scale = std::max({1.0, b * b, std::abs(4.0 * c)});
  if (disc < -1e-12 * scale) {
    std::ostringstream msg;
    msg << "log_negativity: negative discriminant " << disc
        << " beyond roundoff (scale " << scale << ")";
    throw std::runtime_error(msg.str());
  }
  disc = std::max(disc, 0.0);

  const double radicand = std::max(0.5 * (b - std::sqrt(disc)), 0.0);
  const double r0 = std::sqrt(radicand);
  return std::max(0.0, -std::log2(2.0 * r0));
}

GeneralCovarianceDebug debug_general_covariance(const PropagatorGrid& grid,
                                                int j,
                                                const ThermalSpec& thermal,
                                                const Mat7& initial_anomalous) {
  GeneralCovarianceDebug out;
  const SecondMoments m = second_moments(grid, j, thermal);
  out.simplified = covariance_from_moments(m);

  // Same-type pairings <v_a v_b> propagate by tau T0 tau^T with no bath
  // feed-in: Fock-diagonal baths have no same-type correlators.
  const Mat7& phi = grid.tau_from_zero(j);
  const Mat7 t_same = phi * initial_anomalous * phi.transpose();
  const Mat7 t_dag =
      (phi * initial_anomalous.transpose() * phi.transpose()).conjugate();

  const int r = kMicrowave1;
  const int s = kMicrowave2Dag;
  out.a1a1 = t_same(r, r);
  out.a1dag_a1dag = t_dag(r, r);
  out.a2dag_a2dag = t_same(s, s);
  out.a2a2 = t_dag(s, s);
  out.a1_a2dag = t_same(r, s);
  out.a1dag_a2 = t_dag(r, s);
  out.max_dropped = std::max({std::abs(out.a1a1), std::abs(out.a1dag_a1dag),
                              std::abs(out.a2a2), std::abs(out.a2dag_a2dag),
                              std::abs(out.a1_a2dag), std::abs(out.a1dag_a2)});

  const cd sq1 = out.a1a1 + out.a1dag_a1dag;
  const cd sq2 = out.a2a2 + out.a2dag_a2dag;
  Mat4d v = Mat4d::Zero();
  v(0, 0) = 0.5 * (2.0 * m.n1 + 1.0 + sq1.real());
  v(1, 1) = 0.5 * (2.0 * m.n1 + 1.0 - sq1.real());
  v(0, 1) = 0.5 * (out.a1a1 - out.a1dag_a1dag).imag();
  v(1, 0) = v(0, 1);
  v(2, 2) = 0.5 * (2.0 * m.n2 + 1.0 + sq2.real());
  v(3, 3) = 0.5 * (2.0 * m.n2 + 1.0 - sq2.real());
  v(2, 3) = 0.5 * (out.a2a2 - out.a2dag_a2dag).imag();
  v(3, 2) = v(2, 3);
  const double c11 =
      0.5 * (m.m12 + out.a1_a2dag + out.a1dag_a2 + m.m12dag).real();
  const double c12 =
      0.5 * (m.m12 - out.a1_a2dag + out.a1dag_a2 - m.m12dag).imag();
  const double c21 =
      0.5 * (m.m12 + out.a1_a2dag - out.a1dag_a2 - m.m12dag).imag();
  const double c22 =
      -0.5 * (m.m12 - out.a1_a2dag - out.a1dag_a2 + m.m12dag).real();
  v(0, 2) = c11;
  v(2, 0) = c11;
  v(0, 3) = c12;
  v(3, 0) = c12;
  v(1, 2) = c21;
  v(2, 1) = c21;
  v(1, 3) = c22;
  v(3, 1) = c22;
  out.general.v = v;

  out.max_block_deviation =
      (out.general.v - out.simplified.v).cwiseAbs().maxCoeff();
  return out;
}

std::vector<EntanglementPoint> entanglement_time_series(
    const SystemParams& params, const DriveSchedule& drives,
    const ThermalSpec& thermal, const TimeGrid& grid, const TrotterConfig& cfg,
    double herm_tol) {
  const PropagatorGrid pgrid(params, drives, grid, cfg);
  std::vector<EntanglementPoint> out;
  out.reserve(grid.n_points);
  for (int j = 0; j < grid.n_points; ++j) {
    EntanglementPoint pt;
    pt.t = grid.time_at(j);
    pt.s_rh = rh_metric(assemble_m(params, drives, pt.t));
    const SecondMoments m = second_moments(pgrid, j, thermal, herm_tol);
    pt.e_n = log_negativity(covariance_from_moments(m));
    pt.ent = ent_from_logneg(pt.e_n);
    out.push_back(pt);
  }
  return out;
}

}  // namespace oment
