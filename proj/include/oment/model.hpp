#pragma once

#include <optional>
#include <vector>

#include "oment/linalg.hpp"
#include "oment/params.hpp"

namespace oment {

// Continuous piecewise-linear pulse: 0 before t_start, linear to h_peak over
// rise, constant over plateau, linear to h_end over fall, constant h_end
// afterward. Starting height is fixed at zero; h_end may exceed h_peak.
struct TrapezoidPulse {
  double t_start = 0.0;
  double rise = 0.0;
  double plateau = 0.0;
  double fall = 0.0;
  double h_peak = 0.0;
  double h_end = 0.0;

  double value(double t) const;
};

// One drive: either a constant strength or a trapezoid pulse.
struct Drive {
  bool is_pulse = false;
  double constant = 0.0;
  TrapezoidPulse pulse{};

  static Drive make_constant(double g) { return Drive{false, g, {}}; }
  static Drive make_pulse(const TrapezoidPulse& p) { return Drive{true, 0.0, p}; }
  double value(double t) const { return is_pulse ? pulse.value(t) : constant; }
};

// The four laser coupling strengths as functions of time.
struct DriveSchedule {
  Drive g_mw1, g_mw2, g_o1, g_o2;

  static DriveSchedule constants(double g_o1, double g_mw1, double g_o2,
                                 double g_mw2);
  bool all_constant() const {
    return !g_mw1.is_pulse && !g_mw2.is_pulse && !g_o1.is_pulse &&
           !g_o2.is_pulse;
  }
};

struct DriveValues {
  double g_o1 = 0.0, g_mw1 = 0.0, g_o2 = 0.0, g_mw2 = 0.0;
};

inline DriveValues drives_at(const DriveSchedule& s, double t) {
  return {s.g_o1.value(t), s.g_mw1.value(t), s.g_o2.value(t),
          s.g_mw2.value(t)};
}

// Langevin dynamics matrix: diagonal -i kappa_k/2; symmetric real couplings
// g_o1 (o1<->m1), g_mw1 (m1<->mw1), g_f (+ to o1, - to o2), g_o2 (o2<->m2);
// antisymmetric squeezing pair +g_mw2 at (m2, mw2dag), -g_mw2 at (mw2dag, m2).
Mat7 assemble_m(const SystemParams& params, const DriveValues& g);
Mat7 assemble_m(const SystemParams& params, const DriveSchedule& drives,
                double t);

// Routh-Hurwitz metric: max real part of the eigenvalues of H = -iM.
// S_RH < 0 stable, > 0 unstable, = 0 indeterminate (callers must not fold the
// zero case into either side).
double rh_metric(const Mat7& M);

enum class Stability { kStable, kUnstable, kIndeterminate };
inline Stability classify_rh(double s_rh) {
  if (s_rh < 0.0) return Stability::kStable;
  if (s_rh > 0.0) return Stability::kUnstable;
  return Stability::kIndeterminate;
}

struct ScanGrid {
  std::vector<double> g_o1_values;
  std::vector<double> g_o2_values;
};

// 100-point logarithmic default over [g0, 100 g0] per axis.
ScanGrid default_scan_grid(double g0, int points_per_axis = 100);

struct ScanResult {
  ScanGrid grid;
  // surface[i][j] = S_RH at (g_o1_values[i], g_o2_values[j])
  std::vector<std::vector<double>> surface;
  double min_s_rh = 0.0;
  double argmin_g_o1 = 0.0;
  double argmin_g_o2 = 0.0;
  std::size_t argmin_i = 0, argmin_j = 0;
};

// S_RH over the grid with g_mw set hyperbolically from r; ties broken by
// lexicographically lowest (g_o1, g_o2).
ScanResult stability_scan(const SystemParams& params, double r,
                          const ScanGrid& grid);

// (g0 cosh r, g0 sinh r).
struct HyperbolicDrives {
  double g_mw1, g_mw2;
};
HyperbolicDrives hyperbolic_assignment(double r, double g0);

// tanh^{-1}(g_mw2 / g_mw1); requires g_mw1 > g_mw2 >= 0.
double squeezing_from_drives(double g_mw1, double g_mw2);

// Entanglement-scale conversions.
double ent_from_r(double r);          // 1 - 1/(2 cosh^2 r - 1)
double r_from_ent(double ent);        // inverse of the above
double logneg_from_r(double r);       // 2 r / ln 2
double ent_from_logneg(double e_n);   // chains r = E_N ln sqrt(2) into ent

struct BogoliubovPair {
  Eigen::Vector2cd beta1;      // over (a_mw1, a_mw2^dag)
  Eigen::Vector2cd beta2_dag;  // over (a_mw1, a_mw2^dag)
  double r = 0.0;
};
BogoliubovPair bogoliubov_modes(double r);

struct SpanResidual {
  double residual = 0.0;          // least-squares residual of the projection
  double condition_number = 0.0;  // of the eigenvector matrix
};
// Least-squares residual of expressing `target` in the span of the
// eigenvectors of H = -iM. Near-defective bases are reported via the
// condition number, never a hard failure.
SpanResidual eigenmode_span_residual(const Mat7& M, const Vec7& target);

}  // namespace oment
