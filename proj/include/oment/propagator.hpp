#pragma once

#include <array>
#include <functional>
#include <vector>

#include "oment/linalg.hpp"
#include "oment/model.hpp"
#include "oment/params.hpp"

namespace oment {

struct TimeGrid {
  double t_end = 0.0;
  int n_points = 1000;  // output times, uniform, includes 0 and t_end

  double dt() const { return t_end / (n_points - 1); }
  double time_at(int j) const { return j * dt(); }
};

struct TrotterConfig {
  int N = 50;      // Trotter sub-steps per output interval
  int n_trap = 5;  // trapezoid panels per integral

  static TrotterConfig coarse() { return {50, 5}; }
  static TrotterConfig convergence() { return {1600, 10}; }
};

// Bath-weight classes for the two-time kernels: the mode partition
// {o1, mw1, f, o2} / {m1, m2} / {mw2dag} determines which thermal occupation
// weights each damping channel's integral later receives.
enum KernelClass : int {
  kKernelOther = 0,  // weighted by Q_th-type occupations
  kKernelMech = 1,   // weighted by N_th-type occupations
  kKernelSlot7 = 2,  // the daggered channel (swapped weight placement)
};

// Cached propagator grid over uniform output times. Stores, per output time:
// tau(t_j, 0), the per-interval factors tau(t_{j+1}, t_j), and the three
// class-partitioned two-time kernel integrals
//   G_c(t_j) = integral_0^{t_j} tau(t_j,t') Theta_c tau(t_j,t')^dag dt',
// where Theta_c = diag(kappa_k / 2pi restricted to class c). The integral is
// a composite trapezoid with n_trap panels per output interval, accumulated
// by the exact telescoping recurrence
//   G(t_{j+1}) = U_j G(t_j) U_j^dag + (per-interval panel sum at t_{j+1}).
// Quadrature nodes that fall between Trotter sub-steps reuse the nearest
// sub-step boundary (exact alignment whenever n_trap divides N).
class PropagatorGrid {
 public:
  PropagatorGrid(const SystemParams& params, const DriveSchedule& drives,
                 const TimeGrid& grid, const TrotterConfig& cfg);

  const TimeGrid& time_grid() const { return grid_; }
  const TrotterConfig& trotter() const { return cfg_; }
  int n_points() const { return grid_.n_points; }

  // tau(t_j, t_i) as a product of cached interval factors (never by inverting
  // tau matrices).
  Mat7 propagate(int j, int i) const;

  const Mat7& tau_from_zero(int j) const { return tau0_.at(j); }
  const Mat7& interval_factor(int i) const { return factors_.at(i); }
  const Mat7& kernel(KernelClass c, int j) const { return kernels_[c].at(j); }

 private:
  TimeGrid grid_;
  TrotterConfig cfg_;
  std::vector<Mat7> factors_;  // n_points-1 interval factors
  std::vector<Mat7> tau0_;     // n_points composed products tau(t_j, 0)
  std::array<std::vector<Mat7>, 3> kernels_;
};

// Plain n-panel trapezoid rule over [t0, t].
cd trapezoid_integrate(const std::function<cd(double)>& f, double t0, double t,
                       int n_trap);

}  // namespace oment
