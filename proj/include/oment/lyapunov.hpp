#pragma once

#include <vector>

#include "oment/covariance.hpp"
#include "oment/model.hpp"
#include "oment/propagator.hpp"

namespace oment {

// Independent route to the microwave second moments: instead of propagator
// rows and kernel integrals, integrate the first-order matrix ODEs for the
// two full 7x7 moment matrices <v v†> and <v† v> driven by the same
// delta-correlated bath statistics, then read off the four entries of
// interest. A classical 4th-order fixed-step integrator is used; the run is
// repeated at half the step size and the disagreement reported (and rejected
// beyond `convergence_tol`).
struct LyapunovResult {
  std::vector<SecondMoments> moments;   // one entry per output grid time
  double step_halving_defect = 0.0;     // max relative disagreement observed
};

LyapunovResult lyapunov_moment_oracle(const SystemParams& params,
                                      const DriveSchedule& drives,
                                      const ThermalSpec& thermal,
                                      const TimeGrid& grid, int dense_steps,
                                      double convergence_tol = 1e-4);

}  // namespace oment
