#include "oment/propagator.hpp"

#include <cmath>
#include <stdexcept>

namespace oment {

namespace {

std::array<RVec7, 3> class_weights(const SystemParams& params) {
  std::array<RVec7, 3> theta;
  for (auto& v : theta) v.setZero();
  const auto put = [&](int mode, KernelClass c) {
    theta[c](mode) = params.kappa[mode] / kTwoPi;
  };
  put(kOptical1, kKernelOther);
  put(kMicrowave1, kKernelOther);
  put(kFiber, kKernelOther);
  put(kOptical2, kKernelOther);
  put(kMech1, kKernelMech);
  put(kMech2, kKernelMech);
  put(kMicrowave2Dag, kKernelSlot7);
  return theta;
}

}  // namespace

PropagatorGrid::PropagatorGrid(const SystemParams& params,
                               const DriveSchedule& drives,
                               const TimeGrid& grid, const TrotterConfig& cfg)
    : grid_(grid), cfg_(cfg) {
  if (grid.n_points < 2 || grid.t_end <= 0.0) {
    throw std::domain_error("PropagatorGrid: need t_end > 0, n_points >= 2");
  }
  if (cfg.N < 1 || cfg.n_trap < 1) {
    throw std::domain_error("PropagatorGrid: need N >= 1, n_trap >= 1");
  }
  const int n_intervals = grid.n_points - 1;
  const double dt = grid.dt();
  const double h = dt / cfg.N;
  const auto theta = class_weights(params);

  factors_.reserve(n_intervals);
  tau0_.reserve(grid.n_points);
  for (auto& ks : kernels_) ks.reserve(grid.n_points);

  tau0_.push_back(Mat7::Identity());
  for (auto& ks : kernels_) ks.push_back(Mat7::Zero());

  // Snapped sub-step index for each quadrature node p = 0..n_trap.
  std::vector<int> node_steps(cfg.n_trap + 1);
  for (int p = 0; p <= cfg.n_trap; ++p) {
    node_steps[p] = static_cast<int>(
        std::lround(static_cast<double>(p) * cfg.N / cfg.n_trap));
  }

  std::vector<Mat7> substeps(cfg.N);
  std::vector<Mat7> suffix(cfg.N + 1);
  const double w_panel = dt / cfg.n_trap;

  for (int i = 0; i < n_intervals; ++i) {
    const double t0 = grid.time_at(i);
    // Right-endpoint factors, composed leftward (later times on the left).
    for (int k = 1; k <= cfg.N; ++k) {
      const Mat7 M = assemble_m(params, drives, t0 + k * h);
      substeps[k - 1] = matrix_exponential(Mat7(cd(0.0, -1.0) * h * M));
    }
    suffix[cfg.N] = Mat7::Identity();
    for (int m = cfg.N - 1; m >= 0; --m) {
      suffix[m] = suffix[m + 1] * substeps[m];
    }
    const Mat7& U = suffix[0];

    for (int c = 0; c < 3; ++c) {
      Mat7 panel_sum = Mat7::Zero();
      for (int p = 0; p <= cfg.n_trap; ++p) {
        const double w =
            (p == 0 || p == cfg.n_trap) ? 0.5 * w_panel : w_panel;
        const Mat7& S = suffix[node_steps[p]];
        panel_sum.noalias() +=
            w * (S * theta[c].asDiagonal() * S.adjoint());
      }
      kernels_[c].push_back(U * kernels_[c].back() * U.adjoint() + panel_sum);
    }
    tau0_.push_back(U * tau0_.back());
    factors_.push_back(U);
  }
}

Mat7 PropagatorGrid::propagate(int j, int i) const {
  if (i < 0 || j < i || j >= grid_.n_points) {
    throw std::out_of_range("propagate: need 0 <= i <= j < n_points");
  }
  Mat7 out = Mat7::Identity();
  for (int k = i; k < j; ++k) out = factors_[k] * out;
  return out;
}

cd trapezoid_integrate(const std::function<cd(double)>& f, double t0, double t,
                       int n_trap) {
  if (!(t > t0)) throw std::domain_error("trapezoid_integrate: need t > t0");
  if (n_trap < 1) throw std::domain_error("trapezoid_integrate: n_trap < 1");
  const double dt = (t - t0) / n_trap;
  cd sum = 0.5 * (f(t0) + f(t));
  for (int k = 1; k < n_trap; ++k) sum += f(t0 + k * dt);
  return sum * dt;
}

}  // namespace oment
