#include "oment/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace oment {

namespace {

struct MomentState {
  Mat7 psi;  // <v v†>
  Mat7 phi;  // <v† v>, entry (i,j) = <v_i† v_j>
};

struct BathFeed {
  Mat7 d_plus;   // feeds <v v†>
  Mat7 d_minus;  // feeds <v† v>
};

BathFeed bath_feed(const SystemParams& params, const ThermalSpec& thermal) {
  const double q = thermal.Q_th;
  const double n = thermal.N_th;
  RVec7 w_plus, w_minus;
  for (int k = 0; k < kNumModes; ++k) {
    const bool mech = (k == kMech1 || k == kMech2);
    const bool dag = (k == kMicrowave2Dag);
    w_plus(k) = dag ? q : (mech ? n + 1.0 : q + 1.0);
    w_minus(k) = dag ? q + 1.0 : (mech ? n : q);
  }
  BathFeed feed;
  feed.d_plus = Mat7::Zero();
  feed.d_minus = Mat7::Zero();
  for (int k = 0; k < kNumModes; ++k) {
    const double rate = params.kappa[k] / kTwoPi;
    feed.d_plus(k, k) = rate * w_plus(k);
    feed.d_minus(k, k) = rate * w_minus(k);
  }
  return feed;
}

MomentState initial_state(const ThermalSpec& thermal) {
  MomentState s;
  s.psi = Mat7::Zero();
  s.phi = Mat7::Zero();
  for (int k = 0; k < kNumModes; ++k) {
    const bool dag = (k == kMicrowave2Dag);
    s.psi(k, k) = dag ? thermal.n_bar[k] : thermal.n_bar[k] + 1.0;
    s.phi(k, k) = dag ? thermal.n_bar[k] + 1.0 : thermal.n_bar[k];
  }
  return s;
}

MomentState derivative(const SystemParams& params, const DriveSchedule& drives,
                       const BathFeed& feed, double t, const MomentState& s) {
  const Mat7 h = cd(0.0, -1.0) * assemble_m(params, drives, t);
  MomentState d;
  d.psi = h * s.psi + s.psi * h.adjoint() + feed.d_plus;
  d.phi = h.conjugate() * s.phi + s.phi * h.transpose() + feed.d_minus;
  return d;
}

void rk4_step(const SystemParams& params, const DriveSchedule& drives,
              const BathFeed& feed, double t, double h, MomentState& s) {
  const MomentState k1 = derivative(params, drives, feed, t, s);
  MomentState mid;
  mid.psi = s.psi + 0.5 * h * k1.psi;
  mid.phi = s.phi + 0.5 * h * k1.phi;
  const MomentState k2 = derivative(params, drives, feed, t + 0.5 * h, mid);
  mid.psi = s.psi + 0.5 * h * k2.psi;
  mid.phi = s.phi + 0.5 * h * k2.phi;
  const MomentState k3 = derivative(params, drives, feed, t + 0.5 * h, mid);
  mid.psi = s.psi + h * k3.psi;
  mid.phi = s.phi + h * k3.phi;
  const MomentState k4 = derivative(params, drives, feed, t + h, mid);
  s.psi += (h / 6.0) * (k1.psi + 2.0 * k2.psi + 2.0 * k3.psi + k4.psi);
  s.phi += (h / 6.0) * (k1.phi + 2.0 * k2.phi + 2.0 * k3.phi + k4.phi);
}

SecondMoments extract(const MomentState& s) {
  SecondMoments m;
  m.n1 = s.phi(kMicrowave1, kMicrowave1).real();
  m.n2 = s.psi(kMicrowave2Dag, kMicrowave2Dag).real();
  m.m12 = s.psi(kMicrowave1, kMicrowave2Dag);
  m.m12dag = s.phi(kMicrowave1, kMicrowave2Dag);
  return m;
}

std::vector<SecondMoments> integrate(const SystemParams& params,
                                     const DriveSchedule& drives,
                                     const ThermalSpec& thermal,
                                     const TimeGrid& grid, int sub_steps) {
  const BathFeed feed = bath_feed(params, thermal);
  MomentState state = initial_state(thermal);
  std::vector<SecondMoments> out;
  out.reserve(grid.n_points);
  out.push_back(extract(state));
  const double dt = grid.dt();
  const double h = dt / sub_steps;
  for (int j = 0; j < grid.n_points - 1; ++j) {
    const double t0 = grid.time_at(j);
    for (int s = 0; s < sub_steps; ++s) {
      rk4_step(params, drives, feed, t0 + s * h, h, state);
    }
    out.push_back(extract(state));
  }
  return out;
}

double relative_gap(const SecondMoments& a, const SecondMoments& b) {
  const auto gap = [](double d, double scale) {
    return d / std::max(1.0, scale);
  };
  double worst = gap(std::abs(a.n1 - b.n1), std::max(a.n1, b.n1));
  worst = std::max(worst, gap(std::abs(a.n2 - b.n2), std::max(a.n2, b.n2)));
  worst = std::max(worst, gap(std::abs(a.m12 - b.m12),
                              std::max(std::abs(a.m12), std::abs(b.m12))));
  worst = std::max(
      worst, gap(std::abs(a.m12dag - b.m12dag),
                 std::max(std::abs(a.m12dag), std::abs(b.m12dag))));
  return worst;
}

}  // namespace

LyapunovResult lyapunov_moment_oracle(const SystemParams& params,
                                      const DriveSchedule& drives,
                                      const ThermalSpec& thermal,
                                      const TimeGrid& grid, int dense_steps,
                                      double convergence_tol) {
  if (grid.n_points < 2 || grid.t_end <= 0.0) {
    throw std::domain_error(
        "lyapunov_moment_oracle: need t_end > 0, n_points >= 2");
  }
  if (dense_steps < grid.n_points - 1) {
    throw std::domain_error(
        "lyapunov_moment_oracle: dense step count below output resolution");
  }
  const int sub_steps = std::max(
      1, (dense_steps + grid.n_points - 2) / (grid.n_points - 1));

  LyapunovResult result;
  result.moments = integrate(params, drives, thermal, grid, sub_steps);
  const std::vector<SecondMoments> halved =
      integrate(params, drives, thermal, grid, 2 * sub_steps);
  for (int j = 0; j < grid.n_points; ++j) {
    result.step_halving_defect = std::max(
        result.step_halving_defect,
        relative_gap(result.moments[j], halved[j]));
  }
  if (result.step_halving_defect > convergence_tol) {
    std::ostringstream msg;
    msg << "lyapunov_moment_oracle: step-halving disagreement "
        << result.step_halving_defect << " exceeds " << convergence_tol
        << "; increase dense step count";
    throw std::runtime_error(msg.str());
  }
  return result;
}

}  // namespace oment
