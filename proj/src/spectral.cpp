#include "oment/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace oment {

FrequencyGrid FrequencyGrid::symmetric(double omega_max, int half_points) {
  if (!(omega_max > 0.0) || half_points < 1) {
    throw std::domain_error(
        "FrequencyGrid::symmetric: need omega_max > 0, half_points >= 1");
  }
  FrequencyGrid g;
  g.delta_omega = omega_max / half_points;
  g.n_indices.reserve(2 * half_points + 1);
  for (int n = -half_points; n <= half_points; ++n) g.n_indices.push_back(n);
  return g;
}

std::vector<double> FrequencyGrid::omegas() const {
  std::vector<double> out;
  out.reserve(n_indices.size());
  for (int n : n_indices) out.push_back(n * delta_omega);
  return out;
}

RVec7 noise_rate_diagonal(const SystemParams& params) {
  RVec7 k;
  for (int i = 0; i < kNumModes; ++i) k(i) = params.kappa[i] / kTwoPi;
  return k;
}

TransferMatrix transfer_matrix(const Mat7& m, const RVec7& k_diag,
                               double omega) {
  RVec7 sqrt_k;
  for (int i = 0; i < kNumModes; ++i) {
    if (k_diag(i) < 0.0) {
      throw std::domain_error("transfer_matrix: negative noise rate");
    }
    sqrt_k(i) = std::sqrt(k_diag(i));
  }
  const Mat7 resolvent_arg = omega * Mat7::Identity() - m;
  const Eigen::FullPivLU<Mat7> lu(resolvent_arg);
  if (!lu.isInvertible()) {
    std::ostringstream msg;
    msg << "transfer_matrix: singular resolvent at omega = " << omega
        << " rad/s (rcond = " << lu.rcond() << ")";
    throw std::runtime_error(msg.str());
  }
  const Mat7 solved = lu.solve(Mat7(sqrt_k.cast<cd>().asDiagonal()));
  return Mat7::Identity() -
         cd(0.0, 1.0) * (sqrt_k.cast<cd>().asDiagonal() * solved);
}

SecondMoments filtered_moments(const TransferMatrix& s,
                               const ThermalSpec& thermal) {
  const double q = thermal.Q_th;
  const double n = thermal.N_th;
  RVec7 w_plus, w_minus;
  for (int k = 0; k < kNumModes; ++k) {
    const bool mech = (k == kMech1 || k == kMech2);
    const bool dag = (k == kMicrowave2Dag);
    w_plus(k) = dag ? q : (mech ? n + 1.0 : q + 1.0);
    w_minus(k) = dag ? q + 1.0 : (mech ? n : q);
  }
  SecondMoments m;
  for (int k = 0; k < kNumModes; ++k) {
    const cd r1 = s(kMicrowave1, k);
    const cd r2 = s(kMicrowave2Dag, k);
    m.n1 += std::norm(r1) * w_minus(k);
    m.n2 += std::norm(r2) * w_plus(k);
    m.m12 += r1 * std::conj(r2) * w_plus(k);
    m.m12dag += std::conj(r1) * r2 * w_minus(k);
  }
  return m;
}

namespace {

double spectral_logneg(const Mat7& m, const RVec7& k_diag,
                       const ThermalSpec& thermal, double omega) {
  const SecondMoments mom = filtered_moments(
      transfer_matrix(m, k_diag, omega), thermal);
  return log_negativity(covariance_from_moments(mom));
}

}  // namespace

std::vector<EntanglementPoint> entanglement_spectrum(
    const SystemParams& params, const DriveSchedule& drives,
    const ThermalSpec& thermal, const FrequencyGrid& fgrid) {
  if (!drives.all_constant()) {
    throw std::domain_error(
        "entanglement_spectrum: drives must be constant in time");
  }
  if (!(fgrid.delta_omega > 0.0) || fgrid.n_indices.empty()) {
    throw std::domain_error("entanglement_spectrum: empty frequency grid");
  }
  const Mat7 m = assemble_m(params, drives, 0.0);
  const double s_rh = rh_metric(m);
  const RVec7 k_diag = noise_rate_diagonal(params);

  std::vector<EntanglementPoint> out;
  out.reserve(fgrid.n_indices.size());
  for (int i = 0; i < fgrid.size(); ++i) {
    EntanglementPoint pt;
    pt.t = fgrid.omega_at(i);
    pt.e_n = spectral_logneg(m, k_diag, thermal, pt.t);
    pt.ent = ent_from_logneg(pt.e_n);
    pt.s_rh = s_rh;
    out.push_back(pt);
  }
  return out;
}

SpectralPeak spectral_peak(const SystemParams& params,
                           const DriveSchedule& drives,
                           const ThermalSpec& thermal,
                           const FrequencyGrid& fgrid, bool refine) {
  const std::vector<EntanglementPoint> spectrum =
      entanglement_spectrum(params, drives, thermal, fgrid);
  int best = 0;
  for (int i = 1; i < static_cast<int>(spectrum.size()); ++i) {
    if (spectrum[i].e_n > spectrum[best].e_n) best = i;
  }
  SpectralPeak peak;
  peak.omega = spectrum[best].t;
  peak.e_n = spectrum[best].e_n;
  peak.s_rh = spectrum[best].s_rh;

  if (refine && spectrum.size() >= 2) {
    const Mat7 m = assemble_m(params, drives, 0.0);
    const RVec7 k_diag = noise_rate_diagonal(params);
    const int lo_idx = std::max(0, best - 1);
    const int hi_idx = std::min(static_cast<int>(spectrum.size()) - 1,
                                best + 1);
    double lo = spectrum[lo_idx].t;
    double hi = spectrum[hi_idx].t;
    const double tol = std::max(1e-3, 1e-12 * (hi - lo));
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = spectral_logneg(m, k_diag, thermal, x1);
    double f2 = spectral_logneg(m, k_diag, thermal, x2);
    const auto consider = [&peak](double omega, double value) {
      if (value > peak.e_n) {
        peak.e_n = value;
        peak.omega = omega;
      }
    };
    consider(x1, f1);
    consider(x2, f2);
    while (hi - lo > tol) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = spectral_logneg(m, k_diag, thermal, x2);
        consider(x2, f2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = spectral_logneg(m, k_diag, thermal, x1);
        consider(x1, f1);
      }
    }
  }
  peak.ent = ent_from_logneg(peak.e_n);
  return peak;
}

}  // namespace oment
