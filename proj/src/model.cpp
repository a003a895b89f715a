#include "oment/model.hpp"

#include <cmath>
#include <stdexcept>

namespace oment {

double TrapezoidPulse::value(double t) const {
  const double t1 = t_start;
  const double t2 = t1 + rise;
  const double t3 = t2 + plateau;
  const double t4 = t3 + fall;
  if (t < t1) return 0.0;
  if (t < t2) return rise > 0.0 ? h_peak * (t - t1) / rise : h_peak;
  if (t < t3) return h_peak;
  if (t < t4) {
    return fall > 0.0 ? h_peak + (h_end - h_peak) * (t - t3) / fall : h_end;
  }
  return h_end;
}

DriveSchedule DriveSchedule::constants(double g_o1, double g_mw1, double g_o2,
                                       double g_mw2) {
  DriveSchedule s;
  s.g_o1 = Drive::make_constant(g_o1);
  s.g_mw1 = Drive::make_constant(g_mw1);
  s.g_o2 = Drive::make_constant(g_o2);
  s.g_mw2 = Drive::make_constant(g_mw2);
  return s;
}

Mat7 assemble_m(const SystemParams& params, const DriveValues& g) {
  Mat7 M = Mat7::Zero();
  const cd mihalf(0.0, -0.5);
  for (int k = 0; k < kNumModes; ++k) M(k, k) = mihalf * params.kappa[k];
  const auto set_sym = [&M](int a, int b, double v) {
    M(a, b) += v;
    M(b, a) += v;
  };
  set_sym(kOptical1, kMech1, g.g_o1);
  set_sym(kMech1, kMicrowave1, g.g_mw1);
  set_sym(kOptical1, kFiber, params.g_f);
  set_sym(kFiber, kOptical2, -params.g_f);
  set_sym(kOptical2, kMech2, g.g_o2);
  M(kMech2, kMicrowave2Dag) += g.g_mw2;
  M(kMicrowave2Dag, kMech2) += -g.g_mw2;
  return M;
}

Mat7 assemble_m(const SystemParams& params, const DriveSchedule& drives,
                double t) {
  return assemble_m(params, drives_at(drives, t));
}

double rh_metric(const Mat7& M) {
  const Mat7 H = cd(0.0, -1.0) * M;
  Eigen::ComplexEigenSolver<Mat7> solver(H, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("rh_metric: eigenvalue iteration failed");
  }
  return solver.eigenvalues().real().maxCoeff();
}

ScanGrid default_scan_grid(double g0, int points_per_axis) {
  ScanGrid grid;
  const double lo = std::log(g0);
  const double hi = std::log(100.0 * g0);
  grid.g_o1_values.reserve(points_per_axis);
  for (int i = 0; i < points_per_axis; ++i) {
    const double f = points_per_axis > 1
                         ? static_cast<double>(i) / (points_per_axis - 1)
                         : 0.0;
    grid.g_o1_values.push_back(std::exp(lo + f * (hi - lo)));
  }
  grid.g_o2_values = grid.g_o1_values;
  return grid;
}

ScanResult stability_scan(const SystemParams& params, double r,
                          const ScanGrid& grid) {
  if (grid.g_o1_values.empty() || grid.g_o2_values.empty()) {
    throw std::domain_error("stability_scan: empty grid");
  }
  const auto [g_mw1, g_mw2] = hyperbolic_assignment(r, params.g0);
  ScanResult res;
  res.grid = grid;
  res.surface.assign(grid.g_o1_values.size(),
                     std::vector<double>(grid.g_o2_values.size(), 0.0));
  bool first = true;
  for (std::size_t i = 0; i < grid.g_o1_values.size(); ++i) {
    for (std::size_t j = 0; j < grid.g_o2_values.size(); ++j) {
      const DriveValues g{grid.g_o1_values[i], g_mw1, grid.g_o2_values[j],
                          g_mw2};
      const double s = rh_metric(assemble_m(params, g));
      res.surface[i][j] = s;
      const bool better =
          first || s < res.min_s_rh ||
          (s == res.min_s_rh &&
           (grid.g_o1_values[i] < res.argmin_g_o1 ||
            (grid.g_o1_values[i] == res.argmin_g_o1 &&
             grid.g_o2_values[j] < res.argmin_g_o2)));
      if (better) {
        first = false;
        res.min_s_rh = s;
        res.argmin_g_o1 = grid.g_o1_values[i];
        res.argmin_g_o2 = grid.g_o2_values[j];
        res.argmin_i = i;
        res.argmin_j = j;
      }
    }
  }
  return res;
}

HyperbolicDrives hyperbolic_assignment(double r, double g0) {
  if (r < 0.0) throw std::domain_error("hyperbolic_assignment: r < 0");
  return {g0 * std::cosh(r), g0 * std::sinh(r)};
}

double squeezing_from_drives(double g_mw1, double g_mw2) {
  if (!(g_mw1 > g_mw2) || g_mw2 < 0.0) {
    throw std::domain_error(
        "squeezing_from_drives: requires g_mw1 > g_mw2 >= 0");
  }
  return std::atanh(g_mw2 / g_mw1);
}

double ent_from_r(double r) {
  if (r < 0.0) throw std::domain_error("ent_from_r: r < 0");
  const double ch = std::cosh(r);
  return 1.0 - 1.0 / (2.0 * ch * ch - 1.0);
}

double r_from_ent(double ent) {
  if (ent < 0.0 || ent >= 1.0) {
    throw std::domain_error("r_from_ent: ent must lie in [0, 1)");
  }
  return std::acosh(std::sqrt(0.5 * (1.0 / (1.0 - ent) + 1.0)));
}

double logneg_from_r(double r) { return 2.0 * r / std::log(2.0); }

double ent_from_logneg(double e_n) {
  if (e_n < 0.0) throw std::domain_error("ent_from_logneg: E_N < 0");
  return ent_from_r(e_n * std::log(std::sqrt(2.0)));
}

BogoliubovPair bogoliubov_modes(double r) {
  if (r < 0.0) throw std::domain_error("bogoliubov_modes: r < 0");
  BogoliubovPair b;
  const double ch = std::cosh(r);
  const double sh = std::sinh(r);
  b.beta1 << cd(ch, 0.0), cd(0.0, sh);
  b.beta2_dag << cd(0.0, -sh), cd(ch, 0.0);
  b.r = r;
  return b;
}

SpanResidual eigenmode_span_residual(const Mat7& M, const Vec7& target) {
  const Mat7 H = cd(0.0, -1.0) * M;
  Eigen::ComplexEigenSolver<Mat7> solver(H, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigenmode_span_residual: eigensolver failed");
  }
  const Mat7 Vecs = solver.eigenvectors();
  Eigen::JacobiSVD<Mat7> svd(Vecs,
                             Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec7 coeffs = svd.solve(target);
  SpanResidual out;
  out.residual = (Vecs * coeffs - target).norm() / target.norm();
  const auto& sv = svd.singularValues();
  out.condition_number = sv(0) / sv(sv.size() - 1);
  return out;
}

}  // namespace oment
