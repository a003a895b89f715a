#include "oment/params.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "oment/linalg.hpp"

namespace oment {

SystemParams SystemParams::with_damping(double kappa_mw1, double kappa_o1,
                                        double kappa_m, double kappa_f,
                                        double kappa_mw2, double kappa_o2,
                                        double g_f, double g0, double conv_C) {
  SystemParams p;
  p.kappa[kOptical1] = kappa_o1;
  p.kappa[kMech1] = kappa_m;
  p.kappa[kMicrowave1] = kappa_mw1;
  p.kappa[kFiber] = kappa_f;
  p.kappa[kOptical2] = kappa_o2;
  p.kappa[kMech2] = kappa_m;
  p.kappa[kMicrowave2Dag] = kappa_mw2;
  p.g_f = g_f;
  p.g0 = g0;
  p.conv_C = conv_C;
  return p;
}

double unit_conversion(double g0, double g0_L) {
  if (g0 <= 0.0 || g0_L <= 0.0) {
    throw std::domain_error("unit_conversion: inputs must be positive");
  }
  return g0 / g0_L;
}

SystemParams derive_reference_params() {
  return derive_reference_params(ReferenceTable{}.g_mw);
}

SystemParams derive_reference_params(double g0_override) {
  if (g0_override <= 0.0) {
    throw std::domain_error("derive_reference_params: g0 must be positive");
  }
  const ReferenceUnits u;
  const double C = unit_conversion(g0_override, u.g0_L);
  const double kappa_mw = u.kappa_mw_L * C;
  const double kappa_o = u.kappa_o_L * C;
  const double kappa_m = u.kappa_m_L * C;
  const ReferenceTable t;
  return SystemParams::with_damping(kappa_mw, kappa_o, kappa_m, t.kappa_f,
                                    kappa_mw, kappa_o, t.g_f, g0_override, C);
}

double ratio_identity_coupling(double kappa_k, double kappa_L, double g_L) {
  return kappa_k * (g_L / kappa_L);
}

namespace {
RatioEntry make_entry(double kappa, double g, double minimum) {
  const double ratio =
      g > 0.0 ? kappa / g : std::numeric_limits<double>::infinity();
  return RatioEntry{ratio, minimum, ratio / minimum};
}
}  // namespace

RatioReport check_ratios(const SystemParams& params, double g_mw1,
                         double g_mw2, double g_o1, double g_o2, double g_m) {
  const ReferenceUnits u;
  RatioReport r;
  r.entries["mw1"] =
      make_entry(params.kappa[kMicrowave1], g_mw1, u.min_ratio_mw);
  r.entries["mw2"] =
      make_entry(params.kappa[kMicrowave2Dag], g_mw2, u.min_ratio_mw);
  r.entries["o1"] = make_entry(params.kappa[kOptical1], g_o1, u.min_ratio_o);
  r.entries["o2"] = make_entry(params.kappa[kOptical2], g_o2, u.min_ratio_o);
  r.entries["m1"] = make_entry(params.kappa[kMech1], g_m, u.min_ratio_m);
  r.entries["f"] = make_entry(params.kappa[kFiber], params.g_f, 0.0);
  for (const auto& [key, e] : r.entries) {
    if (e.margin < 1.0) r.any_below_minimum = true;
  }
  return r;
}

double thermal_occupation(double omega, double temperature_K) {
  if (omega <= 0.0) {
    throw std::domain_error("thermal_occupation: omega must be positive");
  }
  if (temperature_K < 0.0) {
    throw std::domain_error("thermal_occupation: negative temperature");
  }
  if (temperature_K == 0.0) return 0.0;
  const double x = phys::kHbar * omega / (phys::kBoltzmann * temperature_K);
  return 1.0 / std::expm1(x);
}

double coherent_click_probability(double alpha_bar) {
  if (alpha_bar < 0.0) {
    throw std::domain_error("coherent_click_probability: negative amplitude");
  }
  return -std::expm1(-alpha_bar * alpha_bar);
}

}  // namespace oment
