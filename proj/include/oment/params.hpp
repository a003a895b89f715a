#pragma once

#include <array>
#include <map>
#include <string>

namespace oment {

// CODATA 2018 exact/recommended values; compiled in, never configurable.
namespace phys {
inline constexpr double kSpeedOfLight = 299792458.0;        // m/s
inline constexpr double kHbar = 1.054571817e-34;            // J s
inline constexpr double kBoltzmann = 1.380649e-23;          // J/K
}  // namespace phys

// Mode ordering is frozen: index 6 (0-based) is a creation-operator slot.
enum ModeIndex : int {
  kOptical1 = 0,
  kMech1 = 1,
  kMicrowave1 = 2,
  kFiber = 3,
  kOptical2 = 4,
  kMech2 = 5,
  kMicrowave2Dag = 6,
};

struct SystemParams {
  std::array<double, 7> kappa{};  // damping strengths per mode, rad/s
  double g_f = 0.0;               // fiber coupling, rad/s
  double g0 = 0.0;                // unenhanced laser coupling, rad/s
  double conv_C = 0.0;            // unit-conversion factor, rad/s per L-unit

  // Convenience constructor for the common "per-type" damping layout.
  static SystemParams with_damping(double kappa_mw1, double kappa_o1,
                                   double kappa_m, double kappa_f,
                                   double kappa_mw2, double kappa_o2,
                                   double g_f, double g0, double conv_C);
};

struct ThermalSpec {
  std::array<double, 7> n_bar{};  // initial occupation per primary mode
  double N_th = 0.0;              // mechanical-bath occupation
  double Q_th = 0.0;              // all other baths
};

// Reference dimensionless values and achievable-minimum ratios.
struct ReferenceUnits {
  double kappa_mw_L = 0.3;
  double kappa_o_L = 0.2;
  double kappa_m_L = 0.001;
  double g0_L = 3.0;
  double min_ratio_mw = 0.1;
  double min_ratio_o = 0.5;
  double min_ratio_m = 3.33e-4;
};

// Verbatim reference table (damping / coupling per type, rad/s).
struct ReferenceTable {
  double kappa_mw = 5.65e5;
  double kappa_o = 3.77e5;
  double kappa_m = 1.88e3;
  double kappa_f = 628318530.7179586;  // 2*pi*1e8; table displays 6.27e8
  double g_mw = 5.65e6;
  double g_o = 7.53e5;  // see note on derive_reference_params
  double g_m = 5.65e6;
  double g_f = 2663885593.273517;  // 2*pi*c*sqrt(2)/1m; displays 2.67e9
};

struct RatioEntry {
  double ratio;    // kappa/g (infinite if g == 0)
  double minimum;  // achievable minimum for this type
  double margin;   // ratio / minimum; < 1 flags an unachievable regime
};

struct RatioReport {
  // keys: mw1, mw2, o1, o2, m1, f. The fiber entry has no published
  // achievable minimum; its margin is +inf and never gates.
  std::map<std::string, RatioEntry> entries;
  bool any_below_minimum = false;
};

// conv_C = g0 / g0_L.
double unit_conversion(double g0, double g0_L);

// Reference parameter set: verbatim table values for the per-type rates plus
// the exact-form fiber quantities. The table's g_o cannot be reproduced from
// the published dimensionless inputs via the ratio identity (it matches the
// achievable-minimum ratio 0.5 instead); it is stored verbatim and
// ratio_identity_coupling() exposes the identity-based calculation separately.
SystemParams derive_reference_params();
SystemParams derive_reference_params(double g0_override);

// g_k = kappa_k * (kappa_k^L / g_k^L)^{-1}.
double ratio_identity_coupling(double kappa_k, double kappa_L, double g_L);

// All six kappa/g ratios for the given damping and drive values.
// Drive order: g_mw1, g_mw2, g_o1, g_o2; g_m defaults to the reference g0.
RatioReport check_ratios(const SystemParams& params, double g_mw1,
                         double g_mw2, double g_o1, double g_o2, double g_m);

// Mean thermal photon number 1/(e^{hbar w / kB T} - 1); T = 0 -> exactly 0.
double thermal_occupation(double omega, double temperature_K);

// 1 - e^{-alpha_bar^2}.
double coherent_click_probability(double alpha_bar);

}  // namespace oment
