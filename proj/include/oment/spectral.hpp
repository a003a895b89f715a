#pragma once

#include <vector>

#include "oment/covariance.hpp"
#include "oment/model.hpp"
#include "oment/params.hpp"

namespace oment {

// Default frequency scan: symmetric about 0, half-range 1e9 rad/s, 2001
// points. The physics lives at the scale of the couplings and damping rates
// (1e5..1e9 rad/s).
inline constexpr double kDefaultOmegaMax = 1e9;
inline constexpr int kDefaultHalfPoints = 1000;

// Frequency window grid ω_n = n·Δω. The moments are Δω-independent (the
// filter enters only through its normalization), so Δω merely labels which
// ω values are sampled.
struct FrequencyGrid {
  double delta_omega = 0.0;
  std::vector<int> n_indices;

  static FrequencyGrid symmetric(double omega_max = kDefaultOmegaMax,
                                 int half_points = kDefaultHalfPoints);

  int size() const { return static_cast<int>(n_indices.size()); }
  double omega_at(int i) const { return n_indices[i] * delta_omega; }
  std::vector<double> omegas() const;
};

using TransferMatrix = Mat7;

// Per-mode diagonal of the noise-rate matrix, κ_k/2π.
RVec7 noise_rate_diagonal(const SystemParams& params);

// S(ω) = I − i √K (ωI − M)⁻¹ √K with √K = diag(√(κ_k/2π)). The resolvent is
// applied by LU solve against the √K columns, never by explicit inverse.
// Throws when ωI − M is singular (reports the reciprocal condition number).
TransferMatrix transfer_matrix(const Mat7& m, const RVec7& k_diag,
                               double omega);

// Filtered output moments of the two microwave modes at one frequency:
// row sums of |S| products weighted by the bath occupations — Q_th on the
// optical/microwave/fiber slots, N_th on the mechanical slots, with the
// (·+1) placements swapped on the daggered slot.
SecondMoments filtered_moments(const TransferMatrix& s,
                               const ThermalSpec& thermal);

// Entanglement spectrum for constant drives: per ω_n, transfer matrix →
// filtered moments → covariance → E_N → ent. The stability metric is
// computed once from the constant dynamics matrix and attached to every
// point. `t` on the returned points holds ω in rad/s.
std::vector<EntanglementPoint> entanglement_spectrum(
    const SystemParams& params, const DriveSchedule& drives,
    const ThermalSpec& thermal, const FrequencyGrid& fgrid);

struct SpectralPeak {
  double omega = 0.0;
  double e_n = 0.0;
  double ent = 0.0;
  double s_rh = 0.0;
};

// Peak of the entanglement spectrum: discrete maximum over the grid,
// optionally refined by golden-section search on the bracketing interval.
// Refinement can only improve on the coarse maximum.
SpectralPeak spectral_peak(const SystemParams& params,
                           const DriveSchedule& drives,
                           const ThermalSpec& thermal,
                           const FrequencyGrid& fgrid, bool refine = true);

}  // namespace oment
