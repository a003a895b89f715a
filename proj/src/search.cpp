#include "oment/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace oment {

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform01() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::uniform(double lo, double hi) {
  if (!(hi >= lo)) throw std::domain_error("SplitMix64::uniform: hi < lo");
  return lo + uniform01() * (hi - lo);
}

std::uint64_t trial_seed(std::uint64_t master_seed, int trial_index) {
  if (trial_index < 0) throw std::domain_error("trial_seed: negative index");
  SplitMix64 stream(master_seed);
  std::uint64_t s = 0;
  for (int i = 0; i <= trial_index; ++i) s = stream.next();
  return s;
}

std::vector<std::uint64_t> trial_seeds(std::uint64_t master_seed, int trials) {
  SplitMix64 stream(master_seed);
  std::vector<std::uint64_t> out(trials);
  for (int i = 0; i < trials; ++i) out[i] = stream.next();
  return out;
}

PulseSearchSpace PulseSearchSpace::defaults(double g0) {
  PulseSearchSpace s;
  s.height_max = 110.0 * g0;
  s.validate();
  return s;
}

void PulseSearchSpace::validate() const {
  const bool ok = std::isfinite(horizon) && horizon > 0.0 &&
                  t_start_max >= 0.0 && rise_min >= 0.0 &&
                  rise_max >= rise_min && plateau_max >= 0.0 &&
                  fall_min >= 0.0 && fall_max >= fall_min &&
                  std::isfinite(height_max) && height_max >= 0.0;
  if (!ok) {
    throw std::domain_error(
        "PulseSearchSpace: bounds must be finite, nonnegative, and ordered");
  }
}

SpectralSearchSpace SpectralSearchSpace::defaults(double g0) {
  SpectralSearchSpace s;
  s.g_max = 110.0 * g0;
  s.validate();
  return s;
}

void SpectralSearchSpace::validate() const {
  if (!(std::isfinite(g_max) && g_max >= 0.0)) {
    throw std::domain_error("SpectralSearchSpace: g_max must be finite, >= 0");
  }
}

namespace {

TrapezoidPulse draw_pulse(SplitMix64& rng, const PulseSearchSpace& s) {
  TrapezoidPulse p;
  p.t_start = rng.uniform(0.0, s.t_start_max);
  p.rise = rng.uniform(s.rise_min, s.rise_max);
  p.plateau = rng.uniform(0.0, s.plateau_max);
  p.fall = rng.uniform(s.fall_min, s.fall_max);
  p.h_peak = rng.uniform(0.0, s.height_max);
  p.h_end = rng.uniform(0.0, s.height_max);
  return p;
}

bool gate(double s_rh, StabilityMode mode, double threshold) {
  return mode == StabilityMode::kStrict ? s_rh < 0.0 : s_rh < threshold;
}

// Runs fn(0..n-1) on `workers` threads, first exception rethrown after join.
// Callers store results by index, so output is scheduling-independent.
void parallel_for_indexed(int n, int workers,
                          const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next_index{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const int i = next_index.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct TrialOutcome {
  bool prescreen_passed = false;
  bool stable = false;
  double peak_e_n = 0.0;
  double peak_at = 0.0;
  double s_rh_min = 0.0;
  double s_rh_max = 0.0;
};

RatioReport winner_ratios(const SystemParams& params,
                          const DriveSchedule& schedule, const TimeGrid& grid) {
  double g_mw1 = 0.0, g_mw2 = 0.0, g_o1 = 0.0, g_o2 = 0.0;
  for (int j = 0; j < grid.n_points; ++j) {
    const DriveValues g = drives_at(schedule, grid.time_at(j));
    g_mw1 = std::max(g_mw1, std::abs(g.g_mw1));
    g_mw2 = std::max(g_mw2, std::abs(g.g_mw2));
    g_o1 = std::max(g_o1, std::abs(g.g_o1));
    g_o2 = std::max(g_o2, std::abs(g.g_o2));
  }
  return check_ratios(params, g_mw1, g_mw2, g_o1, g_o2, params.g0);
}

WinnerRecord reduce_outcomes(const std::vector<TrialOutcome>& outcomes,
                             const SearchConfig& scfg,
                             const std::vector<std::uint64_t>& seeds) {
  WinnerRecord rec;
  rec.master_seed = scfg.master_seed;
  rec.trials = static_cast<int>(outcomes.size());
  for (int i = 0; i < rec.trials; ++i) {
    const TrialOutcome& o = outcomes[i];
    if (o.prescreen_passed) ++rec.prescreen_passed;
    if (!o.stable) continue;
    ++rec.stable_candidates;
    rec.feasible_log.emplace_back(i, o.peak_e_n);
    if (!rec.feasible || o.peak_e_n > rec.peak_e_n) {
      rec.feasible = true;
      rec.trial_index = i;
      rec.seed = seeds[i];
      rec.peak_e_n = o.peak_e_n;
      rec.peak_at = o.peak_at;
      rec.s_rh_min = o.s_rh_min;
      rec.s_rh_max = o.s_rh_max;
    }
  }
  if (rec.feasible) rec.peak_ent = ent_from_logneg(rec.peak_e_n);
  return rec;
}

}  // namespace

DriveSchedule sample_pulse_set(const PulseSearchSpace& space,
                               std::uint64_t seed) {
  space.validate();
  SplitMix64 rng(seed);
  DriveSchedule s;
  s.g_mw1 = Drive::make_pulse(draw_pulse(rng, space));
  s.g_mw2 = Drive::make_pulse(draw_pulse(rng, space));
  s.g_o1 = Drive::make_pulse(draw_pulse(rng, space));
  s.g_o2 = Drive::make_pulse(draw_pulse(rng, space));
  return s;
}

DriveSchedule sample_constant_set(const SpectralSearchSpace& space,
                                  std::uint64_t seed) {
  space.validate();
  SplitMix64 rng(seed);
  const double g_mw1 = rng.uniform(0.0, space.g_max);
  const double g_mw2 = rng.uniform(0.0, space.g_max);
  const double g_o1 = rng.uniform(0.0, space.g_max);
  const double g_o2 = rng.uniform(0.0, space.g_max);
  return DriveSchedule::constants(g_o1, g_mw1, g_o2, g_mw2);
}

bool prescreen_zero_damping(const SystemParams& params,
                            const DriveSchedule& schedule,
                            const TimeGrid& grid, double threshold) {
  SystemParams zeroed = params;
  zeroed.kappa.fill(0.0);
  for (int j = 0; j < grid.n_points; ++j) {
    const double s = rh_metric(assemble_m(zeroed, schedule, grid.time_at(j)));
    if (!(s < threshold)) return false;
  }
  return true;
}

CandidateEvaluation evaluate_pulse_candidate(
    const SystemParams& params, const DriveSchedule& schedule,
    const ThermalSpec& thermal, const TimeGrid& grid, const TrotterConfig& cfg,
    StabilityMode mode, double threshold) {
  CandidateEvaluation out;
  std::vector<double> s_rh(grid.n_points);
  out.stable = true;
  for (int j = 0; j < grid.n_points; ++j) {
    s_rh[j] = rh_metric(assemble_m(params, schedule, grid.time_at(j)));
    if (!gate(s_rh[j], mode, threshold)) out.stable = false;
  }
  out.s_rh_min = *std::min_element(s_rh.begin(), s_rh.end());
  out.s_rh_max = *std::max_element(s_rh.begin(), s_rh.end());
  if (!out.stable) return out;

  const PropagatorGrid pgrid(params, schedule, grid, cfg);
  out.series.reserve(grid.n_points);
  for (int j = 0; j < grid.n_points; ++j) {
    EntanglementPoint pt;
    pt.t = grid.time_at(j);
    pt.s_rh = s_rh[j];
    const SecondMoments m = second_moments(pgrid, j, thermal);
    pt.e_n = log_negativity(covariance_from_moments(m));
    pt.ent = ent_from_logneg(pt.e_n);
    out.series.push_back(pt);
    if (pt.e_n > out.peak_e_n) {
      out.peak_e_n = pt.e_n;
      out.peak_at = pt.t;
    }
  }
  out.peak_ent = ent_from_logneg(out.peak_e_n);
  return out;
}

CandidateEvaluation evaluate_spectral_candidate(
    const SystemParams& params, const DriveSchedule& drives,
    const ThermalSpec& thermal, const FrequencyGrid& fgrid, StabilityMode mode,
    double threshold) {
  CandidateEvaluation out;
  const double s_rh = rh_metric(assemble_m(params, drives, 0.0));
  out.s_rh_min = s_rh;
  out.s_rh_max = s_rh;
  out.stable = gate(s_rh, mode, threshold);
  if (!out.stable) return out;

  out.series = entanglement_spectrum(params, drives, thermal, fgrid);
  bool first = true;
  for (const EntanglementPoint& pt : out.series) {
    if (first || pt.e_n > out.peak_e_n) {
      first = false;
      out.peak_e_n = pt.e_n;
      out.peak_at = pt.t;
    }
  }
  out.peak_ent = ent_from_logneg(out.peak_e_n);
  return out;
}

WinnerRecord pulse_search(const PulseSearchSpace& space,
                          const SystemParams& params,
                          const ThermalSpec& thermal, const TimeGrid& grid,
                          const TrotterConfig& cfg, const SearchConfig& scfg) {
  space.validate();
  if (scfg.trials < 1) throw std::domain_error("pulse_search: trials < 1");
  const std::vector<std::uint64_t> seeds =
      trial_seeds(scfg.master_seed, scfg.trials);
  std::vector<TrialOutcome> outcomes(scfg.trials);

  parallel_for_indexed(scfg.trials, scfg.workers, [&](int i) {
    const DriveSchedule schedule = sample_pulse_set(space, seeds[i]);
    if (!prescreen_zero_damping(params, schedule, grid,
                                scfg.prescreen_threshold)) {
      return;
    }
    TrialOutcome& o = outcomes[i];
    o.prescreen_passed = true;
    const CandidateEvaluation eval =
        evaluate_pulse_candidate(params, schedule, thermal, grid, cfg,
                                 scfg.stability_mode,
                                 scfg.prescreen_threshold);
    o.stable = eval.stable;
    o.peak_e_n = eval.peak_e_n;
    o.peak_at = eval.peak_at;
    o.s_rh_min = eval.s_rh_min;
    o.s_rh_max = eval.s_rh_max;
  });

  WinnerRecord rec = reduce_outcomes(outcomes, scfg, seeds);
  if (rec.feasible) {
    rec.schedule = sample_pulse_set(space, rec.seed);
    rec.ratios = winner_ratios(params, rec.schedule, grid);
  }
  return rec;
}

WinnerRecord spectral_search(const SpectralSearchSpace& space,
                             const SystemParams& params,
                             const ThermalSpec& thermal,
                             const FrequencyGrid& fgrid,
                             const SearchConfig& scfg) {
  space.validate();
  if (scfg.trials < 1) throw std::domain_error("spectral_search: trials < 1");
  const std::vector<std::uint64_t> seeds =
      trial_seeds(scfg.master_seed, scfg.trials);
  std::vector<TrialOutcome> outcomes(scfg.trials);

  parallel_for_indexed(scfg.trials, scfg.workers, [&](int i) {
    const DriveSchedule drives = sample_constant_set(space, seeds[i]);
    const CandidateEvaluation eval = evaluate_spectral_candidate(
        params, drives, thermal, fgrid, scfg.stability_mode,
        scfg.prescreen_threshold);
    TrialOutcome& o = outcomes[i];
    o.prescreen_passed = eval.stable;
    o.stable = eval.stable;
    o.peak_e_n = eval.peak_e_n;
    o.peak_at = eval.peak_at;
    o.s_rh_min = eval.s_rh_min;
    o.s_rh_max = eval.s_rh_max;
  });

  WinnerRecord rec = reduce_outcomes(outcomes, scfg, seeds);
  if (rec.feasible) {
    rec.schedule = sample_constant_set(space, rec.seed);
    const DriveValues g = drives_at(rec.schedule, 0.0);
    rec.ratios =
        check_ratios(params, g.g_mw1, g.g_mw2, g.g_o1, g.g_o2, params.g0);
  }
  return rec;
}

std::vector<ThermalCurve> thermal_sweep_time(
    const SystemParams& params, const DriveSchedule& schedule,
    const ThermalSpec& base, const TimeGrid& grid, const TrotterConfig& cfg,
    const std::vector<double>& n_th_values, double herm_tol) {
  const PropagatorGrid pgrid(params, schedule, grid, cfg);
  std::vector<double> s_rh(grid.n_points);
  for (int j = 0; j < grid.n_points; ++j) {
    s_rh[j] = rh_metric(assemble_m(params, schedule, grid.time_at(j)));
  }
  std::vector<ThermalCurve> out;
  out.reserve(n_th_values.size());
  for (double n_th : n_th_values) {
    ThermalSpec thermal = base;
    thermal.N_th = n_th;
    ThermalCurve curve;
    curve.n_th = n_th;
    curve.points.reserve(grid.n_points);
    bool first = true;
    for (int j = 0; j < grid.n_points; ++j) {
      EntanglementPoint pt;
      pt.t = grid.time_at(j);
      pt.s_rh = s_rh[j];
      const SecondMoments m = second_moments(pgrid, j, thermal, herm_tol);
      pt.e_n = log_negativity(covariance_from_moments(m));
      pt.ent = ent_from_logneg(pt.e_n);
      curve.points.push_back(pt);
      if (first || pt.e_n > curve.peak_e_n) {
        first = false;
        curve.peak_e_n = pt.e_n;
        curve.peak_at = pt.t;
      }
    }
    curve.peak_ent = ent_from_logneg(curve.peak_e_n);
    curve.s_rh_min = *std::min_element(s_rh.begin(), s_rh.end());
    curve.s_rh_max = *std::max_element(s_rh.begin(), s_rh.end());
    out.push_back(std::move(curve));
  }
  return out;
}

std::vector<ThermalCurve> thermal_sweep_spectral(
    const SystemParams& params, const DriveSchedule& drives,
    const ThermalSpec& base, const FrequencyGrid& fgrid,
    const std::vector<double>& n_th_values) {
  std::vector<ThermalCurve> out;
  out.reserve(n_th_values.size());
  for (double n_th : n_th_values) {
    ThermalSpec thermal = base;
    thermal.N_th = n_th;
    ThermalCurve curve;
    curve.n_th = n_th;
    curve.points = entanglement_spectrum(params, drives, thermal, fgrid);
    const SpectralPeak peak =
        spectral_peak(params, drives, thermal, fgrid, /*refine=*/true);
    curve.peak_e_n = peak.e_n;
    curve.peak_ent = peak.ent;
    curve.peak_at = peak.omega;
    curve.s_rh_min = peak.s_rh;
    curve.s_rh_max = peak.s_rh;
    out.push_back(std::move(curve));
  }
  return out;
}

}  // namespace oment
