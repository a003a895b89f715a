#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "oment/model.hpp"
#include "oment/search.hpp"

using namespace oment;

namespace {

// Weakly damped toy chain at order-unity scales: drives run well above the
// damping rates, as in the physical regime, so searches find entangling
// candidates quickly.
SystemParams toy_params() {
  SystemParams p;
  for (int k = 0; k < kNumModes; ++k) p.kappa[k] = 0.05;
  p.kappa[kFiber] = 0.4;
  p.g_f = 1.0;
  p.g0 = 1.0;
  p.conv_C = 1.0 / 3.0;
  return p;
}

PulseSearchSpace toy_pulse_space() {
  PulseSearchSpace s;
  s.horizon = 1.0;
  s.t_start_max = 0.2;
  s.rise_min = 0.05;
  s.rise_max = 0.3;
  s.plateau_max = 0.3;
  s.fall_min = 0.05;
  s.fall_max = 0.3;
  s.height_max = 3.0;
  return s;
}

bool same_pulse(const TrapezoidPulse& a, const TrapezoidPulse& b) {
  return a.t_start == b.t_start && a.rise == b.rise && a.plateau == b.plateau &&
         a.fall == b.fall && a.h_peak == b.h_peak && a.h_end == b.h_end;
}

bool same_drive(const Drive& a, const Drive& b) {
  if (a.is_pulse != b.is_pulse) return false;
  return a.is_pulse ? same_pulse(a.pulse, b.pulse) : a.constant == b.constant;
}

bool same_schedule(const DriveSchedule& a, const DriveSchedule& b) {
  return same_drive(a.g_mw1, b.g_mw1) && same_drive(a.g_mw2, b.g_mw2) &&
         same_drive(a.g_o1, b.g_o1) && same_drive(a.g_o2, b.g_o2);
}

bool same_winner(const WinnerRecord& a, const WinnerRecord& b) {
  return a.feasible == b.feasible && a.master_seed == b.master_seed &&
         a.trial_index == b.trial_index && a.seed == b.seed &&
         a.peak_e_n == b.peak_e_n && a.peak_ent == b.peak_ent &&
         a.peak_at == b.peak_at && a.s_rh_min == b.s_rh_min &&
         a.s_rh_max == b.s_rh_max && a.trials == b.trials &&
         a.prescreen_passed == b.prescreen_passed &&
         a.stable_candidates == b.stable_candidates &&
         a.feasible_log == b.feasible_log &&
         same_schedule(a.schedule, b.schedule);
}

}  // namespace

TEST_CASE("generator reference vectors") {
  // Frozen outputs of the standard SplitMix64 sequence, cross-checked
  // against an independent implementation.
  SplitMix64 g0(0);
  CHECK(g0.next() == 0xE220A8397B1DCDAFULL);
  CHECK(g0.next() == 0x6E789E6AA1B965F4ULL);
  CHECK(g0.next() == 0x06C45D188009454FULL);
  CHECK(g0.next() == 0xF88BB8A8724C81ECULL);

  SplitMix64 g1(1);
  CHECK(g1.next() == 0x910A2DEC89025CC1ULL);
  CHECK(g1.next() == 0xBEEB8DA1658EEC67ULL);

  SplitMix64 g42(42);
  CHECK(g42.next() == 0xBDD732262FEB6E95ULL);
  CHECK(g42.next() == 0x28EFE333B266F103ULL);

  // uniform01 is the top 53 bits scaled by 2^-53.
  SplitMix64 u0(0);
  CHECK(u0.uniform01() == 0.8833108082136426);
  CHECK(u0.uniform01() == 0.43152799704850997);
  SplitMix64 u1(1);
  CHECK(u1.uniform01() == 0.5665615751722809);

  // uniform(lo, hi) maps affinely; degenerate bounds return lo exactly.
  SplitMix64 a(7), b(7);
  const double u = a.uniform01();
  CHECK(b.uniform(2.0, 6.0) == 2.0 + u * 4.0);
  SplitMix64 c(9);
  CHECK(c.uniform(3.5, 3.5) == 3.5);
  CHECK_THROWS_AS(c.uniform(1.0, 0.5), std::domain_error);
}

TEST_CASE("per-trial seeds are successive stream outputs") {
  const std::uint64_t master = 123456789;
  SplitMix64 stream(master);
  const std::vector<std::uint64_t> seeds = trial_seeds(master, 5);
  REQUIRE(seeds.size() == 5);
  for (int i = 0; i < 5; ++i) {
    const std::uint64_t expected = stream.next();
    CHECK(seeds[i] == expected);
    CHECK(trial_seed(master, i) == expected);
  }
  CHECK_THROWS_AS(trial_seed(master, -1), std::domain_error);
  CHECK(trial_seeds(master, 0).empty());
}

TEST_CASE("uniform01 sampling quality") {
  SplitMix64 rng(12345);
  const int n = 10000;
  std::vector<double> xs(n);
  for (double& x : xs) x = rng.uniform01();
  std::sort(xs.begin(), xs.end());
  CHECK(xs.front() >= 0.0);
  CHECK(xs.back() < 1.0);
  CHECK(xs.front() < 0.01);   // covers the low edge
  CHECK(xs.back() > 0.99);    // covers the high edge
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    d = std::max(d, std::abs((i + 1.0) / n - xs[i]));
    d = std::max(d, std::abs(xs[i] - static_cast<double>(i) / n));
  }
  // Kolmogorov-Smirnov statistic against U[0,1): 1.63/sqrt(n) is the 1%
  // critical value.
  CHECK(d * std::sqrt(static_cast<double>(n)) < 1.63);
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  CHECK(std::abs(mean - 0.5) < 0.015);
}

TEST_CASE("pulse sampling: determinism and draw order") {
  const PulseSearchSpace space = toy_pulse_space();
  const DriveSchedule a = sample_pulse_set(space, 99);
  const DriveSchedule b = sample_pulse_set(space, 99);
  CHECK(same_schedule(a, b));
  CHECK_FALSE(same_schedule(a, sample_pulse_set(space, 100)));
  CHECK(a.g_mw1.is_pulse);
  CHECK(a.g_mw2.is_pulse);
  CHECK(a.g_o1.is_pulse);
  CHECK(a.g_o2.is_pulse);

  // Lasers draw in the order mw1, mw2, o1, o2; within a pulse the order is
  // t_start, rise, plateau, fall, h_peak, h_end. Reproduce the stream by
  // hand and compare bitwise.
  SplitMix64 rng(99);
  const auto expect_pulse = [&rng, &space](const TrapezoidPulse& p) {
    CHECK(p.t_start == rng.uniform(0.0, space.t_start_max));
    CHECK(p.rise == rng.uniform(space.rise_min, space.rise_max));
    CHECK(p.plateau == rng.uniform(0.0, space.plateau_max));
    CHECK(p.fall == rng.uniform(space.fall_min, space.fall_max));
    CHECK(p.h_peak == rng.uniform(0.0, space.height_max));
    CHECK(p.h_end == rng.uniform(0.0, space.height_max));
  };
  expect_pulse(a.g_mw1.pulse);
  expect_pulse(a.g_mw2.pulse);
  expect_pulse(a.g_o1.pulse);
  expect_pulse(a.g_o2.pulse);

  // All bounds within the space.
  for (const Drive* d : {&a.g_mw1, &a.g_mw2, &a.g_o1, &a.g_o2}) {
    const TrapezoidPulse& p = d->pulse;
    CHECK(p.t_start >= 0.0);
    CHECK(p.t_start <= space.t_start_max);
    CHECK(p.rise >= space.rise_min);
    CHECK(p.rise <= space.rise_max);
    CHECK(p.h_peak <= space.height_max);
    CHECK(p.h_end <= space.height_max);
  }

  // Fully degenerate bounds pin every draw.
  PulseSearchSpace fixed;
  fixed.horizon = 1.0;
  fixed.t_start_max = 0.0;
  fixed.rise_min = fixed.rise_max = 0.02;
  fixed.plateau_max = 0.0;
  fixed.fall_min = fixed.fall_max = 0.03;
  fixed.height_max = 0.0;
  for (std::uint64_t seed : {1ULL, 77ULL, 31337ULL}) {
    const DriveSchedule s = sample_pulse_set(fixed, seed);
    for (const Drive* d : {&s.g_mw1, &s.g_mw2, &s.g_o1, &s.g_o2}) {
      CHECK(d->pulse.t_start == 0.0);
      CHECK(d->pulse.rise == 0.02);
      CHECK(d->pulse.plateau == 0.0);
      CHECK(d->pulse.fall == 0.03);
      CHECK(d->pulse.h_peak == 0.0);
      CHECK(d->pulse.h_end == 0.0);
    }
  }

  PulseSearchSpace bad = toy_pulse_space();
  bad.rise_max = bad.rise_min / 2.0;
  CHECK_THROWS_AS(sample_pulse_set(bad, 1), std::domain_error);
  PulseSearchSpace neg = toy_pulse_space();
  neg.height_max = -1.0;
  CHECK_THROWS_AS(neg.validate(), std::domain_error);
  CHECK(PulseSearchSpace::defaults(5.65e6).height_max ==
        doctest::Approx(110.0 * 5.65e6).epsilon(1e-15));
}

TEST_CASE("constant sampling: determinism and draw order") {
  SpectralSearchSpace space;
  space.g_max = 2.5;
  const DriveSchedule a = sample_constant_set(space, 4242);
  CHECK_FALSE(a.g_mw1.is_pulse);
  CHECK_FALSE(a.g_o2.is_pulse);
  SplitMix64 rng(4242);
  CHECK(a.g_mw1.constant == rng.uniform(0.0, space.g_max));
  CHECK(a.g_mw2.constant == rng.uniform(0.0, space.g_max));
  CHECK(a.g_o1.constant == rng.uniform(0.0, space.g_max));
  CHECK(a.g_o2.constant == rng.uniform(0.0, space.g_max));
  CHECK(same_schedule(a, sample_constant_set(space, 4242)));

  SpectralSearchSpace bad;
  bad.g_max = -0.5;
  CHECK_THROWS_AS(sample_constant_set(bad, 1), std::domain_error);
  CHECK(SpectralSearchSpace::defaults(2.0).g_max == 220.0);
}

TEST_CASE("zero-damping pre-screen") {
  const TimeGrid grid{1.0, 11};
  SystemParams p = toy_params();

  // No drives: only passive beam-splitter couplings remain, which keep the
  // undamped spectrum on the imaginary axis.
  CHECK(prescreen_zero_damping(p, DriveSchedule{}, grid));
  CHECK(prescreen_zero_damping(
      p, DriveSchedule::constants(0.5, 0.7, 0.4, 0.0), grid));

  // A bare pair-creation drive is exponentially unstable without damping.
  DriveSchedule squeeze;
  squeeze.g_mw2 = Drive::make_constant(1.0);
  CHECK_FALSE(prescreen_zero_damping(p, squeeze, grid));

  // The pre-screen zeroes the damping internally: heavy damping that would
  // stabilize the drive must not rescue it.
  SystemParams heavy = p;
  for (int k = 0; k < kNumModes; ++k) heavy.kappa[k] = 10.0;
  CHECK(rh_metric(assemble_m(heavy, squeeze, 0.0)) < 0.0);
  CHECK_FALSE(prescreen_zero_damping(heavy, squeeze, grid));

  // The threshold is the caller's: a drive below it passes.
  DriveSchedule faint;
  faint.g_mw2 = Drive::make_constant(5e-6);
  CHECK(prescreen_zero_damping(p, faint, grid, 1e-4));
  CHECK_FALSE(prescreen_zero_damping(p, faint, grid, 1e-7));
}

TEST_CASE("pulse candidate evaluation") {
  const SystemParams p = toy_params();
  const TimeGrid grid{1.0, 21};
  const TrotterConfig cfg{10, 3};
  const ThermalSpec th;

  // Unstable candidate: gate trips, no series is computed.
  DriveSchedule hot;
  hot.g_mw2 = Drive::make_constant(1.0);
  const CandidateEvaluation bad =
      evaluate_pulse_candidate(p, hot, th, grid, cfg);
  CHECK_FALSE(bad.stable);
  CHECK(bad.series.empty());
  CHECK(bad.s_rh_max > 0.0);

  // Stable candidate: full series with self-consistent peak bookkeeping.
  const DriveSchedule s = sample_pulse_set(toy_pulse_space(), trial_seed(42, 49));
  const CandidateEvaluation eval =
      evaluate_pulse_candidate(p, s, th, grid, cfg);
  REQUIRE(eval.stable);
  REQUIRE(eval.series.size() == 21);
  double best = 0.0;
  double best_at = 0.0;
  double lo = eval.series.front().s_rh;
  double hi = lo;
  for (const auto& pt : eval.series) {
    CHECK(pt.s_rh < 0.0);
    CHECK(pt.s_rh ==
          rh_metric(assemble_m(p, s, pt.t)));  // same gate data, bitwise
    if (pt.e_n > best) {
      best = pt.e_n;
      best_at = pt.t;
    }
    lo = std::min(lo, pt.s_rh);
    hi = std::max(hi, pt.s_rh);
  }
  CHECK(eval.peak_e_n == best);
  CHECK(eval.peak_at == best_at);
  CHECK(eval.s_rh_min == lo);
  CHECK(eval.s_rh_max == hi);
  CHECK(eval.peak_ent == doctest::Approx(ent_from_logneg(best)).epsilon(1e-15));
  CHECK(best > 0.0);

  // Threshold mode admits marginally positive metrics that strict rejects.
  SystemParams undamped;
  DriveSchedule faint;
  faint.g_mw2 = Drive::make_constant(5e-6);
  const CandidateEvaluation strict = evaluate_pulse_candidate(
      undamped, faint, th, grid, cfg, StabilityMode::kStrict);
  CHECK_FALSE(strict.stable);
  const CandidateEvaluation lax = evaluate_pulse_candidate(
      undamped, faint, th, grid, cfg, StabilityMode::kPrescreenThreshold, 1e-4);
  CHECK(lax.stable);
}

TEST_CASE("pulse search: provenance, dominance, parallel determinism") {
  const SystemParams p = toy_params();
  const PulseSearchSpace space = toy_pulse_space();
  const ThermalSpec th;
  const TimeGrid grid{1.0, 21};
  const TrotterConfig cfg{10, 3};
  SearchConfig scfg;
  scfg.master_seed = 42;
  scfg.trials = 60;

  const WinnerRecord rec = pulse_search(space, p, th, grid, cfg, scfg);
  REQUIRE(rec.feasible);
  CHECK(rec.trials == 60);
  CHECK(rec.master_seed == 42);
  CHECK(rec.stable_candidates <= rec.prescreen_passed);
  CHECK(rec.prescreen_passed <= rec.trials);
  CHECK(static_cast<int>(rec.feasible_log.size()) == rec.stable_candidates);
  CHECK(rec.stable_candidates == 3);
  CHECK(rec.trial_index == 49);

  // The winner dominates the feasible log and appears in it.
  bool found = false;
  for (const auto& [trial, e_n] : rec.feasible_log) {
    CHECK(rec.peak_e_n >= e_n);
    if (trial == rec.trial_index) {
      found = true;
      CHECK(e_n == rec.peak_e_n);
    }
    if (e_n == rec.peak_e_n) CHECK(trial >= rec.trial_index);  // earliest wins
  }
  CHECK(found);

  // Full provenance: seed, schedule, and scores reproduce bitwise.
  CHECK(rec.seed == trial_seed(scfg.master_seed, rec.trial_index));
  CHECK(same_schedule(rec.schedule, sample_pulse_set(space, rec.seed)));
  const CandidateEvaluation replay =
      evaluate_pulse_candidate(p, rec.schedule, th, grid, cfg);
  CHECK(replay.stable);
  CHECK(replay.peak_e_n == rec.peak_e_n);
  CHECK(replay.peak_at == rec.peak_at);
  CHECK(replay.s_rh_min == rec.s_rh_min);
  CHECK(replay.s_rh_max == rec.s_rh_max);
  CHECK(rec.peak_ent == ent_from_logneg(rec.peak_e_n));

  // Drive ratios are reported against the per-laser maxima.
  CHECK(rec.ratios.entries.at("mw1").ratio > 0.0);
  CHECK(rec.ratios.entries.at("o1").ratio > 0.0);
  CHECK(std::isinf(rec.ratios.entries.at("f").margin));

  // Two workers, same record.
  SearchConfig par = scfg;
  par.workers = 2;
  CHECK(same_winner(pulse_search(space, p, th, grid, cfg, par), rec));

  // An impossible gate yields an infeasible record with intact counters.
  SearchConfig never = scfg;
  never.trials = 8;
  never.prescreen_threshold = -1.0;  // nothing satisfies s_rh < -1 undamped
  const WinnerRecord none = pulse_search(space, p, th, grid, cfg, never);
  CHECK_FALSE(none.feasible);
  CHECK(none.trial_index == -1);
  CHECK(none.trials == 8);
  CHECK(none.prescreen_passed == 0);
  CHECK(none.stable_candidates == 0);
  CHECK(none.feasible_log.empty());
  CHECK(none.peak_e_n == 0.0);

  SearchConfig invalid = scfg;
  invalid.trials = 0;
  CHECK_THROWS_AS(pulse_search(space, p, th, grid, cfg, invalid),
                  std::domain_error);
}

TEST_CASE("spectral search: provenance and parallel determinism") {
  const SystemParams p = toy_params();
  SpectralSearchSpace space;
  space.g_max = 3.0;
  const ThermalSpec th;
  const FrequencyGrid fg = FrequencyGrid::symmetric(5.0, 40);
  SearchConfig scfg;
  scfg.master_seed = 7;
  scfg.trials = 40;

  const WinnerRecord rec = spectral_search(space, p, th, fg, scfg);
  REQUIRE(rec.feasible);
  CHECK(rec.stable_candidates == 10);
  CHECK(rec.trial_index == 34);
  CHECK(rec.peak_e_n > 0.0);

  // Scores are the discrete grid maximum: the replay series must contain
  // the peak at an on-grid frequency, bitwise.
  CHECK(rec.seed == trial_seed(scfg.master_seed, rec.trial_index));
  CHECK(same_schedule(rec.schedule, sample_constant_set(space, rec.seed)));
  const CandidateEvaluation replay = evaluate_spectral_candidate(
      p, rec.schedule, th, fg);
  REQUIRE(replay.stable);
  CHECK(replay.peak_e_n == rec.peak_e_n);
  CHECK(replay.peak_at == rec.peak_at);
  double best = 0.0;
  double best_at = 0.0;
  for (const auto& pt : replay.series) {
    if (pt.e_n > best) {
      best = pt.e_n;
      best_at = pt.t;
    }
  }
  CHECK(best == rec.peak_e_n);
  CHECK(best_at == rec.peak_at);
  CHECK(rec.s_rh_min == rec.s_rh_max);  // constant drives: one metric value

  for (const auto& [trial, e_n] : rec.feasible_log) {
    CHECK(rec.peak_e_n >= e_n);
    if (e_n == rec.peak_e_n) CHECK(trial >= rec.trial_index);
  }

  SearchConfig par = scfg;
  par.workers = 2;
  CHECK(same_winner(spectral_search(space, p, th, fg, par), rec));

  SearchConfig invalid = scfg;
  invalid.trials = -3;
  CHECK_THROWS_AS(spectral_search(space, p, th, fg, invalid),
                  std::domain_error);
}

TEST_CASE("thermal sweeps") {
  // Time domain: an entangling chain toy with the physical damping
  // hierarchy (tiny mechanical rates) whose entanglement degrades
  // monotonically as the mechanical bath heats up.
  SystemParams p = toy_params();
  p.kappa[kMech1] = 0.002;
  p.kappa[kMech2] = 0.002;
  const DriveSchedule s = DriveSchedule::constants(2.0, 1.2, 1.8, 0.5);
  const TimeGrid grid{6.0, 17};
  const TrotterConfig cfg{40, 5};
  const std::vector<double> n_values{0.0, 1.0, 4.0};
  const auto curves =
      thermal_sweep_time(p, s, ThermalSpec{}, grid, cfg, n_values);
  REQUIRE(curves.size() == 3);
  for (std::size_t c = 0; c < curves.size(); ++c) {
    CHECK(curves[c].n_th == n_values[c]);
    REQUIRE(curves[c].points.size() == 17);
    double best = 0.0;
    for (const auto& pt : curves[c].points) best = std::max(best, pt.e_n);
    CHECK(curves[c].peak_e_n == best);
    CHECK(curves[c].s_rh_min == curves.front().s_rh_min);  // shared dynamics
    CHECK(curves[c].s_rh_max == curves.front().s_rh_max);
  }
  CHECK(curves[0].peak_e_n > 0.5);
  CHECK(curves[0].peak_e_n > curves[1].peak_e_n);
  CHECK(curves[1].peak_e_n > curves[2].peak_e_n);

  // Spectral domain: refined peaks sit at or above the discrete maximum and
  // degrade monotonically as well.
  const SystemParams q = toy_params();
  const DriveSchedule cs = DriveSchedule::constants(2.0, 1.2, 1.8, 0.5);
  const FrequencyGrid fg = FrequencyGrid::symmetric(5.0, 40);
  const auto spec =
      thermal_sweep_spectral(q, cs, ThermalSpec{}, fg, n_values);
  REQUIRE(spec.size() == 3);
  for (const auto& curve : spec) {
    double grid_best = 0.0;
    for (const auto& pt : curve.points) grid_best = std::max(grid_best, pt.e_n);
    CHECK(curve.peak_e_n >= grid_best);
    CHECK(curve.s_rh_min == curve.s_rh_max);
    CHECK(curve.s_rh_min < 0.0);
  }
  CHECK(spec[0].peak_e_n > spec[1].peak_e_n);
  CHECK(spec[1].peak_e_n > spec[2].peak_e_n);

  // Pulsed drives have no spectral representation.
  DriveSchedule pulsed = cs;
  pulsed.g_o1 = Drive::make_pulse({0.0, 0.1, 0.1, 0.1, 1.0, 0.0});
  CHECK_THROWS_AS(
      thermal_sweep_spectral(q, pulsed, ThermalSpec{}, fg, n_values),
      std::domain_error);
}
