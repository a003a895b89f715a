#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "oment/config.hpp"
#include "oment/covariance.hpp"
#include "oment/csv.hpp"
#include "oment/model.hpp"
#include "oment/params.hpp"
#include "oment/propagator.hpp"
#include "oment/search.hpp"
#include "oment/spectral.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace oment;

namespace {

constexpr const char* kToolVersion = "1.0.0";
constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 4;

struct CommonOptions {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  int workers = 0;  // 0 = hardware concurrency
  int trotter_n = 0;
  int trap_n = 0;
  int points = 0;
  bool convergence = false;

  CLI::Option* seed_opt = nullptr;
};

void add_common_options(CLI::App* sub, CommonOptions& o) {
  sub->add_option("--config", o.config_path, "Configuration file (INI)")
      ->envname("OMENT_CONFIG");
  o.seed_opt = sub->add_option("--seed", o.seed,
                               "Master seed (overrides [search] master_seed)")
                   ->envname("OMENT_SEED");
  sub->add_option("--workers", o.workers,
                  "Worker threads (default: hardware concurrency)")
      ->envname("OMENT_WORKERS");
  sub->add_option("--out", o.out_dir, "Output directory (default: out)")
      ->envname("OMENT_OUT");
  sub->add_option("--trotter-n", o.trotter_n,
                  "Trotter sub-steps per output interval")
      ->envname("OMENT_TROTTER_N");
  sub->add_option("--trap-n", o.trap_n, "Trapezoid panels per output interval")
      ->envname("OMENT_TRAP_N");
  sub->add_option("--points", o.points, "Output time-grid points")
      ->envname("OMENT_POINTS");
  sub->add_flag("--convergence", o.convergence,
                "Use convergence-grade integration (n=10, N=1600)")
      ->envname("OMENT_CONVERGENCE");
}

Config load_config(const CommonOptions& o) {
  if (o.config_path.empty()) return Config{};
  return Config::parse_file(o.config_path);
}

TimeGrid resolve_grid(const Config& cfg, const CommonOptions& o) {
  TimeGrid g = time_grid_from_config(cfg);
  if (o.points > 0) {
    if (o.points < 2) throw ConfigError("--points must be >= 2");
    g.n_points = o.points;
  }
  return g;
}

TrotterConfig resolve_trotter(const Config& cfg, const CommonOptions& o) {
  TrotterConfig c = trotter_from_config(cfg);
  if (o.convergence) c = TrotterConfig::convergence();
  if (o.trotter_n > 0) c.N = o.trotter_n;
  if (o.trap_n > 0) c.n_trap = o.trap_n;
  return c;
}

int resolve_workers(const CommonOptions& o) {
  if (o.workers > 0) return o.workers;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

SearchConfig resolve_search(const Config& cfg, const CommonOptions& o) {
  SearchConfig s = search_config_from_config(cfg);
  if (o.seed_opt && o.seed_opt->count() > 0) s.master_seed = o.seed;
  s.workers = resolve_workers(o);
  return s;
}

std::string utc_now_string() {
  const std::time_t tt =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class RunTimer {
 public:
  RunTimer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failure for: " + path.string());
}

void write_manifest(const fs::path& out_dir, const std::string& subcommand,
                    const Config& resolved, std::uint64_t seed,
                    const std::vector<std::string>& outputs,
                    double duration_s) {
  json m;
  m["subcommand"] = subcommand;
  m["version"] = kToolVersion;
  m["master_seed"] = seed;
  m["config"] = resolved.serialize();
  m["outputs"] = outputs;
  m["started_at_utc"] = utc_now_string();
  m["duration_s"] = duration_s;
  write_text(out_dir / "manifest.json", m.dump(2) + "\n");
}

json drive_json(const Drive& d) {
  if (!d.is_pulse) return json{{"kind", "constant"}, {"value", d.constant}};
  return json{{"kind", "pulse"},
              {"t_start", d.pulse.t_start},
              {"rise", d.pulse.rise},
              {"plateau", d.pulse.plateau},
              {"fall", d.pulse.fall},
              {"h_peak", d.pulse.h_peak},
              {"h_end", d.pulse.h_end}};
}

json schedule_json(const DriveSchedule& s) {
  return json{{"g_mw1", drive_json(s.g_mw1)},
              {"g_mw2", drive_json(s.g_mw2)},
              {"g_o1", drive_json(s.g_o1)},
              {"g_o2", drive_json(s.g_o2)}};
}

json ratio_json(const RatioReport& r) {
  json entries = json::object();
  for (const auto& [key, e] : r.entries) {
    json item;
    item["ratio"] = std::isfinite(e.ratio) ? json(e.ratio) : json("inf");
    item["minimum"] = e.minimum;
    item["margin"] = std::isfinite(e.margin) ? json(e.margin) : json("inf");
    entries[key] = item;
  }
  return json{{"entries", entries},
              {"any_below_minimum", r.any_below_minimum}};
}

json winner_json(const WinnerRecord& rec) {
  json w;
  w["feasible"] = rec.feasible;
  w["master_seed"] = rec.master_seed;
  w["trial_index"] = rec.trial_index;
  w["seed"] = rec.seed;
  w["trials"] = rec.trials;
  w["prescreen_passed"] = rec.prescreen_passed;
  w["stable_candidates"] = rec.stable_candidates;
  if (rec.feasible) {
    w["schedule"] = schedule_json(rec.schedule);
    w["peak_e_n"] = rec.peak_e_n;
    w["peak_ent"] = rec.peak_ent;
    w["peak_at"] = rec.peak_at;
    w["s_rh_min"] = rec.s_rh_min;
    w["s_rh_max"] = rec.s_rh_max;
    w["ratios"] = ratio_json(rec.ratios);
  }
  json log = json::array();
  for (const auto& [trial, peak] : rec.feasible_log) {
    log.push_back(json{{"trial", trial}, {"peak_e_n", peak}});
  }
  w["feasible_log"] = log;
  return w;
}

void append_time_series_rows(CsvWriter& csv,
                             const std::vector<EntanglementPoint>& series,
                             const DriveSchedule& schedule) {
  for (const EntanglementPoint& p : series) {
    const DriveValues dv = drives_at(schedule, p.t);
    csv.add_row({p.t, p.e_n, p.ent, p.s_rh, dv.g_mw1, dv.g_mw2, dv.g_o1,
                 dv.g_o2});
  }
}

// ---------------------------------------------------------------------------

int cmd_derive_params(const CommonOptions& o, double g0_override,
                      bool g0_set) {
  RunTimer timer;
  fs::create_directories(o.out_dir);
  const SystemParams p =
      g0_set ? derive_reference_params(g0_override) : derive_reference_params();

  Config out;
  system_params_to_config(p, out);
  const std::string text = out.serialize();
  const fs::path params_path = fs::path(o.out_dir) / "params.ini";
  write_text(params_path, text);

  // Round-trip guard: the emitted file must re-load to identical values.
  const Config back = Config::parse_string(text);
  const SystemParams q = system_params_from_config(back);
  for (int k = 0; k < kNumModes; ++k) {
    if (q.kappa[k] != p.kappa[k]) {
      throw std::runtime_error("parameter round-trip mismatch (kappa)");
    }
  }
  if (q.g_f != p.g_f || q.g0 != p.g0 || q.conv_C != p.conv_C) {
    throw std::runtime_error("parameter round-trip mismatch");
  }

  std::cout << "wrote " << params_path.string() << "\n"
            << "g0 = " << format_double(p.g0)
            << " rad/s, conv_C = " << format_double(p.conv_C)
            << " rad/s, g_f = " << format_double(p.g_f) << " rad/s\n";
  write_manifest(o.out_dir, "derive-params", out, 0, {params_path.string()},
                 timer.seconds());
  return kExitOk;
}

int cmd_stability_scan(const CommonOptions& o) {
  RunTimer timer;
  const Config cfg = load_config(o);
  const SystemParams params = system_params_from_config(cfg);
  const ScanSettings scan_cfg = scan_settings_from_config(cfg);
  const ScanGrid grid =
      default_scan_grid(params.g0, scan_cfg.points_per_axis);
  const ScanResult scan = stability_scan(params, scan_cfg.r, grid);

  fs::create_directories(o.out_dir);
  CsvWriter csv({"g_o1", "g_o2", "S_RH"});
  for (std::size_t i = 0; i < grid.g_o1_values.size(); ++i) {
    for (std::size_t j = 0; j < grid.g_o2_values.size(); ++j) {
      csv.add_row({grid.g_o1_values[i], grid.g_o2_values[j],
                   scan.surface[i][j]});
    }
  }
  const fs::path csv_path = fs::path(o.out_dir) / "scan.csv";
  csv.write_file(csv_path.string());

  const bool stable = scan.min_s_rh < 0.0;
  json summary;
  summary["min_s_rh"] = scan.min_s_rh;
  summary["argmin_g_o1"] = scan.argmin_g_o1;
  summary["argmin_g_o2"] = scan.argmin_g_o2;
  summary["no_stable_point"] = !stable;
  summary["r"] = scan_cfg.r;
  summary["points_per_axis"] = scan_cfg.points_per_axis;
  const fs::path summary_path = fs::path(o.out_dir) / "summary.json";
  write_text(summary_path, summary.dump(2) + "\n");

  std::cout << "min S_RH = " << format_double(scan.min_s_rh) << " rad/s at (g_o1, g_o2) = ("
            << format_double(scan.argmin_g_o1) << ", "
            << format_double(scan.argmin_g_o2) << ")"
            << (stable ? "" : "  [no stable point]") << "\n";

  Config resolved;
  system_params_to_config(params, resolved);
  resolved.set_double("scan", "r", scan_cfg.r);
  resolved.set_int("scan", "points_per_axis", scan_cfg.points_per_axis);
  write_manifest(o.out_dir, "stability-scan", resolved, 0,
                 {csv_path.string(), summary_path.string()}, timer.seconds());
  return kExitOk;
}

int cmd_simulate(const CommonOptions& o) {
  RunTimer timer;
  const Config cfg = load_config(o);
  const SystemParams params = system_params_from_config(cfg);
  const ThermalSpec thermal = thermal_from_config(cfg);
  const DriveSchedule drives = drives_from_config(cfg);
  const TimeGrid grid = resolve_grid(cfg, o);
  const TrotterConfig trotter = resolve_trotter(cfg, o);

  const std::vector<EntanglementPoint> series =
      entanglement_time_series(params, drives, thermal, grid, trotter);

  fs::create_directories(o.out_dir);
  CsvWriter csv({"t", "E_N", "ent", "S_RH", "g_mw1", "g_mw2", "g_o1", "g_o2"});
  append_time_series_rows(csv, series, drives);
  const fs::path csv_path = fs::path(o.out_dir) / "timeseries.csv";
  csv.write_file(csv_path.string());

  const EntanglementPoint* peak = &series.front();
  double s_min = series.front().s_rh, s_max = series.front().s_rh;
  for (const EntanglementPoint& p : series) {
    if (p.e_n > peak->e_n) peak = &p;
    s_min = std::min(s_min, p.s_rh);
    s_max = std::max(s_max, p.s_rh);
  }
  json summary;
  summary["peak_e_n"] = peak->e_n;
  summary["peak_ent"] = peak->ent;
  summary["peak_at"] = peak->t;
  summary["s_rh_min"] = s_min;
  summary["s_rh_max"] = s_max;
  summary["points"] = static_cast<int>(series.size());
  const fs::path summary_path = fs::path(o.out_dir) / "summary.json";
  write_text(summary_path, summary.dump(2) + "\n");

  std::cout << "peak E_N = " << format_double(peak->e_n) << " at t = "
            << format_double(peak->t) << " s (" << series.size()
            << " points)\n";

  Config resolved;
  system_params_to_config(params, resolved);
  thermal_to_config(thermal, resolved);
  time_grid_to_config(grid, resolved);
  trotter_to_config(trotter, resolved);
  drives_to_config(drives, resolved);
  write_manifest(o.out_dir, "simulate", resolved, 0,
                 {csv_path.string(), summary_path.string()}, timer.seconds());
  return kExitOk;
}

int cmd_spectral(const CommonOptions& o) {
  RunTimer timer;
  const Config cfg = load_config(o);
  const SystemParams params = system_params_from_config(cfg);
  const ThermalSpec thermal = thermal_from_config(cfg);
  const DriveSchedule drives = drives_from_config(cfg);
  const FrequencyGrid fgrid = frequency_grid_from_config(cfg);

  const std::vector<EntanglementPoint> spectrum =
      entanglement_spectrum(params, drives, thermal, fgrid);
  const SpectralPeak peak = spectral_peak(params, drives, thermal, fgrid);

  fs::create_directories(o.out_dir);
  CsvWriter csv({"omega_rad_s", "E_N", "ent", "S_RH"});
  for (const EntanglementPoint& p : spectrum) {
    csv.add_row({p.t, p.e_n, p.ent, p.s_rh});
  }
  const fs::path csv_path = fs::path(o.out_dir) / "spectrum.csv";
  csv.write_file(csv_path.string());

  json summary;
  summary["peak_omega"] = peak.omega;
  summary["peak_e_n"] = peak.e_n;
  summary["peak_ent"] = peak.ent;
  summary["s_rh"] = peak.s_rh;
  summary["points"] = static_cast<int>(spectrum.size());
  const fs::path summary_path = fs::path(o.out_dir) / "summary.json";
  write_text(summary_path, summary.dump(2) + "\n");

  std::cout << "peak ent = " << format_double(peak.ent) << " (E_N = "
            << format_double(peak.e_n) << ") at omega = "
            << format_double(peak.omega) << " rad/s, S_RH = "
            << format_double(peak.s_rh) << "\n";
  if (peak.s_rh >= 0.0) {
    std::cerr << "warning: drive point is dynamically unstable (S_RH = "
              << format_double(peak.s_rh)
              << " >= 0); no steady state exists and the reported spectrum "
                 "is not physical\n";
  }

  Config resolved;
  system_params_to_config(params, resolved);
  thermal_to_config(thermal, resolved);
  drives_to_config(drives, resolved);
  frequency_grid_to_config_inputs(
      cfg.get_double_or("frequency", "omega_max", kDefaultOmegaMax),
      static_cast<int>(
          cfg.get_int_or("frequency", "half_points", kDefaultHalfPoints)),
      resolved);
  write_manifest(o.out_dir, "spectral", resolved, 0,
                 {csv_path.string(), summary_path.string()}, timer.seconds());
  return kExitOk;
}

int cmd_search_pulses(const CommonOptions& o) {
  RunTimer timer;
  const Config cfg = load_config(o);
  const SystemParams params = system_params_from_config(cfg);
  const ThermalSpec thermal = thermal_from_config(cfg);
  const TimeGrid grid = resolve_grid(cfg, o);
  const TrotterConfig trotter = resolve_trotter(cfg, o);
  const SearchConfig scfg = resolve_search(cfg, o);
  const PulseSearchSpace space = pulse_space_from_config(cfg, params.g0);

  const WinnerRecord rec =
      pulse_search(space, params, thermal, grid, trotter, scfg);

  fs::create_directories(o.out_dir);
  const fs::path winner_path = fs::path(o.out_dir) / "winner.json";
  std::vector<std::string> outputs = {winner_path.string()};

  if (rec.feasible) {
    const CandidateEvaluation eval = evaluate_pulse_candidate(
        params, rec.schedule, thermal, grid, trotter, scfg.stability_mode,
        scfg.prescreen_threshold);
    if (!eval.stable || eval.peak_e_n != rec.peak_e_n) {
      throw std::runtime_error(
          "winner re-evaluation failed to reproduce the recorded scores");
    }
    CsvWriter csv(
        {"t", "E_N", "ent", "S_RH", "g_mw1", "g_mw2", "g_o1", "g_o2"});
    append_time_series_rows(csv, eval.series, rec.schedule);
    const fs::path csv_path = fs::path(o.out_dir) / "winner.csv";
    csv.write_file(csv_path.string());
    outputs.push_back(csv_path.string());
  }

  write_text(winner_path, winner_json(rec).dump(2) + "\n");

  Config resolved;
  system_params_to_config(params, resolved);
  thermal_to_config(thermal, resolved);
  time_grid_to_config(grid, resolved);
  trotter_to_config(trotter, resolved);
  resolved.set_uint64("search", "master_seed", scfg.master_seed);
  resolved.set_int("search", "trials", scfg.trials);
  resolved.set_double("search", "prescreen_threshold",
                      scfg.prescreen_threshold);
  resolved.set_string("search", "stability_mode",
                      scfg.stability_mode == StabilityMode::kStrict
                          ? "strict"
                          : "threshold");
  resolved.set_double("search", "horizon", space.horizon);
  resolved.set_double("search", "t_start_max", space.t_start_max);
  resolved.set_double("search", "rise_min", space.rise_min);
  resolved.set_double("search", "rise_max", space.rise_max);
  resolved.set_double("search", "plateau_max", space.plateau_max);
  resolved.set_double("search", "fall_min", space.fall_min);
  resolved.set_double("search", "fall_max", space.fall_max);
  resolved.set_double("search", "height_max", space.height_max);
  write_manifest(o.out_dir, "search-pulses", resolved, scfg.master_seed,
                 outputs, timer.seconds());

  if (!rec.feasible) {
    std::cerr << "no feasible candidate in " << rec.trials << " trials ("
              << rec.prescreen_passed << " passed the pre-screen)\n";
    return kExitInfeasible;
  }
  std::cout << "winner: trial " << rec.trial_index << ", peak E_N = "
            << format_double(rec.peak_e_n) << " at t = "
            << format_double(rec.peak_at) << " s  (" << rec.stable_candidates
            << "/" << rec.trials << " stable)\n";
  return kExitOk;
}

int cmd_search_spectral(const CommonOptions& o) {
  RunTimer timer;
  const Config cfg = load_config(o);
  const SystemParams params = system_params_from_config(cfg);
  const ThermalSpec thermal = thermal_from_config(cfg);
  const FrequencyGrid fgrid = frequency_grid_from_config(cfg);
  const SearchConfig scfg = resolve_search(cfg, o);
  const SpectralSearchSpace space =
      spectral_space_from_config(cfg, params.g0);

  const WinnerRecord rec =
      spectral_search(space, params, thermal, fgrid, scfg);

  fs::create_directories(o.out_dir);
  const fs::path winner_path = fs::path(o.out_dir) / "winner.json";
  std::vector<std::string> outputs = {winner_path.string()};

  if (rec.feasible) {
    const CandidateEvaluation eval = evaluate_spectral_candidate(
        params, rec.schedule, thermal, fgrid, scfg.stability_mode,
        scfg.prescreen_threshold);
    if (!eval.stable || eval.peak_e_n != rec.peak_e_n) {
      throw std::runtime_error(
          "winner re-evaluation failed to reproduce the recorded scores");
    }
    CsvWriter csv({"omega_rad_s", "E_N", "ent", "S_RH"});
    for (const EntanglementPoint& p : eval.series) {
      csv.add_row({p.t, p.e_n, p.ent, p.s_rh});
    }
    const fs::path csv_path = fs::path(o.out_dir) / "winner.csv";
    csv.write_file(csv_path.string());
    outputs.push_back(csv_path.string());
  }

  write_text(winner_path, winner_json(rec).dump(2) + "\n");

  Config resolved;
  system_params_to_config(params, resolved);
  thermal_to_config(thermal, resolved);
  frequency_grid_to_config_inputs(
      cfg.get_double_or("frequency", "omega_max", kDefaultOmegaMax),
      static_cast<int>(
          cfg.get_int_or("frequency", "half_points", kDefaultHalfPoints)),
      resolved);
  resolved.set_uint64("search", "master_seed", scfg.master_seed);
  resolved.set_int("search", "trials", scfg.trials);
  resolved.set_string("search", "stability_mode",
                      scfg.stability_mode == StabilityMode::kStrict
                          ? "strict"
                          : "threshold");
  resolved.set_double("search", "g_max", space.g_max);
  write_manifest(o.out_dir, "search-spectral", resolved, scfg.master_seed,
                 outputs, timer.seconds());

  if (!rec.feasible) {
    std::cerr << "no feasible candidate in " << rec.trials << " trials\n";
    return kExitInfeasible;
  }
  std::cout << "winner: trial " << rec.trial_index << ", peak ent = "
            << format_double(rec.peak_ent) << " (E_N = "
            << format_double(rec.peak_e_n) << ") at omega = "
            << format_double(rec.peak_at) << " rad/s\n";
  return kExitOk;
}

int cmd_thermal_sweep(const CommonOptions& o, const std::string& domain) {
  RunTimer timer;
  const Config cfg = load_config(o);
  const SystemParams params = system_params_from_config(cfg);
  const ThermalSpec base = thermal_from_config(cfg);
  const DriveSchedule drives = drives_from_config(cfg);
  const std::vector<double> n_th_values = sweep_values_from_config(cfg);

  std::string resolved_domain = domain;
  if (resolved_domain == "auto") {
    resolved_domain = drives.all_constant() ? "spectral" : "time";
  }
  if (resolved_domain != "time" && resolved_domain != "spectral") {
    throw ConfigError("--domain must be auto, time, or spectral");
  }

  fs::create_directories(o.out_dir);
  std::vector<ThermalCurve> curves;
  std::string axis_name;
  Config resolved;
  system_params_to_config(params, resolved);
  thermal_to_config(base, resolved);
  drives_to_config(drives, resolved);
  resolved.set_double_list("sweep", "n_th_values", n_th_values);

  if (resolved_domain == "time") {
    const TimeGrid grid = resolve_grid(cfg, o);
    const TrotterConfig trotter = resolve_trotter(cfg, o);
    curves = thermal_sweep_time(params, drives, base, grid, trotter,
                                n_th_values);
    axis_name = "t";
    time_grid_to_config(grid, resolved);
    trotter_to_config(trotter, resolved);
  } else {
    const FrequencyGrid fgrid = frequency_grid_from_config(cfg);
    curves = thermal_sweep_spectral(params, drives, base, fgrid, n_th_values);
    axis_name = "omega_rad_s";
    frequency_grid_to_config_inputs(
        cfg.get_double_or("frequency", "omega_max", kDefaultOmegaMax),
        static_cast<int>(
            cfg.get_int_or("frequency", "half_points", kDefaultHalfPoints)),
        resolved);
  }

  CsvWriter csv({"n_th", axis_name, "E_N", "ent", "S_RH"});
  for (const ThermalCurve& c : curves) {
    for (const EntanglementPoint& p : c.points) {
      csv.add_row({c.n_th, p.t, p.e_n, p.ent, p.s_rh});
    }
  }
  const fs::path csv_path = fs::path(o.out_dir) / "sweep.csv";
  csv.write_file(csv_path.string());

  json per_curve = json::array();
  for (const ThermalCurve& c : curves) {
    per_curve.push_back(json{{"n_th", c.n_th},
                             {"peak_e_n", c.peak_e_n},
                             {"peak_ent", c.peak_ent},
                             {"peak_at", c.peak_at},
                             {"s_rh_min", c.s_rh_min},
                             {"s_rh_max", c.s_rh_max}});
  }
  json summary;
  summary["domain"] = resolved_domain;
  summary["curves"] = per_curve;
  const fs::path summary_path = fs::path(o.out_dir) / "summary.json";
  write_text(summary_path, summary.dump(2) + "\n");

  std::cout << "swept " << curves.size() << " bath occupations ("
            << resolved_domain << " domain); peak ent:";
  for (const ThermalCurve& c : curves) {
    std::cout << "  n_th=" << format_double(c.n_th) << " -> "
              << format_double(c.peak_ent);
  }
  std::cout << "\n";
  if (resolved_domain == "spectral" && !curves.empty() &&
      curves.front().s_rh_max >= 0.0) {
    std::cerr << "warning: drive point is dynamically unstable (S_RH = "
              << format_double(curves.front().s_rh_max)
              << " >= 0); no steady state exists and the reported spectra "
                 "are not physical\n";
  }

  write_manifest(o.out_dir, "thermal-sweep", resolved, 0,
                 {csv_path.string(), summary_path.string()}, timer.seconds());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Entanglement simulator for fiber-linked electro-optomechanical "
      "cavity chains: stability scans, time-domain and spectral "
      "entanglement pipelines, and random-search drive optimization"};
  app.require_subcommand(1);

  CommonOptions opt;
  int exit_code = kExitOk;

  auto* derive = app.add_subcommand(
      "derive-params", "Write the reference parameter set");
  double g0_override = 0.0;
  CLI::Option* g0_opt = derive->add_option(
      "--g0", g0_override, "Override g0 (rad/s); damping scales with it");
  add_common_options(derive, opt);
  derive->callback([&] {
    exit_code = cmd_derive_params(opt, g0_override, g0_opt->count() > 0);
  });

  auto* scan = app.add_subcommand(
      "stability-scan", "Stability surface over the optical-drive grid");
  add_common_options(scan, opt);
  scan->callback([&] { exit_code = cmd_stability_scan(opt); });

  auto* simulate = app.add_subcommand(
      "simulate", "Time-domain entanglement curve for a drive schedule");
  add_common_options(simulate, opt);
  simulate->callback([&] { exit_code = cmd_simulate(opt); });

  auto* spectral = app.add_subcommand(
      "spectral", "Frequency-filtered entanglement spectrum (constant drives)");
  add_common_options(spectral, opt);
  spectral->callback([&] { exit_code = cmd_spectral(opt); });

  auto* search_pulses = app.add_subcommand(
      "search-pulses", "Random search over trapezoid pulse schedules");
  add_common_options(search_pulses, opt);
  search_pulses->callback([&] { exit_code = cmd_search_pulses(opt); });

  auto* search_spectral = app.add_subcommand(
      "search-spectral", "Random search over constant drive strengths");
  add_common_options(search_spectral, opt);
  search_spectral->callback([&] { exit_code = cmd_search_spectral(opt); });

  auto* sweep = app.add_subcommand(
      "thermal-sweep", "Entanglement curves across bath occupations");
  std::string domain = "auto";
  sweep->add_option("--domain", domain,
                    "auto (default), time, or spectral");
  add_common_options(sweep, opt);
  sweep->callback([&] { exit_code = cmd_thermal_sweep(opt, domain); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::runtime_error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return exit_code;
}
