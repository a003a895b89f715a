#include "oment/config.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace oment {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  double value = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ConfigError("invalid number '" + text + "' for " + where);
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  if (!std::isfinite(value)) {
    throw std::runtime_error("format_double: non-finite value");
  }
  std::array<char, 64> buf;
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(),
                                       value);
  if (ec != std::errc{}) {
    throw std::runtime_error("format_double: render failure");
  }
  return std::string(buf.data(), ptr);
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream all;
  all << in.rdbuf();
  return parse_string(all.str());
}

Config Config::parse_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  std::string current;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3) {
        throw ConfigError("malformed section header at line " +
                          std::to_string(line_no));
      }
      current = trim(t.substr(1, t.size() - 2));
      cfg.section_ref(current);
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected key = value at line " +
                        std::to_string(line_no));
    }
    if (current.empty()) {
      throw ConfigError("key before any [section] at line " +
                        std::to_string(line_no));
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("empty key at line " + std::to_string(line_no));
    }
    cfg.set_string(current, key, value);
  }
  return cfg;
}

std::string Config::serialize() const {
  std::ostringstream out;
  bool first = true;
  for (const Section& s : sections_) {
    if (!first) out << "\n";
    first = false;
    out << "[" << s.name << "]\n";
    for (const auto& [key, value] : s.entries) {
      out << key << " = " << value << "\n";
    }
  }
  return out.str();
}

const std::string* Config::find(const std::string& section,
                                const std::string& key) const {
  for (const Section& s : sections_) {
    if (s.name != section) continue;
    for (const auto& [k, v] : s.entries) {
      if (k == key) return &v;
    }
  }
  return nullptr;
}

Config::Section& Config::section_ref(const std::string& name) {
  for (Section& s : sections_) {
    if (s.name == name) return s;
  }
  sections_.push_back(Section{name, {}});
  return sections_.back();
}

bool Config::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

std::string Config::get_string(const std::string& section,
                               const std::string& key) const {
  const std::string* v = find(section, key);
  if (!v) throw ConfigError("missing config key [" + section + "] " + key);
  return *v;
}

double Config::get_double(const std::string& section,
                          const std::string& key) const {
  return parse_double(get_string(section, key), "[" + section + "] " + key);
}

double Config::get_double_or(const std::string& section,
                             const std::string& key, double fallback) const {
  const std::string* v = find(section, key);
  if (!v) return fallback;
  return parse_double(*v, "[" + section + "] " + key);
}

long long Config::get_int(const std::string& section,
                          const std::string& key) const {
  const std::string t = trim(get_string(section, key));
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size()) {
    throw ConfigError("invalid integer '" + t + "' for [" + section + "] " +
                      key);
  }
  return value;
}

long long Config::get_int_or(const std::string& section,
                             const std::string& key, long long fallback) const {
  if (!has(section, key)) return fallback;
  return get_int(section, key);
}

std::uint64_t Config::get_uint64_or(const std::string& section,
                                    const std::string& key,
                                    std::uint64_t fallback) const {
  const std::string* v = find(section, key);
  if (!v) return fallback;
  const std::string t = trim(*v);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size()) {
    throw ConfigError("invalid unsigned integer '" + t + "' for [" + section +
                      "] " + key);
  }
  return value;
}

std::vector<double> Config::get_double_list(const std::string& section,
                                            const std::string& key) const {
  const std::string text = get_string(section, key);
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = trim(text.substr(start, comma - start));
    if (!item.empty()) {
      out.push_back(parse_double(item, "[" + section + "] " + key));
    }
    start = comma + 1;
  }
  if (out.empty()) {
    throw ConfigError("empty list for [" + section + "] " + key);
  }
  return out;
}

void Config::set_string(const std::string& section, const std::string& key,
                        const std::string& value) {
  Section& s = section_ref(section);
  for (auto& [k, v] : s.entries) {
    if (k == key) {
      v = value;
      return;
    }
  }
  s.entries.emplace_back(key, value);
}

void Config::set_double(const std::string& section, const std::string& key,
                        double value) {
  set_string(section, key, format_double(value));
}

void Config::set_int(const std::string& section, const std::string& key,
                     long long value) {
  set_string(section, key, std::to_string(value));
}

void Config::set_uint64(const std::string& section, const std::string& key,
                        std::uint64_t value) {
  set_string(section, key, std::to_string(value));
}

void Config::set_double_list(const std::string& section,
                             const std::string& key,
                             const std::vector<double>& values) {
  std::string joined;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) joined += ",";
    joined += format_double(values[i]);
  }
  set_string(section, key, joined);
}

namespace {

const char* const kModeKeys[kNumModes] = {"o1", "m1", "mw1", "f",
                                          "o2", "m2", "mw2"};
const char* const kDriveKeys[4] = {"g_mw1", "g_mw2", "g_o1", "g_o2"};

Drive drive_from_config(const Config& cfg, const std::string& prefix) {
  const std::string kind =
      cfg.has("drives", prefix + "_kind")
          ? cfg.get_string("drives", prefix + "_kind")
          : "constant";
  if (kind == "constant") {
    return Drive::make_constant(
        cfg.get_double_or("drives", prefix + "_value", 0.0));
  }
  if (kind == "pulse") {
    TrapezoidPulse p;
    p.t_start = cfg.get_double_or("drives", prefix + "_t_start", 0.0);
    p.rise = cfg.get_double_or("drives", prefix + "_rise", 0.0);
    p.plateau = cfg.get_double_or("drives", prefix + "_plateau", 0.0);
    p.fall = cfg.get_double_or("drives", prefix + "_fall", 0.0);
    p.h_peak = cfg.get_double_or("drives", prefix + "_h_peak", 0.0);
    p.h_end = cfg.get_double_or("drives", prefix + "_h_end", 0.0);
    return Drive::make_pulse(p);
  }
  throw ConfigError("drive kind for " + prefix +
                    " must be 'constant' or 'pulse', got '" + kind + "'");
}

void drive_to_config(const Drive& d, const std::string& prefix, Config& cfg) {
  if (!d.is_pulse) {
    cfg.set_string("drives", prefix + "_kind", "constant");
    cfg.set_double("drives", prefix + "_value", d.constant);
    return;
  }
  cfg.set_string("drives", prefix + "_kind", "pulse");
  cfg.set_double("drives", prefix + "_t_start", d.pulse.t_start);
  cfg.set_double("drives", prefix + "_rise", d.pulse.rise);
  cfg.set_double("drives", prefix + "_plateau", d.pulse.plateau);
  cfg.set_double("drives", prefix + "_fall", d.pulse.fall);
  cfg.set_double("drives", prefix + "_h_peak", d.pulse.h_peak);
  cfg.set_double("drives", prefix + "_h_end", d.pulse.h_end);
}

}  // namespace

SystemParams system_params_from_config(const Config& cfg) {
  const SystemParams ref = derive_reference_params();
  const double g0 = cfg.get_double_or("system", "g0", ref.g0);
  SystemParams p = derive_reference_params(g0);
  for (int k = 0; k < kNumModes; ++k) {
    p.kappa[k] = cfg.get_double_or(
        "system", std::string("kappa_") + kModeKeys[k], p.kappa[k]);
  }
  p.g_f = cfg.get_double_or("system", "g_f", p.g_f);
  p.conv_C = cfg.get_double_or("system", "conv_c", p.conv_C);
  return p;
}

void system_params_to_config(const SystemParams& p, Config& cfg) {
  cfg.set_double("system", "g0", p.g0);
  for (int k = 0; k < kNumModes; ++k) {
    cfg.set_double("system", std::string("kappa_") + kModeKeys[k], p.kappa[k]);
  }
  cfg.set_double("system", "g_f", p.g_f);
  cfg.set_double("system", "conv_c", p.conv_C);
}

ThermalSpec thermal_from_config(const Config& cfg) {
  ThermalSpec t;
  for (int k = 0; k < kNumModes; ++k) {
    t.n_bar[k] = cfg.get_double_or(
        "thermal", std::string("n_bar_") + kModeKeys[k], 0.0);
  }
  t.N_th = cfg.get_double_or("thermal", "n_th", 0.0);
  t.Q_th = cfg.get_double_or("thermal", "q_th", 0.0);
  return t;
}

void thermal_to_config(const ThermalSpec& t, Config& cfg) {
  for (int k = 0; k < kNumModes; ++k) {
    cfg.set_double("thermal", std::string("n_bar_") + kModeKeys[k],
                   t.n_bar[k]);
  }
  cfg.set_double("thermal", "n_th", t.N_th);
  cfg.set_double("thermal", "q_th", t.Q_th);
}

TimeGrid time_grid_from_config(const Config& cfg) {
  TimeGrid g;
  g.t_end = cfg.get_double_or("grid", "t_end", 2e-7);
  g.n_points = static_cast<int>(cfg.get_int_or("grid", "points", 1000));
  if (!(g.t_end > 0.0) || g.n_points < 2) {
    throw ConfigError("[grid] requires t_end > 0 and points >= 2");
  }
  return g;
}

void time_grid_to_config(const TimeGrid& g, Config& cfg) {
  cfg.set_double("grid", "t_end", g.t_end);
  cfg.set_int("grid", "points", g.n_points);
}

TrotterConfig trotter_from_config(const Config& cfg) {
  TrotterConfig c;
  c.N = static_cast<int>(cfg.get_int_or("trotter", "n", c.N));
  c.n_trap = static_cast<int>(cfg.get_int_or("trotter", "trap", c.n_trap));
  if (c.N < 1 || c.n_trap < 1) {
    throw ConfigError("[trotter] requires n >= 1 and trap >= 1");
  }
  return c;
}

void trotter_to_config(const TrotterConfig& c, Config& cfg) {
  cfg.set_int("trotter", "n", c.N);
  cfg.set_int("trotter", "trap", c.n_trap);
}

DriveSchedule drives_from_config(const Config& cfg) {
  DriveSchedule s;
  s.g_mw1 = drive_from_config(cfg, kDriveKeys[0]);
  s.g_mw2 = drive_from_config(cfg, kDriveKeys[1]);
  s.g_o1 = drive_from_config(cfg, kDriveKeys[2]);
  s.g_o2 = drive_from_config(cfg, kDriveKeys[3]);
  return s;
}

void drives_to_config(const DriveSchedule& s, Config& cfg) {
  drive_to_config(s.g_mw1, kDriveKeys[0], cfg);
  drive_to_config(s.g_mw2, kDriveKeys[1], cfg);
  drive_to_config(s.g_o1, kDriveKeys[2], cfg);
  drive_to_config(s.g_o2, kDriveKeys[3], cfg);
}

FrequencyGrid frequency_grid_from_config(const Config& cfg) {
  const double omega_max =
      cfg.get_double_or("frequency", "omega_max", kDefaultOmegaMax);
  const int half_points = static_cast<int>(
      cfg.get_int_or("frequency", "half_points", kDefaultHalfPoints));
  if (!(omega_max > 0.0) || half_points < 1) {
    throw ConfigError("[frequency] requires omega_max > 0, half_points >= 1");
  }
  return FrequencyGrid::symmetric(omega_max, half_points);
}

void frequency_grid_to_config_inputs(double omega_max, int half_points,
                                     Config& cfg) {
  cfg.set_double("frequency", "omega_max", omega_max);
  cfg.set_int("frequency", "half_points", half_points);
}

SearchConfig search_config_from_config(const Config& cfg) {
  SearchConfig s;
  s.master_seed = cfg.get_uint64_or("search", "master_seed", s.master_seed);
  s.trials = static_cast<int>(cfg.get_int_or("search", "trials", s.trials));
  s.prescreen_threshold = cfg.get_double_or("search", "prescreen_threshold",
                                            s.prescreen_threshold);
  if (cfg.has("search", "stability_mode")) {
    const std::string mode = cfg.get_string("search", "stability_mode");
    if (mode == "strict") {
      s.stability_mode = StabilityMode::kStrict;
    } else if (mode == "threshold") {
      s.stability_mode = StabilityMode::kPrescreenThreshold;
    } else {
      throw ConfigError("stability_mode must be 'strict' or 'threshold'");
    }
  }
  if (s.trials < 1) throw ConfigError("[search] trials must be >= 1");
  return s;
}

PulseSearchSpace pulse_space_from_config(const Config& cfg, double g0) {
  PulseSearchSpace s = PulseSearchSpace::defaults(g0);
  s.horizon = cfg.get_double_or("search", "horizon", s.horizon);
  s.t_start_max = cfg.get_double_or("search", "t_start_max", s.t_start_max);
  s.rise_min = cfg.get_double_or("search", "rise_min", s.rise_min);
  s.rise_max = cfg.get_double_or("search", "rise_max", s.rise_max);
  s.plateau_max = cfg.get_double_or("search", "plateau_max", s.plateau_max);
  s.fall_min = cfg.get_double_or("search", "fall_min", s.fall_min);
  s.fall_max = cfg.get_double_or("search", "fall_max", s.fall_max);
  s.height_max = cfg.get_double_or("search", "height_max", s.height_max);
  try {
    s.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
  return s;
}

SpectralSearchSpace spectral_space_from_config(const Config& cfg, double g0) {
  SpectralSearchSpace s = SpectralSearchSpace::defaults(g0);
  s.g_max = cfg.get_double_or("search", "g_max", s.g_max);
  try {
    s.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
  return s;
}

ScanSettings scan_settings_from_config(const Config& cfg) {
  ScanSettings s;
  s.r = cfg.get_double_or("scan", "r", s.r);
  s.points_per_axis = static_cast<int>(
      cfg.get_int_or("scan", "points_per_axis", s.points_per_axis));
  if (s.r < 0.0 || s.points_per_axis < 1) {
    throw ConfigError("[scan] requires r >= 0 and points_per_axis >= 1");
  }
  return s;
}

std::vector<double> sweep_values_from_config(const Config& cfg) {
  if (!cfg.has("sweep", "n_th_values")) return {0.0, 1e3, 1e6};
  return cfg.get_double_list("sweep", "n_th_values");
}

}  // namespace oment
