#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "oment/model.hpp"
#include "oment/params.hpp"
#include "oment/propagator.hpp"
#include "oment/search.hpp"
#include "oment/spectral.hpp"

namespace oment {

// Invalid or missing configuration input (distinct from numeric failures so
// the CLI can map it to its own exit code).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat INI-style configuration: [section] headers, key = value lines,
// '#'/';' comments. Doubles are rendered with shortest round-trip precision,
// so serialize() -> parse() reproduces every value bit-exactly. Section and
// key order is preserved for stable output.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);
  std::string serialize() const;

  bool has(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section,
                         const std::string& key) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double_or(const std::string& section, const std::string& key,
                       double fallback) const;
  long long get_int(const std::string& section, const std::string& key) const;
  long long get_int_or(const std::string& section, const std::string& key,
                       long long fallback) const;
  std::uint64_t get_uint64_or(const std::string& section,
                              const std::string& key,
                              std::uint64_t fallback) const;
  // Comma-separated list of doubles.
  std::vector<double> get_double_list(const std::string& section,
                                      const std::string& key) const;

  void set_string(const std::string& section, const std::string& key,
                  const std::string& value);
  void set_double(const std::string& section, const std::string& key,
                  double value);
  void set_int(const std::string& section, const std::string& key,
               long long value);
  void set_uint64(const std::string& section, const std::string& key,
                  std::uint64_t value);
  void set_double_list(const std::string& section, const std::string& key,
                       const std::vector<double>& values);

 private:
  struct Section {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;
  };
  std::vector<Section> sections_;

  const std::string* find(const std::string& section,
                          const std::string& key) const;
  Section& section_ref(const std::string& name);
};

// Shortest decimal rendering that parses back to the identical double.
std::string format_double(double value);

// Typed bridges. Loaders start from the documented defaults (reference
// parameters, vacuum occupations, coarse quadrature, zero drives) and
// override whatever keys are present, so every section is optional.
SystemParams system_params_from_config(const Config& cfg);
void system_params_to_config(const SystemParams& p, Config& cfg);

ThermalSpec thermal_from_config(const Config& cfg);
void thermal_to_config(const ThermalSpec& t, Config& cfg);

TimeGrid time_grid_from_config(const Config& cfg);
void time_grid_to_config(const TimeGrid& g, Config& cfg);

TrotterConfig trotter_from_config(const Config& cfg);
void trotter_to_config(const TrotterConfig& c, Config& cfg);

DriveSchedule drives_from_config(const Config& cfg);
void drives_to_config(const DriveSchedule& s, Config& cfg);

FrequencyGrid frequency_grid_from_config(const Config& cfg);
void frequency_grid_to_config_inputs(double omega_max, int half_points,
                                     Config& cfg);

SearchConfig search_config_from_config(const Config& cfg);
PulseSearchSpace pulse_space_from_config(const Config& cfg, double g0);
SpectralSearchSpace spectral_space_from_config(const Config& cfg, double g0);

// [scan]: r (squeezing parameter) and points_per_axis.
struct ScanSettings {
  double r = 3.85;
  int points_per_axis = 100;
};
ScanSettings scan_settings_from_config(const Config& cfg);

// [sweep]: n_th_values list (defaults to {0, 1e3, 1e6}).
std::vector<double> sweep_values_from_config(const Config& cfg);

}  // namespace oment
