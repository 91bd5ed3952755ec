#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nibplan/geometry.hpp"
#include "nibplan/rng.hpp"

namespace nibplan {

// One radio access technology offered by every NIB.
struct RatProfile {
  std::string id;
  double carrier_freq_hz = 0.0;
  double bandwidth_hz = 0.0;
  double demand_prob = 0.0;   // Pr of a user demanding this RAT
  double min_rate_bps = 1e6;  // per-user QoS floor
};

// Air-to-ground environment constants for the sigmoid LOS-probability model.
struct Environment {
  std::string label = "sub-urban";
  double eta_los_db = 0.1;
  double eta_nlos_db = 21.0;
  double a = 11.95;
  double b = 0.136;
};

struct HapsConfig {
  double altitude_m = 20000.0;
  double coverage_radius_m = 60000.0;
  double tx_power_w = 100.0;
  double bandwidth_hz = 100e6;
  double carrier_freq_hz = 6.4e9;
  double aperture_efficiency = 0.7;
  double hpbw_deg = 70.0;
  Vec2 center{0.0, 0.0};
  double altitude_band_min_m = 18000.0;  // stratospheric station-keeping band
  double altitude_band_max_m = 24000.0;
  // Optional hour-keyed transmit power table; overrides tx_power_w when the
  // scenario selects an hour. Stands in for the external solar power estimate.
  std::map<int, double> tx_power_schedule_w;
};

struct NibConfig {
  std::map<std::string, double> tx_power_per_rat_w;
  int n_antennas = 2;
  double g_max_dbi = 23.0;
  double altitude_min_m = 500.0;
  double altitude_max_m = 4000.0;
  double hpbw_min_deg = 5.0;
  double hpbw_max_deg = 80.0;
  double aperture_diameter_m = 0.5;
  double circuit_power_access_w = 5.0;
  double circuit_power_backhaul_w = 20.0;
  double noise_figure_db = 7.0;
  double backhaul_target_rate_bps = 3e7;  // per-NIB decode target on the backhaul
};

struct GroundUser {
  int id = 0;
  Vec2 position{0.0, 0.0};
  int rat = 0;  // index into ScenarioConfig::rats
  double noise_figure_db = 7.0;
  bool backhaul_dependent = true;  // traffic traverses the HAPS backhaul
  std::optional<int> assoc_nib;
  double power_coeff = 0.0;
};

struct SweepSettings {
  double r_min_m = 1000.0;
  double r_max_m = 0.0;  // 0 means "use the HAPS coverage radius"
  double delta_r_m = 500.0;
  double tolerance_bps = 1e6;  // Algorithm stop tolerance on the sum-rate gain
};

struct ScenarioConfig {
  HapsConfig haps;
  NibConfig nib;
  Environment environment;
  std::vector<RatProfile> rats;
  double user_density_per_km2 = 50.0;
  uint64_t seed = 1;
  SweepSettings sweep;
  double backhaul_fraction = 1.0;  // probability a user belongs to K_1
  double rayleigh_scale = 0.70710678118654752440;  // unit mean-power access fading
  double rician_k_factor = 10.0;
  double user_noise_figure_db = 7.0;
  int trials = 1;
  int hour = -1;  // selects from the HAPS power schedule when >= 0
  double rzf_regularization = -1.0;  // <0 means MMSE-style default per cell
  bool backhaul_cap_per_nib = false;  // apply the backhaul coupling per NIB

  double r_upper_m() const {
    return sweep.r_max_m > 0.0 ? sweep.r_max_m : haps.coverage_radius_m;
  }
  double haps_tx_power_w() const;
};

struct Violation {
  std::string field;
  std::string message;
};

struct UserSet {
  std::vector<GroundUser> users;
  bool degenerate = false;  // zero users drawn
};

// Poisson-disk user drop: count ~ Poisson(density * area), positions uniform
// on the coverage disk, RAT demand sampled from the configured pmf.
UserSet generate_users(const ScenarioConfig& config);

ScenarioConfig load_config(const std::string& path);
ScenarioConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const ScenarioConfig& config);

std::vector<Violation> validate(const ScenarioConfig& config);

// FNV-1a hash of the canonical JSON form; identifies a run in the manifest.
std::string config_hash(const ScenarioConfig& config);

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nibplan
