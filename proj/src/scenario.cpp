#include "nibplan/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "nibplan/units.hpp"

namespace nibplan {

using nlohmann::json;

double ScenarioConfig::haps_tx_power_w() const {
  if (hour >= 0 && !haps.tx_power_schedule_w.empty()) {
    auto it = haps.tx_power_schedule_w.find(hour);
    if (it != haps.tx_power_schedule_w.end()) return it->second;
  }
  return haps.tx_power_w;
}

UserSet generate_users(const ScenarioConfig& config) {
  UserSet out;
  const double radius_m = config.haps.coverage_radius_m;
  const double area_km2 = kPi * (radius_m / 1000.0) * (radius_m / 1000.0);
  const double mean = config.user_density_per_km2 * area_km2;

  RngStream rng = RngStream::substream(config.seed, "users");
  const uint64_t count = rng.poisson(mean);
  if (count == 0) {
    out.degenerate = true;
    return out;
  }

  std::vector<double> pmf(config.rats.size());
  for (size_t i = 0; i < config.rats.size(); ++i) pmf[i] = config.rats[i].demand_prob;

  out.users.reserve(count);
  for (uint64_t k = 0; k < count; ++k) {
    GroundUser u;
    u.id = static_cast<int>(k);
    const double rr = radius_m * std::sqrt(rng.uniform01());
    const double ang = 2.0 * kPi * rng.uniform01();
    u.position = {config.haps.center.x + rr * std::cos(ang),
                  config.haps.center.y + rr * std::sin(ang)};
    u.rat = rng.categorical(pmf);
    u.noise_figure_db = config.user_noise_figure_db;
    u.backhaul_dependent = rng.uniform01() < config.backhaul_fraction;
    out.users.push_back(u);
  }
  return out;
}

namespace {

json vec2_to_json(const Vec2& v) { return json::array({v.x, v.y}); }

Vec2 vec2_from_json(const json& j) {
  return Vec2{j.at(0).get<double>(), j.at(1).get<double>()};
}

template <typename T>
void get_if_present(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

ScenarioConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse failure: ") + e.what());
  }

  ScenarioConfig c;
  try {
    get_if_present(j, "seed", c.seed);
    get_if_present(j, "user_density_per_km2", c.user_density_per_km2);
    get_if_present(j, "backhaul_fraction", c.backhaul_fraction);
    get_if_present(j, "rayleigh_scale", c.rayleigh_scale);
    get_if_present(j, "rician_k_factor", c.rician_k_factor);
    get_if_present(j, "user_noise_figure_db", c.user_noise_figure_db);
    get_if_present(j, "trials", c.trials);
    get_if_present(j, "hour", c.hour);
    get_if_present(j, "rzf_regularization", c.rzf_regularization);
    get_if_present(j, "backhaul_cap_per_nib", c.backhaul_cap_per_nib);

    if (j.contains("haps")) {
      const json& h = j.at("haps");
      get_if_present(h, "altitude_m", c.haps.altitude_m);
      get_if_present(h, "coverage_radius_m", c.haps.coverage_radius_m);
      get_if_present(h, "tx_power_w", c.haps.tx_power_w);
      get_if_present(h, "bandwidth_hz", c.haps.bandwidth_hz);
      get_if_present(h, "carrier_freq_hz", c.haps.carrier_freq_hz);
      get_if_present(h, "aperture_efficiency", c.haps.aperture_efficiency);
      get_if_present(h, "hpbw_deg", c.haps.hpbw_deg);
      get_if_present(h, "altitude_band_min_m", c.haps.altitude_band_min_m);
      get_if_present(h, "altitude_band_max_m", c.haps.altitude_band_max_m);
      if (h.contains("center")) c.haps.center = vec2_from_json(h.at("center"));
      if (h.contains("tx_power_schedule_w")) {
        for (const auto& [key, val] : h.at("tx_power_schedule_w").items()) {
          c.haps.tx_power_schedule_w[std::stoi(key)] = val.get<double>();
        }
      }
    }
    if (j.contains("nib")) {
      const json& n = j.at("nib");
      if (n.contains("tx_power_per_rat_w")) {
        for (const auto& [key, val] : n.at("tx_power_per_rat_w").items()) {
          c.nib.tx_power_per_rat_w[key] = val.get<double>();
        }
      }
      get_if_present(n, "n_antennas", c.nib.n_antennas);
      get_if_present(n, "g_max_dbi", c.nib.g_max_dbi);
      get_if_present(n, "altitude_min_m", c.nib.altitude_min_m);
      get_if_present(n, "altitude_max_m", c.nib.altitude_max_m);
      get_if_present(n, "hpbw_min_deg", c.nib.hpbw_min_deg);
      get_if_present(n, "hpbw_max_deg", c.nib.hpbw_max_deg);
      get_if_present(n, "aperture_diameter_m", c.nib.aperture_diameter_m);
      get_if_present(n, "circuit_power_access_w", c.nib.circuit_power_access_w);
      get_if_present(n, "circuit_power_backhaul_w", c.nib.circuit_power_backhaul_w);
      get_if_present(n, "noise_figure_db", c.nib.noise_figure_db);
      get_if_present(n, "backhaul_target_rate_bps", c.nib.backhaul_target_rate_bps);
    }
    if (j.contains("environment")) {
      const json& e = j.at("environment");
      get_if_present(e, "label", c.environment.label);
      get_if_present(e, "eta_los_db", c.environment.eta_los_db);
      get_if_present(e, "eta_nlos_db", c.environment.eta_nlos_db);
      get_if_present(e, "a", c.environment.a);
      get_if_present(e, "b", c.environment.b);
    }
    if (j.contains("rats")) {
      c.rats.clear();
      for (const json& r : j.at("rats")) {
        RatProfile p;
        get_if_present(r, "id", p.id);
        get_if_present(r, "carrier_freq_hz", p.carrier_freq_hz);
        get_if_present(r, "bandwidth_hz", p.bandwidth_hz);
        get_if_present(r, "demand_prob", p.demand_prob);
        get_if_present(r, "min_rate_bps", p.min_rate_bps);
        c.rats.push_back(p);
      }
    }
    if (j.contains("sweep")) {
      const json& s = j.at("sweep");
      get_if_present(s, "r_min_m", c.sweep.r_min_m);
      get_if_present(s, "r_max_m", c.sweep.r_max_m);
      get_if_present(s, "delta_r_m", c.sweep.delta_r_m);
      get_if_present(s, "tolerance_bps", c.sweep.tolerance_bps);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

std::string config_to_json_text(const ScenarioConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["user_density_per_km2"] = c.user_density_per_km2;
  j["backhaul_fraction"] = c.backhaul_fraction;
  j["rayleigh_scale"] = c.rayleigh_scale;
  j["rician_k_factor"] = c.rician_k_factor;
  j["user_noise_figure_db"] = c.user_noise_figure_db;
  j["trials"] = c.trials;
  j["hour"] = c.hour;
  j["rzf_regularization"] = c.rzf_regularization;
  j["backhaul_cap_per_nib"] = c.backhaul_cap_per_nib;

  json h;
  h["altitude_m"] = c.haps.altitude_m;
  h["coverage_radius_m"] = c.haps.coverage_radius_m;
  h["tx_power_w"] = c.haps.tx_power_w;
  h["bandwidth_hz"] = c.haps.bandwidth_hz;
  h["carrier_freq_hz"] = c.haps.carrier_freq_hz;
  h["aperture_efficiency"] = c.haps.aperture_efficiency;
  h["hpbw_deg"] = c.haps.hpbw_deg;
  h["altitude_band_min_m"] = c.haps.altitude_band_min_m;
  h["altitude_band_max_m"] = c.haps.altitude_band_max_m;
  h["center"] = vec2_to_json(c.haps.center);
  if (!c.haps.tx_power_schedule_w.empty()) {
    json sched = json::object();
    for (const auto& [hour, w] : c.haps.tx_power_schedule_w) {
      sched[std::to_string(hour)] = w;
    }
    h["tx_power_schedule_w"] = sched;
  }
  j["haps"] = h;

  json n;
  json pw = json::object();
  for (const auto& [rat, w] : c.nib.tx_power_per_rat_w) pw[rat] = w;
  n["tx_power_per_rat_w"] = pw;
  n["n_antennas"] = c.nib.n_antennas;
  n["g_max_dbi"] = c.nib.g_max_dbi;
  n["altitude_min_m"] = c.nib.altitude_min_m;
  n["altitude_max_m"] = c.nib.altitude_max_m;
  n["hpbw_min_deg"] = c.nib.hpbw_min_deg;
  n["hpbw_max_deg"] = c.nib.hpbw_max_deg;
  n["aperture_diameter_m"] = c.nib.aperture_diameter_m;
  n["circuit_power_access_w"] = c.nib.circuit_power_access_w;
  n["circuit_power_backhaul_w"] = c.nib.circuit_power_backhaul_w;
  n["noise_figure_db"] = c.nib.noise_figure_db;
  n["backhaul_target_rate_bps"] = c.nib.backhaul_target_rate_bps;
  j["nib"] = n;

  json e;
  e["label"] = c.environment.label;
  e["eta_los_db"] = c.environment.eta_los_db;
  e["eta_nlos_db"] = c.environment.eta_nlos_db;
  e["a"] = c.environment.a;
  e["b"] = c.environment.b;
  j["environment"] = e;

  json rats = json::array();
  for (const RatProfile& p : c.rats) {
    json r;
    r["id"] = p.id;
    r["carrier_freq_hz"] = p.carrier_freq_hz;
    r["bandwidth_hz"] = p.bandwidth_hz;
    r["demand_prob"] = p.demand_prob;
    r["min_rate_bps"] = p.min_rate_bps;
    rats.push_back(r);
  }
  j["rats"] = rats;

  json s;
  s["r_min_m"] = c.sweep.r_min_m;
  s["r_max_m"] = c.sweep.r_max_m;
  s["delta_r_m"] = c.sweep.delta_r_m;
  s["tolerance_bps"] = c.sweep.tolerance_bps;
  j["sweep"] = s;

  return j.dump(2);
}

std::vector<Violation> validate(const ScenarioConfig& c) {
  std::vector<Violation> v;
  auto bad = [&v](const std::string& field, const std::string& msg) {
    v.push_back({field, msg});
  };

  if (c.rats.empty()) bad("rats", "at least one RAT profile is required");
  double prob_sum = 0.0;
  for (size_t i = 0; i < c.rats.size(); ++i) {
    const RatProfile& r = c.rats[i];
    const std::string base = "rats[" + std::to_string(i) + "].";
    if (r.bandwidth_hz <= 0.0) bad(base + "bandwidth_hz", "must be > 0");
    if (r.carrier_freq_hz <= 0.0) bad(base + "carrier_freq_hz", "must be > 0");
    if (r.demand_prob < 0.0 || r.demand_prob > 1.0)
      bad(base + "demand_prob", "must lie in [0, 1]");
    prob_sum += r.demand_prob;
  }
  if (!c.rats.empty() && std::abs(prob_sum - 1.0) > 1e-9)
    bad("rats[*].demand_prob", "probabilities must sum to 1 (got " +
                                   std::to_string(prob_sum) + ")");

  if (c.environment.eta_nlos_db < c.environment.eta_los_db)
    bad("environment.eta_nlos_db", "must be >= eta_los_db");
  if (c.environment.a <= 0.0) bad("environment.a", "must be > 0");
  if (c.environment.b <= 0.0) bad("environment.b", "must be > 0");

  if (c.haps.altitude_m < c.haps.altitude_band_min_m ||
      c.haps.altitude_m > c.haps.altitude_band_max_m)
    bad("haps.altitude_m", "outside the stratospheric station-keeping band");
  if (c.haps.tx_power_w <= 0.0) bad("haps.tx_power_w", "must be > 0");
  if (c.haps.bandwidth_hz <= 0.0) bad("haps.bandwidth_hz", "must be > 0");
  if (c.haps.carrier_freq_hz <= 0.0) bad("haps.carrier_freq_hz", "must be > 0");
  if (c.haps.coverage_radius_m <= 0.0) bad("haps.coverage_radius_m", "must be > 0");
  if (c.haps.aperture_efficiency <= 0.0 || c.haps.aperture_efficiency > 1.0)
    bad("haps.aperture_efficiency", "must lie in (0, 1]");
  if (c.haps.hpbw_deg <= 0.0) bad("haps.hpbw_deg", "must be > 0");

  if (c.nib.altitude_min_m > c.nib.altitude_max_m)
    bad("nib.altitude_min_m", "must be <= altitude_max_m");
  if (c.nib.hpbw_min_deg > c.nib.hpbw_max_deg)
    bad("nib.hpbw_min_deg", "must be <= hpbw_max_deg");
  if (c.nib.n_antennas < 1) bad("nib.n_antennas", "must be >= 1");
  if (c.nib.aperture_diameter_m <= 0.0) bad("nib.aperture_diameter_m", "must be > 0");
  for (const auto& [rat, w] : c.nib.tx_power_per_rat_w) {
    if (w <= 0.0) bad("nib.tx_power_per_rat_w." + rat, "must be > 0");
  }
  if (c.nib.backhaul_target_rate_bps < 0.0)
    bad("nib.backhaul_target_rate_bps", "must be >= 0");

  if (c.user_density_per_km2 < 0.0) bad("user_density_per_km2", "must be >= 0");
  if (c.backhaul_fraction < 0.0 || c.backhaul_fraction > 1.0)
    bad("backhaul_fraction", "must lie in [0, 1]");
  if (c.rayleigh_scale <= 0.0) bad("rayleigh_scale", "must be > 0");
  if (c.rician_k_factor < 0.0) bad("rician_k_factor", "must be >= 0");
  if (c.trials < 1) bad("trials", "must be >= 1");

  if (c.sweep.r_min_m <= 0.0) bad("sweep.r_min_m", "must be > 0");
  if (c.sweep.delta_r_m <= 0.0) bad("sweep.delta_r_m", "must be > 0");
  if (c.r_upper_m() < c.sweep.r_min_m) bad("sweep.r_max_m", "must be >= r_min_m");

  // Diffraction floor on the starting beam radius, checked for every RAT.
  for (size_t i = 0; i < c.rats.size(); ++i) {
    if (c.rats[i].carrier_freq_hz <= 0.0) continue;
    const double lambda = wavelength_m(c.rats[i].carrier_freq_hz);
    const double floor = 0.443 * lambda * c.nib.altitude_min_m / c.nib.aperture_diameter_m;
    if (c.sweep.r_min_m < floor)
      bad("sweep.r_min_m", "below the beam-radius floor 0.443*lambda*H_min/D for " +
                               c.rats[i].id);
  }
  return v;
}

std::string config_hash(const ScenarioConfig& config) {
  const std::string text = config_to_json_text(config);
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char ch : text) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace nibplan
