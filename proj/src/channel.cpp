#include "nibplan/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "nibplan/units.hpp"

namespace nibplan {

FadingSample sample_rayleigh(double scale, RngStream& rng) {
  if (scale <= 0.0) throw std::invalid_argument("sample_rayleigh: scale must be > 0");
  return {std::complex<double>(rng.normal(0.0, scale), rng.normal(0.0, scale)),
          FadingKind::Rayleigh};
}

FadingSample sample_rician(double k_factor, double mean_power, RngStream& rng) {
  if (k_factor < 0.0) throw std::invalid_argument("sample_rician: K must be >= 0");
  if (mean_power <= 0.0)
    throw std::invalid_argument("sample_rician: mean_power must be > 0");
  // E|g|^2 = nu^2 + 2 sigma_f^2, K = nu^2 / (2 sigma_f^2).
  const double sigma_f = std::sqrt(mean_power / (2.0 * (1.0 + k_factor)));
  const double nu = std::sqrt(mean_power * k_factor / (1.0 + k_factor));
  return {std::complex<double>(nu + rng.normal(0.0, sigma_f), rng.normal(0.0, sigma_f)),
          FadingKind::Rician};
}

double al_beam_gain(double theta_off_deg, double hpbw_deg, double g_max_linear) {
  if (hpbw_deg <= 0.0) throw std::invalid_argument("al_beam_gain: hpbw must be > 0");
  if (theta_off_deg < 0.0 || theta_off_deg >= 90.0)
    throw std::invalid_argument("al_beam_gain: off-axis angle must lie in [0, 90)");
  const double mu =
      2.07123 * std::sin(deg2rad(theta_off_deg)) / std::sin(deg2rad(hpbw_deg));
  // Removable singularity at boresight: J1(mu)/(2mu) -> 1/4, 36 J3(mu)/mu^3 -> 3/4.
  if (mu < 1e-6) return g_max_linear;
  const double term = std::cyl_bessel_j(1, mu) / (2.0 * mu) +
                      36.0 * std::cyl_bessel_j(3, mu) / (mu * mu * mu);
  return g_max_linear * term * term;
}

double al_path_loss_db(double d_m, double h_m, double f_c_hz, const Environment& env) {
  if (h_m <= 0.0) throw std::invalid_argument("al_path_loss_db: altitude must be > 0");
  if (d_m < h_m)
    throw std::invalid_argument("al_path_loss_db: slant distance cannot be below altitude");
  const double phi_deg = rad2deg(std::asin(h_m / d_m));
  const double a_diff = env.eta_los_db - env.eta_nlos_db;
  const double sigmoid =
      a_diff / (1.0 + env.a * std::exp(-env.b * (phi_deg - env.a)));
  const double fspl_db = 20.0 * std::log10(d_m) +
                         20.0 * std::log10(4.0 * kPi * f_c_hz / kSpeedOfLight);
  return sigmoid + fspl_db + env.eta_nlos_db;
}

double haps_peak_gain(double aperture_efficiency, double hpbw_deg) {
  const double ratio = 70.0 * kPi / hpbw_deg;
  return aperture_efficiency * ratio * ratio;
}

double haps_beam_gain(const Vec2& nib_center, const Vec2& beam_center, double haps_alt_m,
                      double nib_alt_m, double aperture_efficiency, double hpbw_deg) {
  if (haps_alt_m <= nib_alt_m)
    throw std::invalid_argument("haps_beam_gain: HAPS must fly above the NIB");
  const double g0 = haps_peak_gain(aperture_efficiency, hpbw_deg);
  const double theta_deg =
      rad2deg(std::atan(dist(nib_center, beam_center) / (haps_alt_m - nib_alt_m)));
  const double ratio = theta_deg / (70.0 * kPi);
  const double g_db = linear_to_db(g0) - 12.0 * (g0 / aperture_efficiency) * ratio * ratio;
  return db_to_linear(g_db);
}

double haps_fspl(double d_m, double lambda_m) {
  if (d_m <= 0.0 || lambda_m <= 0.0)
    throw std::invalid_argument("haps_fspl: distance and wavelength must be > 0");
  const double x = 4.0 * kPi * d_m / lambda_m;
  return x * x;
}

double noise_power_dbm(double bandwidth_hz, double nf_db) {
  if (bandwidth_hz <= 0.0)
    throw std::invalid_argument("noise_power_dbm: bandwidth must be > 0");
  return -174.0 + 10.0 * std::log10(bandwidth_hz) + nf_db;
}

double noise_power_w(double bandwidth_hz, double nf_db) {
  return dbm_to_watts(noise_power_dbm(bandwidth_hz, nf_db));
}

AccessChannel build_access_channel(const Vec2& user_pos, const BeamPose& beam,
                                   double rat_freq_hz, double g_max_linear,
                                   const Environment& env, int n_antennas,
                                   double rayleigh_scale, RngStream& rng) {
  AccessChannel ch;
  const double horiz = dist(user_pos, beam.center);
  ch.distance_m = std::sqrt(horiz * horiz + beam.altitude_m * beam.altitude_m);
  ch.elevation_deg = rad2deg(std::asin(beam.altitude_m / ch.distance_m));
  // Off-axis angle from the boresight (pointing straight down at the cell center).
  const double theta_off_deg = rad2deg(std::atan(horiz / beam.altitude_m));
  ch.beam_gain = al_beam_gain(theta_off_deg, beam.hpbw_deg, g_max_linear);
  ch.path_loss_linear =
      db_to_linear(al_path_loss_db(ch.distance_m, beam.altitude_m, rat_freq_hz, env));

  const double amp = std::sqrt(ch.mean_gain());
  ch.h.resize(n_antennas);
  for (int m = 0; m < n_antennas; ++m) {
    ch.h[m] = amp * sample_rayleigh(rayleigh_scale, rng).coeff;
  }
  return ch;
}

BackhaulChannel build_backhaul_channel(const Vec2& nib_center, double nib_alt_m,
                                       const HapsConfig& haps, double noise_w,
                                       double p_h_w, double rician_k_factor,
                                       RngStream& rng) {
  BackhaulChannel ch;
  const double horiz = dist(nib_center, haps.center);
  const double dz = haps.altitude_m - nib_alt_m;
  ch.slant_m = std::sqrt(horiz * horiz + dz * dz);
  ch.haps_gain = haps_beam_gain(nib_center, haps.center, haps.altitude_m, nib_alt_m,
                                haps.aperture_efficiency, haps.hpbw_deg);
  ch.fspl = haps_fspl(ch.slant_m, wavelength_m(haps.carrier_freq_hz));
  ch.fading = sample_rician(rician_k_factor, 1.0, rng).coeff;
  ch.aleph = ch.aleph_at(noise_w, p_h_w);
  return ch;
}

}  // namespace nibplan
