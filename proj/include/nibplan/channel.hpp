#pragma once

#include <complex>
#include <vector>

#include "nibplan/geometry.hpp"
#include "nibplan/rng.hpp"
#include "nibplan/scenario.hpp"

namespace nibplan {

enum class FadingKind { Rayleigh, Rician };

struct FadingSample {
  std::complex<double> coeff;
  FadingKind kind = FadingKind::Rayleigh;
};

// Rayleigh magnitude: real and imaginary parts i.i.d. N(0, scale^2), so the
// mean power E|h|^2 is 2*scale^2.
FadingSample sample_rayleigh(double scale, RngStream& rng);

// Rician with shape K = nu^2 / (2 sigma_f^2) and E|g|^2 = mean_power.
FadingSample sample_rician(double k_factor, double mean_power, RngStream& rng);

// Aperture beam gain vs off-axis angle, Bessel main-lobe model. hpbw_deg is
// the one-sided half-power angle; returns g_max exactly at boresight.
double al_beam_gain(double theta_off_deg, double hpbw_deg, double g_max_linear);

// Air-to-ground path loss in dB: sigmoid LOS correction (elevation angle in
// degrees) plus free-space terms plus the NLOS excess.
double al_path_loss_db(double d_m, double h_m, double f_c_hz, const Environment& env);

// HAPS aperture gain toward a NIB offset from the beam center; quadratic
// dB rolloff in the departure angle.
double haps_beam_gain(const Vec2& nib_center, const Vec2& beam_center, double haps_alt_m,
                      double nib_alt_m, double aperture_efficiency, double hpbw_deg);

double haps_peak_gain(double aperture_efficiency, double hpbw_deg);

// Free-space loss 16 pi^2 d^2 / lambda^2 (linear).
double haps_fspl(double d_m, double lambda_m);

double noise_power_dbm(double bandwidth_hz, double nf_db);
double noise_power_w(double bandwidth_hz, double nf_db);

struct AccessChannel {
  std::vector<std::complex<double>> h;  // per-antenna gains, includes sqrt(G/L)
  double beam_gain = 1.0;               // linear
  double path_loss_linear = 1.0;
  double elevation_deg = 90.0;
  double distance_m = 0.0;

  // Mean effective channel gain |h~|^2 G / L for a unit-power fading draw.
  double mean_gain() const { return beam_gain / path_loss_linear; }
};

struct BackhaulChannel {
  std::complex<double> fading;  // g~
  double haps_gain = 1.0;       // linear
  double fspl = 1.0;            // linear
  double slant_m = 0.0;
  double aleph = 0.0;  // sigma^2 L / (P_H |g~|^2 G)

  double aleph_at(double noise_w, double p_h_w) const {
    return noise_w * fspl / (p_h_w * std::norm(fading) * haps_gain);
  }
};

// Geometry of one serving beam, as needed by the link budget.
struct BeamPose {
  Vec2 center{0.0, 0.0};
  double altitude_m = 1000.0;
  double hpbw_deg = 45.0;
};

AccessChannel build_access_channel(const Vec2& user_pos, const BeamPose& beam,
                                   double rat_freq_hz, double g_max_linear,
                                   const Environment& env, int n_antennas,
                                   double rayleigh_scale, RngStream& rng);

BackhaulChannel build_backhaul_channel(const Vec2& nib_center, double nib_alt_m,
                                       const HapsConfig& haps, double noise_w,
                                       double p_h_w, double rician_k_factor,
                                       RngStream& rng);

}  // namespace nibplan
