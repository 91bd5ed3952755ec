#include "nibplan/beamopt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "nibplan/rng.hpp"
#include "nibplan/units.hpp"

namespace nibplan {

namespace {

constexpr double kContainSlack = 1e-10;

bool circle_contains(const Circle& c, const Vec2& p) {
  return dist(p, c.center) <= c.radius * (1.0 + kContainSlack) + 1e-12;
}

Circle circle_from_two(const Vec2& a, const Vec2& b) {
  const Vec2 mid = (a + b) * 0.5;
  return {mid, dist(a, b) * 0.5};
}

Circle circle_from_three(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double bx = b.x - a.x, by = b.y - a.y;
  const double cx = c.x - a.x, cy = c.y - a.y;
  const double d = 2.0 * (bx * cy - by * cx);
  const double scale = std::max({std::abs(bx), std::abs(by), std::abs(cx), std::abs(cy), 1e-300});
  if (std::abs(d) < 1e-12 * scale * scale) {
    // Near-collinear: the widest diameter pair encloses the third point.
    Circle best = circle_from_two(a, b);
    const Circle ac = circle_from_two(a, c);
    const Circle bc = circle_from_two(b, c);
    if (ac.radius > best.radius) best = ac;
    if (bc.radius > best.radius) best = bc;
    return best;
  }
  const double ux = (cy * (bx * bx + by * by) - by * (cx * cx + cy * cy)) / d;
  const double uy = (bx * (cx * cx + cy * cy) - cx * (bx * bx + by * by)) / d;
  const Vec2 center{a.x + ux, a.y + uy};
  return {center, dist(center, a)};
}

}  // namespace

Circle min_enclosing_circle(const std::vector<Vec2>& points) {
  if (points.empty())
    throw std::invalid_argument("min_enclosing_circle: empty point set");
  std::vector<Vec2> p = points;
  // Fixed-seed shuffle keeps the expected-linear behavior and the output
  // deterministic across runs.
  RngStream rng(0x9d2c5680u);
  for (size_t i = p.size() - 1; i > 0; --i) {
    std::swap(p[i], p[rng.uniform_index(i + 1)]);
  }

  Circle c{p[0], 0.0};
  for (size_t i = 1; i < p.size(); ++i) {
    if (circle_contains(c, p[i])) continue;
    c = {p[i], 0.0};
    for (size_t j = 0; j < i; ++j) {
      if (circle_contains(c, p[j])) continue;
      c = circle_from_two(p[i], p[j]);
      for (size_t k = 0; k < j; ++k) {
        if (circle_contains(c, p[k])) continue;
        c = circle_from_three(p[i], p[j], p[k]);
      }
    }
  }
  return c;
}

Circle min_enclosing_circle_qp(const std::vector<Vec2>& points, int max_iters) {
  const size_t n = points.size();
  if (n == 0) throw std::invalid_argument("min_enclosing_circle_qp: empty point set");
  if (n == 1) return {points[0], 0.0};

  // minimize kappa' Xi kappa - d' kappa on the simplex, Xi = U U', d = diag(Xi).
  std::vector<double> kappa(n, 1.0 / static_cast<double>(n));
  std::vector<double> diag(n), grad(n), work(n);
  for (size_t i = 0; i < n; ++i) diag[i] = points[i].norm2();

  // Lipschitz constant of the gradient: 2 lambda_max(U'U).
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const Vec2& p : points) {
    sxx += p.x * p.x;
    sxy += p.x * p.y;
    syy += p.y * p.y;
  }
  const double tr = sxx + syy;
  const double det = sxx * syy - sxy * sxy;
  const double lmax = 0.5 * (tr + std::sqrt(std::max(0.0, tr * tr - 4.0 * det)));
  const double step = 1.0 / std::max(2.0 * lmax, 1e-12);

  auto project_simplex = [&](std::vector<double>& v) {
    work = v;
    std::sort(work.begin(), work.end(), std::greater<double>());
    double acc = 0.0, theta = 0.0;
    int rho = 0;
    for (size_t i = 0; i < n; ++i) {
      acc += work[i];
      const double t = (acc - 1.0) / static_cast<double>(i + 1);
      if (work[i] - t > 0.0) {
        rho = static_cast<int>(i + 1);
        theta = t;
      }
    }
    (void)rho;
    for (double& x : v) x = std::max(0.0, x - theta);
  };

  for (int it = 0; it < max_iters; ++it) {
    // grad = 2 U (U' kappa) - d, using the rank-2 structure.
    double wx = 0.0, wy = 0.0;
    for (size_t i = 0; i < n; ++i) {
      wx += kappa[i] * points[i].x;
      wy += kappa[i] * points[i].y;
    }
    double max_change = 0.0;
    for (size_t i = 0; i < n; ++i) {
      grad[i] = 2.0 * (points[i].x * wx + points[i].y * wy) - diag[i];
    }
    std::vector<double> next = kappa;
    for (size_t i = 0; i < n; ++i) next[i] -= step * grad[i];
    project_simplex(next);
    for (size_t i = 0; i < n; ++i)
      max_change = std::max(max_change, std::abs(next[i] - kappa[i]));
    kappa.swap(next);
    if (max_change < 1e-15) break;
  }

  Vec2 center{0.0, 0.0};
  for (size_t i = 0; i < n; ++i) {
    center.x += kappa[i] * points[i].x;
    center.y += kappa[i] * points[i].y;
  }
  // iota from complementary slackness; r = sqrt(kappa' Xi kappa - iota).
  double quad = center.norm2();
  double iota = 0.0;
  for (size_t i = 0; i < n; ++i) {
    iota += kappa[i] * (2.0 * (points[i].x * center.x + points[i].y * center.y) - diag[i]);
  }
  const double r2 = quad - iota;
  return {center, std::sqrt(std::max(0.0, r2))};
}

namespace {

// d/dphi of the cell-edge path loss, phi in degrees.
double path_loss_slope(double phi_deg, double a_diff, double a_bar, double b) {
  const double e = std::exp(-b * phi_deg);
  const double denom = 1.0 + a_bar * e;
  const double sigmoid_term = a_diff * a_bar * b * e / (denom * denom);
  const double tan_term =
      (20.0 / std::log(10.0)) * (kPi / 180.0) * std::tan(deg2rad(phi_deg));
  return sigmoid_term + tan_term;
}

}  // namespace

ElevationResult optimal_elevation(double r_m, const Environment& env, double f_c_hz) {
  (void)r_m;
  (void)f_c_hz;  // both shift the loss level, not the minimizer
  const double a_diff = env.eta_los_db - env.eta_nlos_db;
  if (a_diff >= 0.0) {
    // No LOS advantage: the loss is increasing in phi, boundary minimum.
    return {1e-3, false};
  }
  const double a_bar = env.a * std::exp(env.a * env.b);

  double lo = 1e-6, hi = 90.0 - 1e-6;
  double f_lo = path_loss_slope(lo, a_diff, a_bar, env.b);
  double f_hi = path_loss_slope(hi, a_diff, a_bar, env.b);
  if (f_lo >= 0.0) return {lo, false};
  if (f_hi <= 0.0) return {hi, false};

  double mid = 45.0;
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double fm = path_loss_slope(mid, a_diff, a_bar, env.b);
    if (std::abs(fm) < 1e-9 || (hi - lo) < 1e-12) break;
    if (fm < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {mid, true};
}

GeometryResult finalize_geometry(const Circle& mec, double phi_star_deg,
                                 const NibConfig& nib, double lambda_m) {
  GeometryResult out;
  const double theta_min = nib.hpbw_min_deg;
  const double theta_max = nib.hpbw_max_deg;
  // r >= 0.443 lambda H / D, i.e. tan(phi) = H/r <= 1/diffraction.
  const double diffraction = 0.443 * lambda_m / nib.aperture_diameter_m;

  if (std::tan(deg2rad(theta_max)) < diffraction) {
    out.feasible = false;
    out.reason = "hpbw_max too narrow for the aperture beam-radius floor";
    return out;
  }

  // The radius may only inflate; these floors make the phi interval nonempty.
  double r = std::max(mec.radius,
                      std::max(nib.altitude_min_m * std::tan(deg2rad(theta_min)),
                               nib.altitude_min_m * diffraction));
  const double r_cap = nib.altitude_max_m * std::tan(deg2rad(theta_max));
  if (r > r_cap * (1.0 + 1e-12)) {
    out.feasible = false;
    out.reason = "cell radius " + std::to_string(r) +
                 " m exceeds the reach of the altitude/hpbw bounds (" +
                 std::to_string(r_cap) + " m)";
    return out;
  }

  const double phi_lo =
      std::max(rad2deg(std::atan(nib.altitude_min_m / r)), 90.0 - theta_max);
  const double phi_hi = std::min({rad2deg(std::atan(nib.altitude_max_m / r)),
                                  90.0 - theta_min,
                                  rad2deg(std::atan(1.0 / diffraction))});

  BeamGeometry g;
  g.center = mec.center;
  g.radius_m = r;
  g.elevation_deg = std::clamp(phi_star_deg, phi_lo, phi_hi);
  g.clamped = g.elevation_deg != phi_star_deg || r != mec.radius;
  g.altitude_m = r * std::tan(deg2rad(g.elevation_deg));
  g.altitude_m = std::clamp(g.altitude_m, nib.altitude_min_m, nib.altitude_max_m);
  g.hpbw_deg = 90.0 - g.elevation_deg;
  out.geometry = g;
  return out;
}

}  // namespace nibplan
