#pragma once

#include <string>
#include <vector>

#include "nibplan/geometry.hpp"
#include "nibplan/scenario.hpp"

namespace nibplan {

struct Circle {
  Vec2 center{0.0, 0.0};
  double radius = 0.0;
};

// Smallest circle containing all points. Exact combinatorial solve (expected
// linear time after a deterministic shuffle).
Circle min_enclosing_circle(const std::vector<Vec2>& points);

// Same problem through the simplex-constrained quadratic program and its dual
// recovery (w = U^T kappa, r = sqrt(kappa^T Xi kappa - iota)). Slower; kept as
// the second algebraic route and validated against the combinatorial solver.
Circle min_enclosing_circle_qp(const std::vector<Vec2>& points, int max_iters = 200000);

struct ElevationResult {
  double phi_deg = 45.0;
  bool interior = true;  // false when clamped to a boundary (A >= 0 etc.)
};

// Elevation angle minimizing the cell-edge path loss; bisection on the
// analytic derivative. Independent of r_j (the radius only shifts the loss).
ElevationResult optimal_elevation(double r_m, const Environment& env, double f_c_hz);

struct BeamGeometry {
  Vec2 center{0.0, 0.0};
  double radius_m = 0.0;
  double elevation_deg = 45.0;
  double altitude_m = 0.0;   // r * tan(phi)
  double hpbw_deg = 45.0;    // 90 deg - phi
  bool clamped = false;      // any bound became binding
};

struct GeometryResult {
  bool feasible = true;
  BeamGeometry geometry;
  std::string reason;  // set when infeasible
};

// Applies the altitude/HPBW/beam-radius bounds to the optimal circle and
// elevation. The radius may only inflate (coverage is preserved); when a bound
// binds, phi is recomputed so H = r tan(phi) and theta = 90 - phi stay
// consistent.
GeometryResult finalize_geometry(const Circle& mec, double phi_star_deg,
                                 const NibConfig& nib, double lambda_m);

}  // namespace nibplan
