#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nibplan/geometry.hpp"

namespace nibplan {

// Boolean pairwise coverage matrix: d_kl = 1 iff ||u_k - u_l|| <= r.
struct CoverageMatrix {
  int k = 0;
  std::vector<uint8_t> d;  // row-major k*k

  bool at(int row, int col) const { return d[static_cast<size_t>(row) * k + col] != 0; }
};

CoverageMatrix coverage_matrix(const std::vector<Vec2>& points, double r);

enum class DeployMethod { GdcGreedy, GdcExact, Hex };

struct DeploymentPlan {
  std::vector<Vec2> centers;
  std::vector<int> center_user_ids;  // indices into the point set; empty for hex
  double radius_m = 0.0;
  DeployMethod method = DeployMethod::GdcGreedy;

  int count() const { return static_cast<int>(centers.size()); }
};

// Greedy max-coverage over the candidate columns of D. Ties break to the
// lowest user index. Returns selected candidate indices in selection order.
std::vector<int> gdc_greedy_indices(const CoverageMatrix& d);

// Same selection rule evaluated geometrically; scales to ~1e6 users where the
// K x K matrix is not materializable. Produces the identical index sequence.
DeploymentPlan gdc_greedy(const std::vector<Vec2>& points, double r);

// Provably minimal cover via branch-and-bound; refuses above max_k.
std::vector<int> gdc_exact_indices(const CoverageMatrix& d, int max_k = 20);
DeploymentPlan gdc_exact(const std::vector<Vec2>& points, double r, int max_k = 20);

// Conventional cellular baseline: hexagonal lattice with center spacing
// sqrt(3) r, enough full tiers to cover the disk of radius big_r, then cells
// whose hexagon misses the disk are dropped.
DeploymentPlan hex_baseline(double big_r, double r, const Vec2& disk_center = {0.0, 0.0});

// Post-hoc feasibility check against raw coordinates (not the matrix).
bool covers_all(const std::vector<Vec2>& points, const DeploymentPlan& plan,
                double tol = 1e-9);

}  // namespace nibplan
