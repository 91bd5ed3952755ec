#include "nibplan/deployment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace nibplan {

CoverageMatrix coverage_matrix(const std::vector<Vec2>& points, double r) {
  if (r <= 0.0) throw std::invalid_argument("coverage_matrix: radius must be > 0");
  if (points.empty()) throw std::invalid_argument("coverage_matrix: empty point set");
  CoverageMatrix m;
  m.k = static_cast<int>(points.size());
  m.d.assign(static_cast<size_t>(m.k) * m.k, 0);
  const double r2 = r * r;
  for (int i = 0; i < m.k; ++i) {
    m.d[static_cast<size_t>(i) * m.k + i] = 1;
    for (int j = i + 1; j < m.k; ++j) {
      const uint8_t v = dist2(points[i], points[j]) <= r2 ? 1 : 0;
      m.d[static_cast<size_t>(i) * m.k + j] = v;
      m.d[static_cast<size_t>(j) * m.k + i] = v;
    }
  }
  return m;
}

std::vector<int> gdc_greedy_indices(const CoverageMatrix& d) {
  const int k = d.k;
  std::vector<uint8_t> covered(k, 0);
  std::vector<int> selected;
  int remaining = k;
  while (remaining > 0) {
    int best = -1;
    int best_count = -1;
    for (int c = 0; c < k; ++c) {
      int count = 0;
      const uint8_t* row = &d.d[static_cast<size_t>(c) * k];
      for (int u = 0; u < k; ++u) count += row[u] & !covered[u];
      if (count > best_count) {
        best_count = count;
        best = c;
      }
    }
    selected.push_back(best);
    const uint8_t* row = &d.d[static_cast<size_t>(best) * k];
    for (int u = 0; u < k; ++u) {
      if (row[u] && !covered[u]) {
        covered[u] = 1;
        --remaining;
      }
    }
  }
  return selected;
}

namespace {

// Two-level uniform grid over the point set. The fine level carries a summed
// area table of static point counts for the initial coverage counts; the
// coarse level carries mutable uncovered counts for the greedy's recounts.
class DiskCountGrid {
 public:
  DiskCountGrid(const std::vector<Vec2>& pts, double r)
      : pts_(pts), r_(r), r2_(r * r) {
    double min_x = pts[0].x, max_x = pts[0].x, min_y = pts[0].y, max_y = pts[0].y;
    for (const Vec2& p : pts) {
      min_x = std::min(min_x, p.x);
      max_x = std::max(max_x, p.x);
      min_y = std::min(min_y, p.y);
      max_y = std::max(max_y, p.y);
    }
    origin_ = {min_x, min_y};

    fine_g_ = r / 64.0;
    fine_nx_ = static_cast<int>((max_x - min_x) / fine_g_) + 2;
    fine_ny_ = static_cast<int>((max_y - min_y) / fine_g_) + 2;
    coarse_g_ = r / 8.0;
    coarse_nx_ = static_cast<int>((max_x - min_x) / coarse_g_) + 2;
    coarse_ny_ = static_cast<int>((max_y - min_y) / coarse_g_) + 2;

    build_csr();
    build_sat();
  }

  // Exact |{uncovered u : dist(u, center) <= r}| using the coarse grid.
  int count_uncovered(const Vec2& center, const std::vector<uint8_t>& covered) const {
    int total = 0;
    const int jy0 = std::max(0, cell_y_coarse(center.y - r_));
    const int jy1 = std::min(coarse_ny_ - 1, cell_y_coarse(center.y + r_));
    for (int jy = jy0; jy <= jy1; ++jy) {
      const double y_lo = origin_.y + jy * coarse_g_;
      const double y_hi = y_lo + coarse_g_;
      const double dy_near = band_dist(center.y, y_lo, y_hi);
      if (dy_near > r_) continue;
      const double w_near = std::sqrt(std::max(0.0, r2_ - dy_near * dy_near));
      const double dy_far = std::max(std::abs(center.y - y_lo), std::abs(center.y - y_hi));
      const double w_far2 = r2_ - dy_far * dy_far;
      const double w_far = w_far2 > 0.0 ? std::sqrt(w_far2) : -1.0;

      const int jx_lo = std::max(0, cell_x_coarse(center.x - w_near));
      const int jx_hi = std::min(coarse_nx_ - 1, cell_x_coarse(center.x + w_near));
      // Cells whose full x-extent fits inside the chord at the far edge are
      // wholly inside the disk.
      int fx_lo = 1, fx_hi = 0;
      if (w_far >= 0.0) {
        fx_lo = cell_index_ceil_coarse(center.x - w_far);
        fx_hi = cell_index_floor_coarse(center.x + w_far) - 1;
      }
      for (int jx = jx_lo; jx <= jx_hi; ++jx) {
        const size_t c = static_cast<size_t>(jy) * coarse_nx_ + jx;
        if (jx >= fx_lo && jx <= fx_hi) {
          total += coarse_uncovered_[c];
        } else {
          for (int t = coarse_start_[c]; t < coarse_start_[c + 1]; ++t) {
            const int u = coarse_ids_[t];
            if (!covered[u] && dist2(pts_[u], center) <= r2_) ++total;
          }
        }
      }
    }
    return total;
  }

  // Initial count against the full (all-uncovered) set, via the fine SAT.
  int count_initial(const Vec2& center) const {
    long long total = 0;
    const int jy0 = std::max(0, cell_y_fine(center.y - r_));
    const int jy1 = std::min(fine_ny_ - 1, cell_y_fine(center.y + r_));
    for (int jy = jy0; jy <= jy1; ++jy) {
      const double y_lo = origin_.y + jy * fine_g_;
      const double y_hi = y_lo + fine_g_;
      const double dy_near = band_dist(center.y, y_lo, y_hi);
      if (dy_near > r_) continue;
      const double w_near = std::sqrt(std::max(0.0, r2_ - dy_near * dy_near));
      const double dy_far = std::max(std::abs(center.y - y_lo), std::abs(center.y - y_hi));
      const double w_far2 = r2_ - dy_far * dy_far;

      const int jx_lo = std::max(0, cell_x_fine(center.x - w_near));
      const int jx_hi = std::min(fine_nx_ - 1, cell_x_fine(center.x + w_near));
      int fx_lo = 1, fx_hi = 0;
      if (w_far2 > 0.0) {
        const double w_far = std::sqrt(w_far2);
        fx_lo = std::max(jx_lo, cell_index_ceil_fine(center.x - w_far));
        fx_hi = std::min(jx_hi, cell_index_floor_fine(center.x + w_far) - 1);
      }
      if (fx_lo <= fx_hi) {
        total += sat_range(jy, fx_lo, fx_hi);
        for (int jx = jx_lo; jx < fx_lo; ++jx) total += scan_fine_cell(jy, jx, center);
        for (int jx = fx_hi + 1; jx <= jx_hi; ++jx) total += scan_fine_cell(jy, jx, center);
      } else {
        for (int jx = jx_lo; jx <= jx_hi; ++jx) total += scan_fine_cell(jy, jx, center);
      }
    }
    return static_cast<int>(total);
  }

  // Marks everything within r of center covered; returns newly covered ids.
  void cover(const Vec2& center, std::vector<uint8_t>& covered, int* remaining) {
    const int jy0 = std::max(0, cell_y_coarse(center.y - r_));
    const int jy1 = std::min(coarse_ny_ - 1, cell_y_coarse(center.y + r_));
    for (int jy = jy0; jy <= jy1; ++jy) {
      const int jx0 = std::max(0, cell_x_coarse(center.x - r_));
      const int jx1 = std::min(coarse_nx_ - 1, cell_x_coarse(center.x + r_));
      for (int jx = jx0; jx <= jx1; ++jx) {
        const size_t c = static_cast<size_t>(jy) * coarse_nx_ + jx;
        if (coarse_uncovered_[c] == 0) continue;
        for (int t = coarse_start_[c]; t < coarse_start_[c + 1]; ++t) {
          const int u = coarse_ids_[t];
          if (!covered[u] && dist2(pts_[u], center) <= r2_) {
            covered[u] = 1;
            --coarse_uncovered_[c];
            --(*remaining);
          }
        }
      }
    }
  }

 private:
  static double band_dist(double v, double lo, double hi) {
    if (v < lo) return lo - v;
    if (v > hi) return v - hi;
    return 0.0;
  }

  int cell_x_fine(double x) const { return static_cast<int>(std::floor((x - origin_.x) / fine_g_)); }
  int cell_y_fine(double y) const { return static_cast<int>(std::floor((y - origin_.y) / fine_g_)); }
  int cell_x_coarse(double x) const { return static_cast<int>(std::floor((x - origin_.x) / coarse_g_)); }
  int cell_y_coarse(double y) const { return static_cast<int>(std::floor((y - origin_.y) / coarse_g_)); }
  int cell_index_ceil_fine(double x) const { return static_cast<int>(std::ceil((x - origin_.x) / fine_g_)); }
  int cell_index_floor_fine(double x) const { return static_cast<int>(std::floor((x - origin_.x) / fine_g_)); }
  int cell_index_ceil_coarse(double x) const { return static_cast<int>(std::ceil((x - origin_.x) / coarse_g_)); }
  int cell_index_floor_coarse(double x) const { return static_cast<int>(std::floor((x - origin_.x) / coarse_g_)); }

  void build_csr() {
    const int n = static_cast<int>(pts_.size());
    fine_count_.assign(static_cast<size_t>(fine_nx_) * fine_ny_, 0);
    fine_start_.assign(static_cast<size_t>(fine_nx_) * fine_ny_ + 1, 0);
    coarse_uncovered_.assign(static_cast<size_t>(coarse_nx_) * coarse_ny_, 0);
    coarse_start_.assign(static_cast<size_t>(coarse_nx_) * coarse_ny_ + 1, 0);
    fine_ids_.resize(n);
    coarse_ids_.resize(n);

    for (const Vec2& p : pts_) {
      ++fine_count_[static_cast<size_t>(cell_y_fine(p.y)) * fine_nx_ + cell_x_fine(p.x)];
      ++coarse_uncovered_[static_cast<size_t>(cell_y_coarse(p.y)) * coarse_nx_ +
                          cell_x_coarse(p.x)];
    }
    for (size_t c = 0; c < fine_count_.size(); ++c)
      fine_start_[c + 1] = fine_start_[c] + fine_count_[c];
    for (size_t c = 0; c < coarse_uncovered_.size(); ++c)
      coarse_start_[c + 1] = coarse_start_[c] + coarse_uncovered_[c];

    std::vector<int> fcur(fine_start_.begin(), fine_start_.end() - 1);
    std::vector<int> ccur(coarse_start_.begin(), coarse_start_.end() - 1);
    for (int u = 0; u < n; ++u) {
      const Vec2& p = pts_[u];
      fine_ids_[fcur[static_cast<size_t>(cell_y_fine(p.y)) * fine_nx_ + cell_x_fine(p.x)]++] = u;
      coarse_ids_[ccur[static_cast<size_t>(cell_y_coarse(p.y)) * coarse_nx_ +
                       cell_x_coarse(p.x)]++] = u;
    }
  }

  void build_sat() {
    sat_.assign(static_cast<size_t>(fine_nx_ + 1) * (fine_ny_ + 1), 0);
    for (int y = 0; y < fine_ny_; ++y) {
      long long row_acc = 0;
      for (int x = 0; x < fine_nx_; ++x) {
        row_acc += fine_count_[static_cast<size_t>(y) * fine_nx_ + x];
        sat_[static_cast<size_t>(y + 1) * (fine_nx_ + 1) + (x + 1)] =
            sat_[static_cast<size_t>(y) * (fine_nx_ + 1) + (x + 1)] + row_acc;
      }
    }
  }

  long long sat_range(int row, int x0, int x1) const {
    const size_t top = static_cast<size_t>(row) * (fine_nx_ + 1);
    const size_t bot = static_cast<size_t>(row + 1) * (fine_nx_ + 1);
    return sat_[bot + x1 + 1] - sat_[bot + x0] - sat_[top + x1 + 1] + sat_[top + x0];
  }

  int scan_fine_cell(int jy, int jx, const Vec2& center) const {
    const size_t c = static_cast<size_t>(jy) * fine_nx_ + jx;
    int n = 0;
    for (int t = fine_start_[c]; t < fine_start_[c + 1]; ++t) {
      if (dist2(pts_[fine_ids_[t]], center) <= r2_) ++n;
    }
    return n;
  }

  const std::vector<Vec2>& pts_;
  double r_, r2_;
  Vec2 origin_;
  double fine_g_, coarse_g_;
  int fine_nx_, fine_ny_, coarse_nx_, coarse_ny_;
  std::vector<int> fine_count_;
  std::vector<int> fine_start_, fine_ids_;
  std::vector<int> coarse_start_, coarse_ids_;
  std::vector<int> coarse_uncovered_;
  std::vector<long long> sat_;
};

struct PqEntry {
  int count;
  int id;
  bool operator<(const PqEntry& o) const {
    // max-heap on count, then min on id
    if (count != o.count) return count < o.count;
    return id > o.id;
  }
};

}  // namespace

DeploymentPlan gdc_greedy(const std::vector<Vec2>& points, double r) {
  if (points.empty()) throw std::invalid_argument("gdc_greedy: empty point set");
  if (r <= 0.0) throw std::invalid_argument("gdc_greedy: radius must be > 0");
  const int n = static_cast<int>(points.size());

  DiskCountGrid grid(points, r);
  std::vector<uint8_t> covered(n, 0);
  std::vector<int> stored_count(n);
  std::vector<int> computed_epoch(n, 0);

  std::priority_queue<PqEntry> pq;
  for (int k = 0; k < n; ++k) {
    stored_count[k] = grid.count_initial(points[k]);
    pq.push({stored_count[k], k});
  }

  DeploymentPlan plan;
  plan.radius_m = r;
  plan.method = DeployMethod::GdcGreedy;
  std::vector<uint8_t> selected(n, 0);

  int remaining = n;
  int epoch = 0;
  while (remaining > 0) {
    PqEntry top = pq.top();
    pq.pop();
    if (selected[top.id] || top.count != stored_count[top.id]) continue;  // stale entry
    if (computed_epoch[top.id] != epoch) {
      // Counts only decrease, so a stale-epoch entry is an upper bound;
      // refresh it and requeue.
      stored_count[top.id] = grid.count_uncovered(points[top.id], covered);
      computed_epoch[top.id] = epoch;
      pq.push({stored_count[top.id], top.id});
      continue;
    }
    selected[top.id] = 1;
    plan.center_user_ids.push_back(top.id);
    plan.centers.push_back(points[top.id]);
    grid.cover(points[top.id], covered, &remaining);
    ++epoch;
  }
  return plan;
}

std::vector<int> gdc_exact_indices(const CoverageMatrix& d, int max_k) {
  const int k = d.k;
  if (k > max_k)
    throw std::invalid_argument("gdc_exact: instance size " + std::to_string(k) +
                                " exceeds the exact-solve cap " + std::to_string(max_k));
  if (k > 63) throw std::invalid_argument("gdc_exact: more than 63 users unsupported");

  std::vector<uint64_t> col(k, 0);
  for (int c = 0; c < k; ++c) {
    for (int u = 0; u < k; ++u) {
      if (d.at(c, u)) col[c] |= (1ULL << u);
    }
  }
  const uint64_t full = k == 64 ? ~0ULL : ((1ULL << k) - 1);

  std::vector<int> best = gdc_greedy_indices(d);
  int max_col_size = 1;
  for (int c = 0; c < k; ++c)
    max_col_size = std::max(max_col_size, static_cast<int>(__builtin_popcountll(col[c])));

  std::vector<int> chosen;
  auto dfs = [&](auto&& self, uint64_t covered, int depth) -> void {
    if (covered == full) {
      if (depth < static_cast<int>(best.size())) best = chosen;
      return;
    }
    const int uncovered = k - __builtin_popcountll(covered);
    const int lower = depth + (uncovered + max_col_size - 1) / max_col_size;
    if (lower >= static_cast<int>(best.size())) return;

    // Branch on the uncovered user with the fewest coverers.
    int pivot = -1, pivot_options = k + 1;
    for (int u = 0; u < k; ++u) {
      if (covered & (1ULL << u)) continue;
      int options = 0;
      for (int c = 0; c < k; ++c)
        if (col[c] & (1ULL << u)) ++options;
      if (options < pivot_options) {
        pivot_options = options;
        pivot = u;
      }
    }
    std::vector<int> cands;
    for (int c = 0; c < k; ++c)
      if (col[c] & (1ULL << pivot)) cands.push_back(c);
    std::sort(cands.begin(), cands.end(), [&](int a, int b) {
      const int na = __builtin_popcountll(col[a] & ~covered);
      const int nb = __builtin_popcountll(col[b] & ~covered);
      if (na != nb) return na > nb;
      return a < b;
    });
    for (int c : cands) {
      chosen.push_back(c);
      self(self, covered | col[c], depth + 1);
      chosen.pop_back();
    }
  };
  dfs(dfs, 0, 0);
  return best;
}

DeploymentPlan gdc_exact(const std::vector<Vec2>& points, double r, int max_k) {
  const CoverageMatrix d = coverage_matrix(points, r);
  const std::vector<int> idx = gdc_exact_indices(d, max_k);
  DeploymentPlan plan;
  plan.radius_m = r;
  plan.method = DeployMethod::GdcExact;
  plan.center_user_ids = idx;
  for (int i : idx) plan.centers.push_back(points[i]);
  return plan;
}

namespace {

double dist_to_hexagon(const Vec2& p, const Vec2& center, double circumradius) {
  Vec2 v[6];
  for (int m = 0; m < 6; ++m) {
    const double ang = deg2rad(30.0 + 60.0 * m);
    v[m] = {center.x + circumradius * std::cos(ang),
            center.y + circumradius * std::sin(ang)};
  }
  bool inside = true;
  double min_edge = std::numeric_limits<double>::max();
  for (int m = 0; m < 6; ++m) {
    const Vec2& a = v[m];
    const Vec2& b = v[(m + 1) % 6];
    const Vec2 ab = b - a;
    const Vec2 ap = p - a;
    const double cross = ab.x * ap.y - ab.y * ap.x;
    if (cross < 0.0) inside = false;  // vertices are counter-clockwise
    const double t = std::clamp((ap.x * ab.x + ap.y * ab.y) / ab.norm2(), 0.0, 1.0);
    const Vec2 proj = {a.x + t * ab.x, a.y + t * ab.y};
    min_edge = std::min(min_edge, dist(p, proj));
  }
  return inside ? 0.0 : min_edge;
}

}  // namespace

DeploymentPlan hex_baseline(double big_r, double r, const Vec2& disk_center) {
  if (r <= 0.0 || big_r <= 0.0)
    throw std::invalid_argument("hex_baseline: radii must be > 0");
  DeploymentPlan plan;
  plan.radius_m = r;
  plan.method = DeployMethod::Hex;

  if (big_r <= r) {
    plan.centers.push_back(disk_center);
    return plan;
  }

  // Tiers needed so the union of hexagonal cells (inradius sqrt(3)/2 r per
  // tier step 1.5 r) reaches the disk edge.
  const double sqrt3 = std::sqrt(3.0);
  const int tiers = std::max(
      1, static_cast<int>(std::ceil((big_r - 0.5 * sqrt3 * r) / (1.5 * r))));

  const double s = sqrt3 * r;  // lattice spacing
  const Vec2 a1{s, 0.0};
  const Vec2 a2{0.5 * s, 1.5 * r};
  for (int i = -tiers; i <= tiers; ++i) {
    for (int j = -tiers; j <= tiers; ++j) {
      const int ring = std::max({std::abs(i), std::abs(j), std::abs(i + j)});
      if (ring > tiers) continue;
      const Vec2 c = {disk_center.x + i * a1.x + j * a2.x,
                      disk_center.y + i * a1.y + j * a2.y};
      if (dist_to_hexagon(disk_center, c, r) <= big_r) plan.centers.push_back(c);
    }
  }
  // Canonical order for deterministic output.
  std::sort(plan.centers.begin(), plan.centers.end(), [](const Vec2& a, const Vec2& b) {
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
  });
  return plan;
}

bool covers_all(const std::vector<Vec2>& points, const DeploymentPlan& plan, double tol) {
  const double lim = plan.radius_m + tol;
  const double lim2 = lim * lim;
  for (const Vec2& p : points) {
    bool ok = false;
    for (const Vec2& c : plan.centers) {
      if (dist2(p, c) <= lim2) {
        ok = true;
        break;
      }
    }
    if (!ok) return false;
  }
  return true;
}

}  // namespace nibplan
