#include "stepnav/feasibility.hpp"

#include <algorithm>
#include <cmath>

namespace stepnav {

namespace {

struct Aabb {
  int ix0, iy0, ix1, iy1;
};

Aabb cell_range(const ElevationMap& map, double x0, double y0, double x1,
                double y1) {
  Aabb r;
  r.ix0 = std::max(0, map.index_x(x0));
  r.iy0 = std::max(0, map.index_y(y0));
  r.ix1 = std::min(map.cells_x() - 1, map.index_x(x1));
  r.iy1 = std::min(map.cells_y() - 1, map.index_y(y1));
  return r;
}

}  // namespace

bool foothold_feasible(const ElevationMap& map, const Pose2& foot_pose,
                       double reference_height, const FeasibilityConfig& cfg) {
  const double hl = 0.5 * cfg.foot_length;
  const double hw = 0.5 * cfg.foot_width;
  const double c = std::cos(foot_pose.theta), s = std::sin(foot_pose.theta);
  const double rx = std::abs(c) * hl + std::abs(s) * hw;
  const double ry = std::abs(s) * hl + std::abs(c) * hw;
  const Aabb box = cell_range(map, foot_pose.x - rx, foot_pose.y - ry,
                              foot_pose.x + rx, foot_pose.y + ry);
  // If the rectangle sticks out of the map the clipped cells are unknown.
  if (foot_pose.x - rx < map.origin_x() || foot_pose.y - ry < map.origin_y() ||
      foot_pose.x + rx > map.origin_x() + map.size_x() ||
      foot_pose.y + ry > map.origin_y() + map.size_y())
    return false;
  for (int iy = box.iy0; iy <= box.iy1; ++iy) {
    for (int ix = box.ix0; ix <= box.ix1; ++ix) {
      // Cell center in the foot frame.
      const double wx = map.center_x(ix) - foot_pose.x;
      const double wy = map.center_y(iy) - foot_pose.y;
      const double fx = c * wx + s * wy;
      const double fy = -s * wx + c * wy;
      if (std::abs(fx) > hl || std::abs(fy) > hw) continue;
      if (!map.valid(ix, iy)) return false;
      if (map.traversability(ix, iy) < cfg.traversability_min) return false;
      if (map.height(ix, iy) - reference_height > cfg.foothold_height_max)
        return false;
    }
  }
  return true;
}

namespace {

// Cells of an ellipse spanning p->q with the given extra long semi-axis
// margin; returns false on the first cell above the height limit.
bool ellipse_clear(const ElevationMap& map, const Pose2& p, const Pose2& q,
                   double margin, double half_width, double height_limit) {
  const double mx = 0.5 * (p.x + q.x), my = 0.5 * (p.y + q.y);
  const double d = std::hypot(q.x - p.x, q.y - p.y);
  const double a = 0.5 * d + margin;
  const double b = half_width;
  if (a <= 0.0 || b <= 0.0) return true;
  double ux = 1.0, uy = 0.0;
  if (d > 1e-12) {
    ux = (q.x - p.x) / d;
    uy = (q.y - p.y) / d;
  }
  const double r = std::max(a, b);
  const Aabb box = cell_range(map, mx - r, my - r, mx + r, my + r);
  for (int iy = box.iy0; iy <= box.iy1; ++iy) {
    for (int ix = box.ix0; ix <= box.ix1; ++ix) {
      if (!map.valid(ix, iy)) continue;
      const double wx = map.center_x(ix) - mx;
      const double wy = map.center_y(iy) - my;
      const double lx = ux * wx + uy * wy;
      const double ly = -uy * wx + ux * wy;
      if ((lx * lx) / (a * a) + (ly * ly) / (b * b) > 1.0) continue;
      if (map.height(ix, iy) > height_limit) return false;
    }
  }
  return true;
}

}  // namespace

bool body_feasible(const ElevationMap& map, const Pose2& stance,
                   const Pose2& prev_swing, const Pose2& new_swing,
                   const FeasibilityConfig& cfg) {
  const CellSample plane = map.sample(stance.x, stance.y);
  const double base = plane.known ? plane.height : 0.0;
  const double limit = base + cfg.body_obstacle_height;
  if (!ellipse_clear(map, stance, new_swing, cfg.sway_margin,
                     cfg.body_half_width, limit))
    return false;
  return ellipse_clear(map, prev_swing, new_swing, 0.0, cfg.body_half_width,
                       limit);
}

std::optional<double> obstacle_ray(const ElevationMap& map,
                                   const Pose2& origin, double direction,
                                   double max_dist,
                                   const FeasibilityConfig& cfg) {
  const double res = map.resolution();
  const double c = std::cos(direction), s = std::sin(direction);
  const CellSample start = map.sample(origin.x, origin.y);
  const double base = start.known ? start.height : 0.0;
  const double limit = base + cfg.body_obstacle_height;
  const int lat_steps =
      static_cast<int>(std::floor(cfg.body_half_width / res + 1e-9));
  const int fwd_steps = static_cast<int>(std::floor(max_dist / res + 1e-9));
  for (int i = 0; i <= fwd_steps; ++i) {
    const double t = i * res;
    const double px = origin.x + t * c;
    const double py = origin.y + t * s;
    for (int k = -lat_steps; k <= lat_steps; ++k) {
      const double o = k * res;
      const CellSample cell = map.sample(px - o * s, py + o * c);
      if (cell.known && cell.height > limit) return t;
    }
  }
  return std::nullopt;
}

}  // namespace stepnav
