#include "stepnav/elevation_map.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stepnav {

namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

// Disk footprint around a cell: index offsets whose center distance is
// within the radius.
std::vector<std::pair<int, int>> disk_offsets(double radius, double resolution) {
  std::vector<std::pair<int, int>> out;
  const int r = static_cast<int>(std::floor(radius / resolution + 1e-9));
  const double r2 = radius * radius * (1.0 + 1e-12);
  for (int dj = -r; dj <= r; ++dj) {
    for (int di = -r; di <= r; ++di) {
      const double d2 = (di * di + dj * dj) * resolution * resolution;
      if (d2 <= r2) out.emplace_back(di, dj);
    }
  }
  return out;
}

}  // namespace

ElevationMap::ElevationMap(double resolution, double size_x, double size_y,
                           double origin_x, double origin_y)
    : resolution_(resolution), origin_x_(origin_x), origin_y_(origin_y) {
  if (resolution <= 0.0) throw std::invalid_argument("map resolution must be > 0");
  nx_ = std::max(1, static_cast<int>(std::llround(size_x / resolution)));
  ny_ = std::max(1, static_cast<int>(std::llround(size_y / resolution)));
  const std::size_t n = static_cast<std::size_t>(nx_) * ny_;
  height_.assign(n, 0.0);
  smoothed_.assign(n, kUnset);
  normal_z_.assign(n, kUnset);
  slope_.assign(n, kUnset);
  roughness_.assign(n, kUnset);
  traversability_.assign(n, kUnset);
  valid_.assign(n, 1);
}

CellSample ElevationMap::at(int ix, int iy) const {
  CellSample s;
  if (!valid(ix, iy)) return s;
  const std::size_t i = cell_index(ix, iy);
  s.known = true;
  s.filtered = filtered_;
  s.height = height_[i];
  if (filtered_) {
    s.smoothed_height = smoothed_[i];
    s.normal_z = normal_z_[i];
    s.slope = slope_[i];
    s.roughness = roughness_[i];
    s.traversability = traversability_[i];
  }
  return s;
}

CellSample ElevationMap::sample(double x, double y) const {
  return at(index_x(x), index_y(y));
}

const std::vector<double>& ElevationMap::layer(const std::string& name) const {
  if (name == "height") return height_;
  if (name == "smoothed_height") return smoothed_;
  if (name == "normal_z") return normal_z_;
  if (name == "slope") return slope_;
  if (name == "roughness") return roughness_;
  if (name == "traversability") return traversability_;
  throw std::invalid_argument("unknown map layer: " + name);
}

double traversability_score(double slope, double roughness) {
  const double v =
      0.5 * (1.0 - slope / 0.6) + 0.5 * (1.0 - std::abs(roughness) / 0.1);
  return std::clamp(v, 0.0, 1.0);
}

namespace {

// Average of the height layer over the disk; partial disks at boundaries.
void smooth_pass(const ElevationMap& in, ElevationMap& out,
                 const std::vector<std::pair<int, int>>& disk, int ix0,
                 int iy0, int ix1, int iy1) {
  for (int iy = iy0; iy <= iy1; ++iy) {
    for (int ix = ix0; ix <= ix1; ++ix) {
      if (!in.valid(ix, iy)) {
        out.set_smoothed(ix, iy, kUnset);
        continue;
      }
      double sum = 0.0;
      int n = 0;
      for (const auto& [di, dj] : disk) {
        const int jx = ix + di, jy = iy + dj;
        if (!in.valid(jx, jy)) continue;
        sum += in.height(jx, jy);
        ++n;
      }
      out.set_smoothed(ix, iy, n > 0 ? sum / n : in.height(ix, iy));
    }
  }
}

// Least-squares plane fit h = a x + b y + c over the smoothed layer in the
// disk; normal_z = 1 / sqrt(1 + a^2 + b^2). Coordinates centered on the cell
// to keep the normal equations well conditioned.
void normal_pass(ElevationMap& m, const std::vector<std::pair<int, int>>& disk,
                 int ix0, int iy0, int ix1, int iy1) {
  const double res = m.resolution();
  for (int iy = iy0; iy <= iy1; ++iy) {
    for (int ix = ix0; ix <= ix1; ++ix) {
      if (!m.valid(ix, iy)) {
        m.set_normal_z(ix, iy, kUnset);
        m.set_slope(ix, iy, kUnset);
        continue;
      }
      double sxx = 0, sxy = 0, syy = 0, sx = 0, sy = 0, s1 = 0;
      double sxh = 0, syh = 0, sh = 0;
      for (const auto& [di, dj] : disk) {
        const int jx = ix + di, jy = iy + dj;
        if (!m.valid(jx, jy)) continue;
        const double x = di * res, y = dj * res;
        const double h = m.smoothed(jx, jy);
        sxx += x * x; sxy += x * y; syy += y * y;
        sx += x; sy += y; s1 += 1;
        sxh += x * h; syh += y * h; sh += h;
      }
      double a = 0.0, b = 0.0;
      // Solve [sxx sxy sx; sxy syy sy; sx sy s1] [a b c]' = [sxh syh sh]'.
      const double det = sxx * (syy * s1 - sy * sy) - sxy * (sxy * s1 - sy * sx) +
                         sx * (sxy * sy - syy * sx);
      if (std::abs(det) > 1e-12) {
        const double det_a = sxh * (syy * s1 - sy * sy) -
                             sxy * (syh * s1 - sy * sh) +
                             sx * (syh * sy - syy * sh);
        const double det_b = sxx * (syh * s1 - sy * sh) -
                             sxh * (sxy * s1 - sy * sx) +
                             sx * (sxy * sh - syh * sx);
        a = det_a / det;
        b = det_b / det;
      }
      const double nz = 1.0 / std::sqrt(1.0 + a * a + b * b);
      m.set_normal_z(ix, iy, nz);
      m.set_slope(ix, iy, std::acos(std::min(1.0, nz)));
    }
  }
}

void roughness_pass(ElevationMap& m, int ix0, int iy0, int ix1, int iy1) {
  for (int iy = iy0; iy <= iy1; ++iy) {
    for (int ix = ix0; ix <= ix1; ++ix) {
      if (!m.valid(ix, iy)) {
        m.set_roughness(ix, iy, kUnset);
        m.set_traversability(ix, iy, kUnset);
        continue;
      }
      m.set_roughness(ix, iy, m.height(ix, iy) - m.smoothed(ix, iy));
      m.set_traversability(
          ix, iy, traversability_score(m.slope(ix, iy), m.roughness(ix, iy)));
    }
  }
}

}  // namespace

ElevationMap filter_chain(const ElevationMap& map, double avg_radius) {
  if (avg_radius < map.resolution())
    throw std::invalid_argument("averaging radius below map resolution");
  ElevationMap out = map;
  const auto disk = disk_offsets(avg_radius, map.resolution());
  smooth_pass(map, out, disk, 0, 0, map.cells_x() - 1, map.cells_y() - 1);
  normal_pass(out, disk, 0, 0, map.cells_x() - 1, map.cells_y() - 1);
  roughness_pass(out, 0, 0, map.cells_x() - 1, map.cells_y() - 1);
  out.mark_filtered();
  return out;
}

void filter_region(ElevationMap& map, double avg_radius, int ix0, int iy0,
                   int ix1, int iy1) {
  const auto disk = disk_offsets(avg_radius, map.resolution());
  const int r = static_cast<int>(std::floor(avg_radius / map.resolution() + 1e-9));
  // Smoothed values up to one disk radius outside the dirty box change too.
  const int sx0 = std::max(0, ix0 - r), sy0 = std::max(0, iy0 - r);
  const int sx1 = std::min(map.cells_x() - 1, ix1 + r);
  const int sy1 = std::min(map.cells_y() - 1, iy1 + r);
  smooth_pass(map, map, disk, sx0, sy0, sx1, sy1);  // reads height, writes smoothed
  // Normals read smoothed cells one more radius out.
  const int nx0 = std::max(0, sx0 - r), ny0 = std::max(0, sy0 - r);
  const int nx1 = std::min(map.cells_x() - 1, sx1 + r);
  const int ny1 = std::min(map.cells_y() - 1, sy1 + r);
  normal_pass(map, disk, nx0, ny0, nx1, ny1);
  roughness_pass(map, nx0, ny0, nx1, ny1);
  map.mark_filtered();
}

}  // namespace stepnav
