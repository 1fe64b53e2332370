#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "stepnav/geometry.hpp"

namespace stepnav {

// Values of one cell, as returned by point queries. Out-of-bounds or masked
// cells come back with known == false and must be treated as unsteppable.
struct CellSample {
  bool known = false;
  bool filtered = false;
  double height = 0.0;
  double smoothed_height = 0.0;
  double normal_z = 1.0;
  double slope = 0.0;
  double roughness = 0.0;
  double traversability = 0.0;
};

// 2.5D elevation raster. One height per cell plus the derived filter layers.
// After filter_chain() the object is treated as an immutable snapshot and may
// be shared freely across planner and simulator activities.
class ElevationMap {
 public:
  ElevationMap() = default;
  ElevationMap(double resolution, double size_x, double size_y,
               double origin_x, double origin_y);

  double resolution() const { return resolution_; }
  double origin_x() const { return origin_x_; }
  double origin_y() const { return origin_y_; }
  int cells_x() const { return nx_; }
  int cells_y() const { return ny_; }
  double size_x() const { return nx_ * resolution_; }
  double size_y() const { return ny_ * resolution_; }
  bool filtered() const { return filtered_; }

  bool in_bounds(int ix, int iy) const {
    return ix >= 0 && ix < nx_ && iy >= 0 && iy < ny_;
  }

  // Half-open cell intervals, lower edge inclusive. The small epsilon keeps
  // queries landing exactly on a printed boundary coordinate in the upper
  // cell despite FP division error.
  int index_x(double x) const {
    return static_cast<int>(std::floor((x - origin_x_) / resolution_ + 1e-9));
  }
  int index_y(double y) const {
    return static_cast<int>(std::floor((y - origin_y_) / resolution_ + 1e-9));
  }
  double center_x(int ix) const { return origin_x_ + (ix + 0.5) * resolution_; }
  double center_y(int iy) const { return origin_y_ + (iy + 0.5) * resolution_; }

  std::size_t cell_index(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * nx_ + ix;
  }

  bool valid(int ix, int iy) const {
    return in_bounds(ix, iy) && valid_[cell_index(ix, iy)] != 0;
  }
  void set_valid(int ix, int iy, bool v) { valid_[cell_index(ix, iy)] = v ? 1 : 0; }

  double height(int ix, int iy) const { return height_[cell_index(ix, iy)]; }
  void set_height(int ix, int iy, double h) { height_[cell_index(ix, iy)] = h; }

  double smoothed(int ix, int iy) const { return smoothed_[cell_index(ix, iy)]; }
  double normal_z(int ix, int iy) const { return normal_z_[cell_index(ix, iy)]; }
  double slope(int ix, int iy) const { return slope_[cell_index(ix, iy)]; }
  double roughness(int ix, int iy) const { return roughness_[cell_index(ix, iy)]; }
  double traversability(int ix, int iy) const {
    return traversability_[cell_index(ix, iy)];
  }

  void set_smoothed(int ix, int iy, double v) { smoothed_[cell_index(ix, iy)] = v; }
  void set_normal_z(int ix, int iy, double v) { normal_z_[cell_index(ix, iy)] = v; }
  void set_slope(int ix, int iy, double v) { slope_[cell_index(ix, iy)] = v; }
  void set_roughness(int ix, int iy, double v) { roughness_[cell_index(ix, iy)] = v; }
  void set_traversability(int ix, int iy, double v) {
    traversability_[cell_index(ix, iy)] = v;
  }
  void mark_filtered() { filtered_ = true; }

  CellSample at(int ix, int iy) const;
  CellSample sample(double x, double y) const;

  const std::vector<double>& height_layer() const { return height_; }
  const std::vector<double>& smoothed_layer() const { return smoothed_; }
  const std::vector<double>& normal_z_layer() const { return normal_z_; }
  const std::vector<double>& slope_layer() const { return slope_; }
  const std::vector<double>& roughness_layer() const { return roughness_; }
  const std::vector<double>& traversability_layer() const {
    return traversability_;
  }
  const std::vector<std::uint8_t>& validity() const { return valid_; }

  const std::vector<double>& layer(const std::string& name) const;

 private:
  double resolution_ = 0.05;
  double origin_x_ = 0.0;
  double origin_y_ = 0.0;
  int nx_ = 0;
  int ny_ = 0;
  bool filtered_ = false;

  std::vector<double> height_;
  std::vector<double> smoothed_;
  std::vector<double> normal_z_;
  std::vector<double> slope_;
  std::vector<double> roughness_;
  std::vector<double> traversability_;
  std::vector<std::uint8_t> valid_;
};

// Table-style traversability score: equal-weight slope and roughness
// penalties, saturated to [0, 1].
double traversability_score(double slope, double roughness);

// Runs the filter stack (average -> normal/slope -> roughness ->
// traversability) over the whole map and returns the filtered snapshot.
ElevationMap filter_chain(const ElevationMap& map, double avg_radius);

// Re-filters only [ix0, ix1] x [iy0, iy1] in place (bounds are clamped).
// Used after dynamic map edits; result is bit-identical to a full re-filter.
void filter_region(ElevationMap& map, double avg_radius, int ix0, int iy0,
                   int ix1, int iy1);

}  // namespace stepnav
