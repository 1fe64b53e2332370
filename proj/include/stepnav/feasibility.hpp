#pragma once

#include <optional>

#include "stepnav/elevation_map.hpp"
#include "stepnav/geometry.hpp"

namespace stepnav {

struct FeasibilityConfig {
  double traversability_min = 0.5;
  double foothold_height_max = 0.05;  // m above the stance cell
  double foot_length = 0.22;          // m, along the foot heading
  double foot_width = 0.14;           // m
  double body_half_width = 0.22;      // ellipse short semi-axis [m]
  double sway_margin = 0.05;          // added to the stance->swing long semi-axis [m]
  double body_obstacle_height = 0.30; // m above the walking plane
};

// Foot-level check: every cell whose center lies in the oriented foot
// rectangle must be known, traversable and no more than foothold_height_max
// above the stance cell height.
bool foothold_feasible(const ElevationMap& map, const Pose2& foot_pose,
                       double reference_height, const FeasibilityConfig& cfg);

// Body-level check with two ellipses: stance->new-swing (sway margin applied)
// and previous-swing->new-swing. Fails iff a known cell inside either ellipse
// rises more than body_obstacle_height above the walking plane.
bool body_feasible(const ElevationMap& map, const Pose2& stance,
                   const Pose2& prev_swing, const Pose2& new_swing,
                   const FeasibilityConfig& cfg);

// Marches a forward ray at map resolution and returns the distance at which
// the body corridor (width 2*body_half_width) first meets a cell higher than
// body_obstacle_height above the origin cell; nullopt if clear to max_dist.
std::optional<double> obstacle_ray(const ElevationMap& map,
                                   const Pose2& origin, double direction,
                                   double max_dist,
                                   const FeasibilityConfig& cfg);

}  // namespace stepnav
