#pragma once

#include <string>
#include <vector>

#include "stepnav/elevation_map.hpp"
#include "stepnav/feasibility.hpp"
#include "stepnav/geometry.hpp"

namespace stepnav {

struct RenderOptions {
  double foot_length = 0.22;
  double foot_width = 0.14;
  double goal_radius = 0.15;
  bool body_ellipses = false;
  double body_half_width = 0.22;
  double sway_margin = 0.05;
};

// Static top view: height raster, goal disc, footsteps as oriented
// rectangles (one <rect class="footstep ..."> per step), optional body
// ellipses between consecutive steps.
void write_plan_svg(const ElevationMap& map, const std::vector<FootState>& steps,
                    const GoalSpec& goal, const RenderOptions& opt,
                    const std::string& path);

}  // namespace stepnav
