#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stepnav/actions.hpp"
#include "stepnav/elevation_map.hpp"
#include "stepnav/energy.hpp"
#include "stepnav/feasibility.hpp"
#include "stepnav/geometry.hpp"
#include "stepnav/planner.hpp"

namespace stepnav {

struct BoxPrim {
  double cx = 0, cy = 0;      // center [m]
  double sx = 0, sy = 0;      // extents [m]
  double height = 0;          // top height [m]
  std::string name;           // non-empty only for event-managed primitives
};

// Linear rise from 0 at the low edge to `height` at the high edge, along an
// axis direction (+x, -x, +y, -y).
struct RampPrim {
  double cx = 0, cy = 0;
  double sx = 0, sy = 0;
  double height = 0;
  char axis = 'x';
  int dir = +1;
};

struct NoisePrim {
  double cx = 0, cy = 0;
  double sx = 0, sy = 0;
  double amplitude = 0;  // per-cell additive noise in [0, amplitude)
};

struct DynamicEvent {
  enum class Kind { Insert, Remove };
  int at_step = 0;  // fires at the tick that executes this robot step number
  Kind kind = Kind::Insert;
  std::string name;
  BoxPrim box;  // for Insert
};

struct SimConfig {
  int tick_iteration_budget = 2000;
  int max_ticks = 500;
};

struct Scenario {
  std::string name = "unnamed";
  double size_x = 3.0, size_y = 3.0;
  double resolution = 0.05;
  double origin_x = 0.0, origin_y = 0.0;
  std::uint64_t seed = 0;
  double filter_radius = 0.1;

  std::vector<BoxPrim> boxes;
  std::vector<RampPrim> ramps;
  std::vector<NoisePrim> noise;
  std::vector<DynamicEvent> events;

  Pose2 start;                      // body center pose
  Side start_stance = Side::Right;  // stance foot at t=0 (left foot swings first)
  GoalSpec goal;

  EnergyParams energy;
  FeasibilityConfig feasibility;
  PlannerConfig planner;
  SimConfig sim;
  ActionConfig actions = ActionConfig::profile("sim");

  // Stance/other foot poses derived from the body start pose.
  FootState start_stance_foot() const;
  Pose2 start_other_foot() const;

  void validate() const;  // throws ScenarioError on out-of-bounds primitives
};

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Human-readable scenario text (keyword lines + primitive list, explicit
// units). Errors carry file:line positions.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& text, const std::string& origin_name);
std::string serialize_scenario(const Scenario& s);

// Rasterizes the scenario primitives into the height layer (max height wins
// per cell). Derived layers stay empty until filter_chain runs. Deterministic
// for a fixed seed.
ElevationMap build_map(const Scenario& scenario);

// Re-rasterizes the height layer inside the given primitive's footprint
// (plus margin) against the current primitive list, then re-filters the
// affected region. `boxes` is the post-event primitive list.
void rebuild_region(ElevationMap& map, const Scenario& scenario,
                    const std::vector<BoxPrim>& boxes, const BoxPrim& dirty,
                    double margin);

}  // namespace stepnav
