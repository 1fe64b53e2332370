#pragma once

#include <atomic>
#include <optional>
#include <string>
#include <vector>

#include "stepnav/actions.hpp"
#include "stepnav/elevation_map.hpp"
#include "stepnav/energy.hpp"
#include "stepnav/feasibility.hpp"
#include "stepnav/geometry.hpp"

namespace stepnav {

enum class PlanStatus { Success, IterationLimit, DeadEnd };

const char* plan_status_name(PlanStatus s);

enum class HeuristicMode { Zero, Distance, DistanceAngle };

// Obstacle-proximity penalty added to h. weight and reverse penalty are given
// in units of mg*C so they track the cost scale.
struct PenaltyConfig {
  bool enabled = true;
  double check_dist = 0.5;      // m
  double weight_mgc = 40.0;     // J per meter, in mg*C units
  double rotate_relief = 0.25;  // multiplier for rotate-in-place actions
  double reverse_mgc = 10.0;    // extra for reversing the previous rotation
};

struct PlannerConfig {
  double goal_radius = 0.15;  // m, Euclidean termination tolerance
  int max_iterations = 2000;
  HeuristicMode heuristic = HeuristicMode::DistanceAngle;
  PenaltyConfig penalty;
  double dedup_xy_bin = 0.05;              // m
  double dedup_theta_bin = deg2rad(5.0);   // rad
  int step_count_fixed_n = 0;              // heuristic N override (0 = policy)
  bool trace = false;                      // record per-iteration pops
};

struct TraceRow {
  int iteration = 0;
  FootState state;
  double g = 0, h = 0, f = 0;
};

struct PlanStepCost {
  double g = 0.0;
  double h = 0.0;
};

struct PlanResult {
  std::vector<FootState> footsteps;  // starts with the start stance foot
  std::vector<PlanStepCost> footstep_costs;   // parallel to footsteps
  std::vector<FootstepAction> via_actions;    // action i leads to footsteps[i+1]
  double total_cost = 0.0;           // J
  int iterations = 0;                // open-list pops
  int expansions = 0;                // successor pushes
  PlanStatus status = PlanStatus::DeadEnd;
  std::vector<TraceRow> trace;       // filled only when cfg.trace
};

// Obstacle-aware heuristic: base h plus the proximity penalty for the
// foothold reached by `via` (relieved for rotate-in-place, increased when the
// rotation reverses the previous one).
double penalized_h(const FootState& state, const FootstepAction& via,
                   const std::optional<FootstepAction>& prev_action,
                   const GoalSpec& goal, const ElevationMap& map,
                   const ActionConfig& actions, const EnergyParams& energy,
                   const FeasibilityConfig& feas, const PlannerConfig& cfg,
                   double alpha);

// Best-first footstep search from the stance foot. `start_other` is the
// current swing-foot pose, needed for the first body-collision ellipse.
// Cancellation (optional) is polled between iterations.
PlanResult plan(const FootState& start_stance, const Pose2& start_other,
                const GoalSpec& goal, const ElevationMap& map,
                const ActionConfig& actions, const EnergyParams& energy,
                const FeasibilityConfig& feas, const PlannerConfig& cfg,
                const std::atomic<bool>* cancel = nullptr);

}  // namespace stepnav
