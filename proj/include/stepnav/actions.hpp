#pragma once

#include <functional>
#include <string>
#include <vector>

#include "stepnav/energy.hpp"
#include "stepnav/geometry.hpp"

namespace stepnav {

// Relative footstep displacement in the stance-foot frame. Canonical tables
// are authored for a left-foot swing (stance = right, dy > 0) and mirrored
// for the opposite side.
struct FootstepAction {
  double dx = 0.0;
  double dy = 0.0;
  double dtheta = 0.0;
  int subset_id = -1;
  bool sidestep = false;
  bool rotate_in_place = false;
};

struct ActionCandidate {
  double dx = 0.0;
  double dy = 0.0;
  double dtheta = 0.0;
};

// One directional subset: candidates ordered most-extended to most
// conservative.
struct ActionSubset {
  std::string id;
  bool sidestep = false;
  bool rotate_in_place = false;
  std::vector<ActionCandidate> candidates;
};

enum class SelectionMode { MinCot, Farthest };

struct ActionConfig {
  std::string profile_name = "sim";
  double max_step_length = 0.40;       // |dx| bound [m]
  double min_step_width = 0.18;        // lateral placement bounds [m]
  double max_step_width = 0.35;
  double max_step_yaw = deg2rad(15.0); // |dtheta| bound [rad]
  double nominal_width = 0.22;         // step-in-place lateral offset [m]
  SelectionMode selection = SelectionMode::MinCot;
  double near_goal_factor = 2.0;       // full-set switch radius = factor * max_step_length
  std::vector<ActionSubset> subsets;   // canonical, left-foot swing

  static ActionConfig profile(const std::string& name);  // "sim" | "real"

  double near_goal_radius() const { return near_goal_factor * max_step_length; }
  // Largest candidate step displacement; domain bound for the heuristic alpha.
  double max_step_displacement() const;
  bool candidate_within_limits(const ActionCandidate& c) const;
};

// New stance pose after applying an (already side-correct) action.
FootState successor(const FootState& state, const FootstepAction& action);

// Swaps swing side: dy and dtheta negated.
FootstepAction mirror(const FootstepAction& action);

// Energy-model geometry of an action: length is the displacement from the
// step-in-place placement, width the lateral foot-to-foot distance.
StepGeometry step_geometry(const FootstepAction& action, double nominal_width);

// Step-in-place action for the given swing side.
FootstepAction step_in_place_action(const ActionConfig& cfg, Side swing_side);

using FeasibilityOracle =
    std::function<bool(const FootstepAction&, const FootState&)>;

// At most one action per subset: the feasible candidate minimizing COT
// (min step_energy for rotate-in-place subsets, where COT is undefined).
// SelectionMode::Farthest picks the largest feasible displacement instead.
// Subsets with no feasible candidate contribute nothing.
std::vector<FootstepAction> adaptive_set(const ActionConfig& cfg,
                                         const FootState& state,
                                         const FeasibilityOracle& feasible,
                                         const EnergyParams& params);

// The complete candidate grid for the side that swings out of `state`.
std::vector<FootstepAction> full_set(const ActionConfig& cfg,
                                     const FootState& state);

}  // namespace stepnav
