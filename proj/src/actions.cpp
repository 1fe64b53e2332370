#include "stepnav/actions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stepnav {

namespace {

ActionSubset make_subset(const std::string& id, bool sidestep, bool rot,
                         std::vector<ActionCandidate> cands) {
  ActionSubset s;
  s.id = id;
  s.sidestep = sidestep;
  s.rotate_in_place = rot;
  s.candidates = std::move(cands);
  return s;
}

}  // namespace

ActionConfig ActionConfig::profile(const std::string& name) {
  ActionConfig cfg;
  cfg.profile_name = name;
  // All yaw candidates are 15 deg multiples so reachable headings stay on a
  // 24-state lattice that the duplicate-detection bins resolve exactly.
  const double y15 = deg2rad(15.0);
  if (name == "sim") {
    cfg.max_step_length = 0.40;
    cfg.subsets = {
        // Forward: pure extension at nominal width.
        make_subset("forward", false, false,
                    {{0.40, 0.22, 0.0}, {0.30, 0.22, 0.0},
                     {0.20, 0.22, 0.0}, {0.10, 0.22, 0.0}}),
        // Outward diagonal, yaw into the turn; candidates vary extension only.
        make_subset("diag_out", false, false,
                    {{0.40, 0.35, y15}, {0.40, 0.29, y15},
                     {0.30, 0.28, y15}, {0.20, 0.26, y15}}),
        // Cross-side turn: forward while yawing away from the swing side.
        make_subset("diag_in", false, false,
                    {{0.40, 0.18, -y15}, {0.40, 0.20, -y15},
                     {0.30, 0.20, -y15}, {0.20, 0.21, -y15}}),
        make_subset("side_out", true, false,
                    {{0.0, 0.35, 0.0}, {0.0, 0.31, 0.0}, {0.0, 0.27, 0.0}}),
        make_subset("side_in", true, false,
                    {{0.0, 0.18, 0.0}, {0.0, 0.19, 0.0}, {0.0, 0.20, 0.0}}),
        // Rotations at the yaw limit; candidates differ in stance width.
        make_subset("rot_ccw", false, true, {{0.0, 0.26, y15}, {0.0, 0.22, y15}}),
        make_subset("rot_cw", false, true, {{0.0, 0.26, -y15}, {0.0, 0.22, -y15}}),
    };
  } else if (name == "real") {
    cfg.max_step_length = 0.30;
    cfg.subsets = {
        make_subset("forward", false, false,
                    {{0.30, 0.22, 0.0}, {0.22, 0.22, 0.0},
                     {0.15, 0.22, 0.0}, {0.08, 0.22, 0.0}}),
        make_subset("diag_out", false, false,
                    {{0.30, 0.32, y15}, {0.30, 0.27, y15},
                     {0.22, 0.26, y15}, {0.15, 0.25, y15}}),
        make_subset("diag_in", false, false,
                    {{0.30, 0.19, -y15}, {0.30, 0.20, -y15},
                     {0.22, 0.20, -y15}, {0.15, 0.21, -y15}}),
        make_subset("side_out", true, false,
                    {{0.0, 0.35, 0.0}, {0.0, 0.31, 0.0}, {0.0, 0.27, 0.0}}),
        make_subset("side_in", true, false,
                    {{0.0, 0.18, 0.0}, {0.0, 0.19, 0.0}, {0.0, 0.20, 0.0}}),
        make_subset("rot_ccw", false, true, {{0.0, 0.26, y15}, {0.0, 0.22, y15}}),
        make_subset("rot_cw", false, true, {{0.0, 0.26, -y15}, {0.0, 0.22, -y15}}),
    };
  } else {
    throw std::invalid_argument("unknown action profile: " + name);
  }
  for (const auto& sub : cfg.subsets)
    for (const auto& c : sub.candidates)
      if (!cfg.candidate_within_limits(c))
        throw std::logic_error("action profile candidate violates limits");
  return cfg;
}

bool ActionConfig::candidate_within_limits(const ActionCandidate& c) const {
  return std::abs(c.dx) <= max_step_length + 1e-12 && c.dx >= 0.0 &&
         c.dy >= min_step_width - 1e-12 && c.dy <= max_step_width + 1e-12 &&
         std::abs(c.dtheta) <= max_step_yaw + 1e-12;
}

double ActionConfig::max_step_displacement() const {
  double best = 0.0;
  for (const auto& sub : subsets)
    for (const auto& c : sub.candidates)
      best = std::max(best, std::hypot(c.dx, c.dy - nominal_width));
  return best;
}

FootState successor(const FootState& state, const FootstepAction& action) {
  FootState next;
  next.pose = advance(state.pose, action.dx, action.dy, action.dtheta);
  next.side = opposite(state.side);
  next.step_index = state.step_index + 1;
  return next;
}

FootstepAction mirror(const FootstepAction& action) {
  FootstepAction m = action;
  m.dy = -m.dy;
  m.dtheta = -m.dtheta;
  return m;
}

StepGeometry step_geometry(const FootstepAction& action, double nominal_width) {
  StepGeometry g;
  g.length = std::hypot(action.dx, std::abs(action.dy) - nominal_width);
  g.width = std::abs(action.dy);
  g.yaw = action.dtheta;
  g.sidestep = action.sidestep;
  return g;
}

FootstepAction step_in_place_action(const ActionConfig& cfg, Side swing_side) {
  FootstepAction a;
  a.dx = 0.0;
  a.dy = swing_side == Side::Left ? cfg.nominal_width : -cfg.nominal_width;
  a.dtheta = 0.0;
  a.subset_id = -1;
  a.rotate_in_place = true;  // zero displacement, COT undefined
  return a;
}

namespace {

FootstepAction make_action(const ActionCandidate& c, const ActionSubset& sub,
                           int subset_id, Side swing_side) {
  FootstepAction a;
  a.dx = c.dx;
  a.dy = c.dy;
  a.dtheta = c.dtheta;
  a.subset_id = subset_id;
  a.sidestep = sub.sidestep;
  a.rotate_in_place = sub.rotate_in_place;
  return swing_side == Side::Left ? a : mirror(a);
}

}  // namespace

std::vector<FootstepAction> adaptive_set(const ActionConfig& cfg,
                                         const FootState& state,
                                         const FeasibilityOracle& feasible,
                                         const EnergyParams& params) {
  std::vector<FootstepAction> out;
  const Side swing = opposite(state.side);
  for (std::size_t si = 0; si < cfg.subsets.size(); ++si) {
    const auto& sub = cfg.subsets[si];
    bool have = false;
    FootstepAction best{};
    double best_key = std::numeric_limits<double>::infinity();
    double best_disp = -1.0;
    double best_yaw = std::numeric_limits<double>::infinity();
    for (const auto& c : sub.candidates) {
      const FootstepAction a = make_action(c, sub, static_cast<int>(si), swing);
      const FootState succ = successor(state, a);
      if (!feasible(a, succ)) continue;
      const StepGeometry geom = step_geometry(a, cfg.nominal_width);
      double key;
      if (cfg.selection == SelectionMode::Farthest && !sub.rotate_in_place) {
        key = -geom.length;
      } else if (sub.rotate_in_place) {
        // COT undefined at zero displacement; rank by step energy.
        key = step_energy(geom, params);
      } else {
        const auto c_over_t = cot(geom, params);
        key = c_over_t ? *c_over_t : step_energy(geom, params);
      }
      const bool better =
          key < best_key - 1e-12 ||
          (std::abs(key - best_key) <= 1e-12 &&
           (geom.length > best_disp + 1e-12 ||
            (std::abs(geom.length - best_disp) <= 1e-12 &&
             std::abs(a.dtheta) < best_yaw)));
      if (!have || better) {
        have = true;
        best = a;
        best_key = key;
        best_disp = geom.length;
        best_yaw = std::abs(a.dtheta);
      }
    }
    if (have) out.push_back(best);
  }
  return out;
}

std::vector<FootstepAction> full_set(const ActionConfig& cfg,
                                     const FootState& state) {
  std::vector<FootstepAction> out;
  const Side swing = opposite(state.side);
  for (std::size_t si = 0; si < cfg.subsets.size(); ++si) {
    const auto& sub = cfg.subsets[si];
    for (const auto& c : sub.candidates)
      out.push_back(make_action(c, sub, static_cast<int>(si), swing));
  }
  return out;
}

}  // namespace stepnav
