#pragma once

#include <optional>

#include "stepnav/geometry.hpp"

namespace stepnav {

// Human-locomotion energy model constants. Defaults are the simulated-robot
// values (80 kg platform). E is carried for completeness but referenced by no
// cost term.
struct EnergyParams {
  double A = 44.0;
  double B = 0.2112;
  double C = 4.0;
  double D = 0.2;
  double E = 0.23;
  double F = 0.4;
  double mass = 80.0;        // kg
  double gravity = 9.81;     // m/s^2
  double side_penalty_multiplier = 10.0;
  double step_time = 1.0;    // s, constant by assumption
  double yaw_inertia = 1.0;  // kg*m^2, used by the yaw trajectory oracle only

  double mg() const { return mass * gravity; }
};

// Geometry of one footstep as seen by the energy model.
//   length: planar displacement of the step [m]
//   width:  lateral foot-to-foot distance [m]
//   yaw:    heading change [rad]
struct StepGeometry {
  double length = 0.0;
  double width = 0.0;
  double yaw = 0.0;
  bool sidestep = false;
};

// E_in = mg(A l^4 + B l + C) + mg D w^2 + mg F yaw^2 (+ mg * 10C if sidestep).
double step_energy(const StepGeometry& geom, const EnergyParams& p);

inline constexpr double kCotDisplacementEpsilon = 1e-4;  // m

// Cost of transport E_in / (mg * l). Undefined (nullopt) below the
// displacement epsilon: walking on the spot has no meaningful COT.
std::optional<double> cot(const StepGeometry& geom, const EnergyParams& p);

struct StraightStepOptimum {
  double length = 0.0;  // argmin step length [m]
  double cot = 0.0;     // minimum straight-walking COT (alpha)
};

// Minimizes (A l^4 + B l + C)/l over (0, l_max] to 1e-6 m.
StraightStepOptimum optimal_straight_step(const EnergyParams& p, double l_max);

// Step count N used by the heuristic's angle term: the minimum feasible
// number of steps given per-step length/yaw limits. fixed_n > 0 overrides.
struct StepCountPolicy {
  double max_step_displacement = 0.40;  // m
  double max_step_yaw = deg2rad(15.0);  // rad
  int fixed_n = 0;

  int count(double dist, double dyaw) const;
};

// Signed heading error driving the heuristic's angle term: bearing towards
// the goal while outside goal_radius, the goal heading (if any) inside it.
double goal_heading_error(const FootState& state, const GoalSpec& goal,
                          double goal_radius);

// h(s) = alpha * mg * dist + mg * F * dtheta^2 / N.
double heuristic(const FootState& state, const GoalSpec& goal,
                 const EnergyParams& p, double alpha,
                 const StepCountPolicy& policy, double goal_radius);

// Numerically integrates |I_zz a(t) v(t)| over one step of the smooth
// (trigonometric) yaw trajectory reaching theta_des at T_step. Serves as the
// oracle that the yaw energy term scales with theta^2. `samples` must be a
// positive multiple of 4 (keeps the |.| kink at T/2 on a panel boundary).
double yaw_trajectory_energy(double theta_des, double t_step, double i_zz,
                             int samples = 2000);

}  // namespace stepnav
