#include "stepnav/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stepnav {

double step_energy(const StepGeometry& geom, const EnergyParams& p) {
  const double l = geom.length;
  const double mg = p.mg();
  const double e_length = mg * (p.A * l * l * l * l + p.B * l + p.C);
  const double e_width = mg * p.D * geom.width * geom.width;
  const double e_angle = mg * p.F * geom.yaw * geom.yaw;
  const double e_side = geom.sidestep ? mg * p.side_penalty_multiplier * p.C : 0.0;
  return e_length + e_width + e_angle + e_side;
}

std::optional<double> cot(const StepGeometry& geom, const EnergyParams& p) {
  if (geom.length <= kCotDisplacementEpsilon) return std::nullopt;
  return step_energy(geom, p) / (p.mg() * geom.length);
}

StraightStepOptimum optimal_straight_step(const EnergyParams& p, double l_max) {
  if (l_max <= 0.0) throw std::invalid_argument("l_max must be > 0");
  const auto ratio = [&](double l) {
    return (p.A * l * l * l * l + p.B * l + p.C) / l;
  };
  // Unimodal on (0, inf): decreasing towards the stationary point, then
  // increasing. Golden-section to 1e-6 m, then compare with the boundary.
  double lo = 1e-6, hi = l_max;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = ratio(x1), f2 = ratio(x2);
  while (hi - lo > 1e-7) {
    if (f1 < f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = ratio(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = ratio(x2);
    }
  }
  double l_opt = 0.5 * (lo + hi);
  if (ratio(l_max) <= ratio(l_opt)) l_opt = l_max;
  return StraightStepOptimum{l_opt, ratio(l_opt)};
}

int StepCountPolicy::count(double dist, double dyaw) const {
  if (fixed_n > 0) return fixed_n;
  int n = 1;
  if (max_step_displacement > 0.0)
    n = std::max(n, static_cast<int>(
                        std::ceil(dist / max_step_displacement - 1e-9)));
  if (max_step_yaw > 0.0)
    n = std::max(n, static_cast<int>(
                        std::ceil(std::abs(dyaw) / max_step_yaw - 1e-9)));
  return n;
}

double goal_heading_error(const FootState& state, const GoalSpec& goal,
                          double goal_radius) {
  const double dist = distance_to_goal(state.pose, goal);
  if (dist > goal_radius) {
    const double bearing = std::atan2(goal.y - state.pose.y, goal.x - state.pose.x);
    return wrap_angle(bearing - state.pose.theta);
  }
  if (goal.heading) return wrap_angle(*goal.heading - state.pose.theta);
  return 0.0;
}

double heuristic(const FootState& state, const GoalSpec& goal,
                 const EnergyParams& p, double alpha,
                 const StepCountPolicy& policy, double goal_radius) {
  const double dist = distance_to_goal(state.pose, goal);
  const double dyaw = goal_heading_error(state, goal, goal_radius);
  const int n = policy.count(dist, dyaw);
  return alpha * p.mg() * dist + p.mg() * p.F * dyaw * dyaw / n;
}

double yaw_trajectory_energy(double theta_des, double t_step, double i_zz,
                             int samples) {
  if (t_step <= 0.0) throw std::invalid_argument("t_step must be > 0");
  if (samples < 4 || samples % 4 != 0)
    throw std::invalid_argument("samples must be a positive multiple of 4");
  // v(t) = Vm (1 - cos(2 pi t/T)), a(t) = 2 pi Vm/T sin(2 pi t/T) with
  // Vm = theta_des / T so the position reaches theta_des at T.
  const double vm = theta_des / t_step;
  const auto integrand = [&](double t) {
    const double w = 2.0 * kPi * t / t_step;
    const double v = vm * (1.0 - std::cos(w));
    const double a = 2.0 * kPi * vm / t_step * std::sin(w);
    return std::abs(i_zz * a * v);
  };
  // Composite Simpson.
  const double h = t_step / samples;
  double sum = integrand(0.0) + integrand(t_step);
  for (int k = 1; k < samples; ++k)
    sum += integrand(k * h) * (k % 2 == 1 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

}  // namespace stepnav
