#pragma once

#include <cmath>
#include <optional>

namespace stepnav {

inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a <= 0.0) a += 2.0 * kPi;
  return a - kPi;
}

struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // rad, (-pi, pi]
};

// Composes a body-frame displacement (dx, dy, dtheta) onto a pose.
inline Pose2 advance(const Pose2& p, double dx, double dy, double dtheta) {
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  return Pose2{p.x + c * dx - s * dy, p.y + s * dx + c * dy,
               wrap_angle(p.theta + dtheta)};
}

inline double distance(const Pose2& a, const Pose2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

enum class Side { Left, Right };

inline Side opposite(Side s) { return s == Side::Left ? Side::Right : Side::Left; }
inline const char* side_name(Side s) { return s == Side::Left ? "left" : "right"; }

// Stance-foot state: the planner's search-node payload.
struct FootState {
  Pose2 pose;
  Side side = Side::Right;
  int step_index = 0;
};

struct GoalSpec {
  double x = 0.0;
  double y = 0.0;
  std::optional<double> heading;  // rad; empty = any arrival heading
};

inline double distance_to_goal(const Pose2& p, const GoalSpec& g) {
  return std::hypot(g.x - p.x, g.y - p.y);
}

}  // namespace stepnav
