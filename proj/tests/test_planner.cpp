#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "stepnav/planner.hpp"
#include "stepnav/scenario.hpp"

using namespace stepnav;

namespace {

const EnergyParams kEnergy;
const FeasibilityConfig kFeas;

ElevationMap flat_map(double sx = 6.0, double sy = 5.0, double ox = -1.0,
                      double oy = -2.5) {
  Scenario s;
  s.size_x = sx;
  s.size_y = sy;
  s.origin_x = ox;
  s.origin_y = oy;
  return filter_chain(build_map(s), 0.1);
}

// Small fixed action set: one candidate per subset, so adaptive, full and
// exhaustive enumeration all see the same actions.
ActionConfig tiny_actions(int n_actions) {
  ActionConfig cfg = ActionConfig::profile("sim");
  std::vector<ActionSubset> subsets;
  const double w = cfg.nominal_width;
  const std::vector<ActionSubset> pool = {
      {"f40", false, false, {{0.40, w, 0.0}}},
      {"f25", false, false, {{0.25, w, 0.0}}},
      {"rot+", false, true, {{0.0, w, deg2rad(15.0)}}},
      {"diag", false, false, {{0.28, 0.30, deg2rad(7.5)}}},
  };
  for (int i = 0; i < n_actions; ++i) subsets.push_back(pool[i]);
  cfg.subsets = subsets;
  return cfg;
}

PlannerConfig exact_planner(HeuristicMode mode) {
  PlannerConfig cfg;
  cfg.heuristic = mode;
  cfg.penalty.enabled = false;
  cfg.max_iterations = 300000;
  // merge only numerically identical states so pruning cannot hide the optimum
  cfg.dedup_xy_bin = 1e-7;
  cfg.dedup_theta_bin = 1e-7;
  return cfg;
}

FootState start_stance() {
  FootState s;
  s.pose = Pose2{0.0, -0.11, 0.0};
  s.side = Side::Right;
  return s;
}

Pose2 start_other() { return Pose2{0.0, 0.11, 0.0}; }

}  // namespace

TEST_CASE("plan: start inside the goal tolerance terminates immediately") {
  const ElevationMap map = flat_map();
  const GoalSpec goal{0.05, -0.11, std::nullopt};
  PlannerConfig cfg;
  const PlanResult r = plan(start_stance(), start_other(), goal, map,
                            ActionConfig::profile("sim"), kEnergy, kFeas, cfg);
  CHECK(r.status == PlanStatus::Success);
  CHECK(r.iterations == 1);
  CHECK(r.footsteps.size() == 1);
  CHECK(r.total_cost == 0.0);
}

TEST_CASE("plan: walled-in start is a dead end") {
  // Walls hugging the start feet: every candidate foothold or body ellipse
  // touches a 0.5 m wall, so the root has no successors at all.
  Scenario s;
  s.size_x = s.size_y = 3.4;
  s.origin_x = s.origin_y = -1.7;
  s.boxes = {{0.0, 0.925, 3.4, 1.55, 0.5, ""},
             {0.0, -0.925, 3.4, 1.55, 0.5, ""},
             {0.925, 0.0, 1.55, 3.4, 0.5, ""},
             {-0.925, 0.0, 1.55, 3.4, 0.5, ""}};
  const ElevationMap map = filter_chain(build_map(s), 0.1);
  const GoalSpec goal{1.0, 0.0, std::nullopt};
  PlannerConfig cfg;
  cfg.penalty.enabled = false;
  const PlanResult r = plan(start_stance(), start_other(), goal, map,
                            ActionConfig::profile("sim"), kEnergy, kFeas, cfg);
  CHECK(r.status == PlanStatus::DeadEnd);
  CHECK(r.iterations == 1);
}

TEST_CASE("plan: iteration cap reports IterationLimit") {
  const ElevationMap map = flat_map();
  const GoalSpec goal{4.0, 0.0, std::nullopt};
  PlannerConfig cfg;
  cfg.max_iterations = 3;
  const PlanResult r = plan(start_stance(), start_other(), goal, map,
                            ActionConfig::profile("sim"), kEnergy, kFeas, cfg);
  CHECK(r.status == PlanStatus::IterationLimit);
  CHECK(r.iterations == 3);
}

TEST_CASE("plan: reconstruct bookkeeping holds on a straight task") {
  const ElevationMap map = flat_map();
  const GoalSpec goal{2.0, 0.0, std::nullopt};
  PlannerConfig cfg;
  cfg.penalty.enabled = false;
  const PlanResult r = plan(start_stance(), start_other(), goal, map,
                            ActionConfig::profile("sim"), kEnergy, kFeas, cfg);
  REQUIRE(r.status == PlanStatus::Success);
  REQUIRE(r.footsteps.size() >= 2);
  // sides alternate and step indices count up
  for (std::size_t i = 1; i < r.footsteps.size(); ++i) {
    CHECK(r.footsteps[i].side != r.footsteps[i - 1].side);
    CHECK(r.footsteps[i].step_index == r.footsteps[i - 1].step_index + 1);
  }
  // g increases by at least mg*C per step and recomputes from the actions
  const ActionConfig actions = ActionConfig::profile("sim");
  double g = 0.0;
  REQUIRE(r.via_actions.size() == r.footsteps.size() - 1);
  for (std::size_t i = 0; i < r.via_actions.size(); ++i) {
    const double step =
        step_energy(step_geometry(r.via_actions[i], actions.nominal_width), kEnergy);
    CHECK(step >= kEnergy.mg() * kEnergy.C - 1e-9);
    g += step;
    CHECK(r.footstep_costs[i + 1].g == doctest::Approx(g).epsilon(1e-12));
  }
  CHECK(r.total_cost == doctest::Approx(g).epsilon(1e-12));
  // terminal state is inside the tolerance
  CHECK(distance_to_goal(r.footsteps.back().pose, goal) < cfg.goal_radius);
  // every transition of a successful plan is feasible on the map
  Pose2 prev_other = start_other();
  for (std::size_t i = 1; i < r.footsteps.size(); ++i) {
    const Pose2& stance = r.footsteps[i - 1].pose;
    const CellSample cell = map.sample(stance.x, stance.y);
    CHECK(foothold_feasible(map, r.footsteps[i].pose,
                            cell.known ? cell.height : 0.0, kFeas));
    CHECK(body_feasible(map, stance, prev_other, r.footsteps[i].pose, kFeas));
    prev_other = stance;
  }
}

TEST_CASE("plan: deterministic across repeated runs") {
  const ElevationMap map = flat_map();
  const GoalSpec goal{3.0, 1.0, deg2rad(30.0)};
  PlannerConfig cfg;
  const PlanResult a = plan(start_stance(), start_other(), goal, map,
                            ActionConfig::profile("sim"), kEnergy, kFeas, cfg);
  const PlanResult b = plan(start_stance(), start_other(), goal, map,
                            ActionConfig::profile("sim"), kEnergy, kFeas, cfg);
  CHECK(a.status == b.status);
  CHECK(a.iterations == b.iterations);
  CHECK(a.expansions == b.expansions);
  CHECK(a.total_cost == b.total_cost);
  REQUIRE(a.footsteps.size() == b.footsteps.size());
  for (std::size_t i = 0; i < a.footsteps.size(); ++i) {
    CHECK(a.footsteps[i].pose.x == b.footsteps[i].pose.x);
    CHECK(a.footsteps[i].pose.y == b.footsteps[i].pose.y);
    CHECK(a.footsteps[i].pose.theta == b.footsteps[i].pose.theta);
  }
}

TEST_CASE("plan: uniform-cost equals exhaustive enumeration on small instances") {
  const ElevationMap map = flat_map(4.0, 3.0, -0.5, -1.5);
  const ActionConfig actions = tiny_actions(3);
  std::mt19937 rng(20240811);
  std::uniform_real_distribution<double> ud(0.6, 1.6), uy(-0.5, 0.5);
  int solved = 0;
  for (int i = 0; i < 12; ++i) {
    const GoalSpec goal{ud(rng), uy(rng), std::nullopt};
    PlannerConfig cfg = exact_planner(HeuristicMode::Zero);
    const auto oracle = oracles::exhaustive_min_cost(
        start_stance(), start_other(), goal, cfg.goal_radius, map, actions,
        kEnergy, kFeas, 6);
    const PlanResult r = plan(start_stance(), start_other(), goal, map, actions,
                              kEnergy, kFeas, cfg);
    if (!oracle.reachable) {
      CHECK(r.status != PlanStatus::Success);
      continue;
    }
    ++solved;
    REQUIRE(r.status == PlanStatus::Success);
    CHECK(r.total_cost == oracle.cost);  // identical summation order: exact
  }
  CHECK(solved >= 6);
}

TEST_CASE("plan: distance heuristic matches uniform cost exactly (admissible)") {
  const ElevationMap map = flat_map(4.5, 3.5, -0.5, -1.75);
  const ActionConfig actions = tiny_actions(4);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ud(0.5, 1.5), uy(-0.6, 0.6);
  for (int i = 0; i < 8; ++i) {
    const GoalSpec goal{ud(rng), uy(rng), std::nullopt};
    const PlanResult ucs =
        plan(start_stance(), start_other(), goal, map, actions, kEnergy, kFeas,
             exact_planner(HeuristicMode::Zero));
    const PlanResult ast =
        plan(start_stance(), start_other(), goal, map, actions, kEnergy, kFeas,
             exact_planner(HeuristicMode::Distance));
    CHECK(ucs.status == ast.status);
    if (ucs.status == PlanStatus::Success) {
      CHECK(ast.total_cost == doctest::Approx(ucs.total_cost).epsilon(1e-12));
      CHECK(ast.iterations <= ucs.iterations);
    }
  }
}

TEST_CASE("plan: long straight corridor, min-COT cost <= farthest cost") {
  // obstacle-free >= 20 step task
  const ElevationMap map = flat_map(10.5, 4.0, -1.0, -2.0);
  const GoalSpec goal{8.6, 0.0, std::nullopt};
  PlannerConfig cfg;
  cfg.max_iterations = 20000;
  ActionConfig mincot = ActionConfig::profile("sim");
  ActionConfig farthest = mincot;
  farthest.selection = SelectionMode::Farthest;
  const PlanResult a = plan(start_stance(), start_other(), goal, map, mincot,
                            kEnergy, kFeas, cfg);
  const PlanResult b = plan(start_stance(), start_other(), goal, map, farthest,
                            kEnergy, kFeas, cfg);
  REQUIRE(a.status == PlanStatus::Success);
  REQUIRE(b.status == PlanStatus::Success);
  CHECK(static_cast<int>(a.footsteps.size()) - 1 >= 20);
  CHECK(a.total_cost <= b.total_cost + 1e-9);
}

TEST_CASE("plan: wall between start and goal needs the penalty to finish") {
  const Scenario sc =
      load_scenario(std::string(STEPNAV_SCENARIO_DIR) + "/wall.scn");
  const ElevationMap map = filter_chain(build_map(sc), sc.filter_radius);
  PlannerConfig off = sc.planner;
  off.penalty.enabled = false;
  const PlanResult r_off =
      plan(sc.start_stance_foot(), sc.start_other_foot(), sc.goal, map,
           sc.actions, sc.energy, sc.feasibility, off);
  CHECK(r_off.status == PlanStatus::IterationLimit);
  CHECK(r_off.iterations == 2000);
  const PlanResult r_on =
      plan(sc.start_stance_foot(), sc.start_other_foot(), sc.goal, map,
           sc.actions, sc.energy, sc.feasibility, sc.planner);
  CHECK(r_on.status == PlanStatus::Success);
  CHECK(r_on.iterations < 2000);
}

TEST_CASE("distance heuristic is admissible against exhaustive optima") {
  const ElevationMap map = flat_map(4.5, 3.5, -0.5, -1.75);
  const ActionConfig actions = tiny_actions(3);
  const double alpha =
      optimal_straight_step(kEnergy, actions.max_step_displacement()).cot;
  PlannerConfig cfg = exact_planner(HeuristicMode::Distance);
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> ud(0.5, 1.7), uy(-0.5, 0.5);
  int checked = 0;
  for (int i = 0; i < 15 && checked < 8; ++i) {
    const GoalSpec goal{ud(rng), uy(rng), std::nullopt};
    const auto oracle = oracles::exhaustive_min_cost(
        start_stance(), start_other(), goal, cfg.goal_radius, map, actions,
        kEnergy, kFeas, 6);
    if (!oracle.reachable || oracle.cost == 0.0) continue;
    ++checked;
    const double d = distance_to_goal(start_stance().pose, goal);
    const double h = alpha * kEnergy.mg() * std::max(0.0, d - cfg.goal_radius);
    CHECK(h <= oracle.cost + 1e-9);
  }
  CHECK(checked >= 5);
}

TEST_CASE("penalized_h: clear ray leaves the heuristic untouched") {
  const ElevationMap map = flat_map();
  const GoalSpec goal{4.0, 0.0, std::nullopt};
  const ActionConfig actions = ActionConfig::profile("sim");
  PlannerConfig cfg;
  const double alpha =
      optimal_straight_step(kEnergy, actions.max_step_displacement()).cot;
  FootState s;
  s.pose = Pose2{0.0, 0.0, 0.0};
  s.side = Side::Left;
  FootstepAction fwd;
  fwd.dx = 0.4;
  fwd.dy = -0.22;
  PlannerConfig no_penalty = cfg;
  no_penalty.penalty.enabled = false;
  const double h0 = penalized_h(s, fwd, std::nullopt, goal, map, actions,
                                kEnergy, kFeas, no_penalty, alpha);
  const double hp = penalized_h(s, fwd, std::nullopt, goal, map, actions,
                                kEnergy, kFeas, cfg, alpha);
  CHECK(hp == h0);
}

TEST_CASE("penalized_h: obstacle exactly at check_dist adds nothing") {
  Scenario sc;
  sc.size_x = 6.0;
  sc.size_y = 4.0;
  sc.origin_x = -1.0;
  sc.origin_y = -2.0;
  sc.boxes = {{0.9, 0.0, 1.0, 2.0, 0.6, ""}};  // near face at x = 0.4
  const ElevationMap map = filter_chain(build_map(sc), 0.1);
  const GoalSpec goal{4.0, 0.0, std::nullopt};
  const ActionConfig actions = ActionConfig::profile("sim");
  PlannerConfig cfg;
  cfg.penalty.check_dist = 0.5;
  const double alpha =
      optimal_straight_step(kEnergy, actions.max_step_displacement()).cot;
  FootState s;
  s.pose = Pose2{0.0, 0.0, 0.0};
  s.side = Side::Left;
  FootstepAction fwd;
  fwd.dx = 0.4;
  fwd.dy = -0.22;
  const auto d = obstacle_ray(map, s.pose, 0.0, cfg.penalty.check_dist, kFeas);
  REQUIRE(d.has_value());
  CHECK(*d == doctest::Approx(0.4).epsilon(1e-12));
  PlannerConfig no_penalty = cfg;
  no_penalty.penalty.enabled = false;
  const double h0 = penalized_h(s, fwd, std::nullopt, goal, map, actions,
                                kEnergy, kFeas, no_penalty, alpha);
  // strictly inside the check distance: penalty active
  const double hp = penalized_h(s, fwd, std::nullopt, goal, map, actions,
                                kEnergy, kFeas, cfg, alpha);
  CHECK(hp > h0);
  CHECK(hp - h0 == doctest::Approx(cfg.penalty.weight_mgc * kEnergy.mg() *
                                   kEnergy.C * (0.5 - *d))
                       .epsilon(1e-9));
  // obstacle exactly at the trigger boundary: no charge
  PlannerConfig tight = cfg;
  tight.penalty.check_dist = *d;
  const double hb = penalized_h(s, fwd, std::nullopt, goal, map, actions,
                                kEnergy, kFeas, tight, alpha);
  CHECK(hb == h0);
}

TEST_CASE("penalized_h: reversing the previous rotation is the worst option") {
  Scenario sc;
  sc.size_x = 4.0;
  sc.size_y = 4.0;
  sc.origin_x = -2.0;
  sc.origin_y = -2.0;
  sc.boxes = {{0.4, 0.0, 0.4, 2.0, 0.6, ""}};  // obstacle right ahead
  const ElevationMap map = filter_chain(build_map(sc), 0.1);
  const GoalSpec goal{1.8, 0.0, std::nullopt};
  const ActionConfig actions = ActionConfig::profile("sim");
  PlannerConfig cfg;
  const double alpha =
      optimal_straight_step(kEnergy, actions.max_step_displacement()).cot;

  FootState s;
  s.pose = Pose2{0.0, 0.0, 0.0};
  s.side = Side::Left;
  FootstepAction fwd;
  fwd.dx = 0.2;
  fwd.dy = -0.22;
  FootstepAction rot_left;
  rot_left.dy = -0.22;
  rot_left.dtheta = deg2rad(15.0);
  rot_left.rotate_in_place = true;
  FootstepAction rot_right = rot_left;
  rot_right.dtheta = -deg2rad(15.0);

  const double h_base = heuristic(
      s, goal, kEnergy, alpha,
      StepCountPolicy{actions.max_step_displacement(), actions.max_step_yaw, 0},
      cfg.goal_radius);
  const double h_fwd = penalized_h(s, fwd, std::nullopt, goal, map, actions,
                                   kEnergy, kFeas, cfg, alpha);
  const double h_rot = penalized_h(s, rot_left, std::nullopt, goal, map,
                                   actions, kEnergy, kFeas, cfg, alpha);
  const double h_rev = penalized_h(s, rot_left, rot_right, goal, map, actions,
                                   kEnergy, kFeas, cfg, alpha);
  const double h_same = penalized_h(s, rot_left, rot_left, goal, map, actions,
                                    kEnergy, kFeas, cfg, alpha);
  CHECK(h_fwd > h_base);          // penalty active
  CHECK(h_rot < h_fwd);           // rotating in place is relieved
  CHECK(h_same == h_rot);         // same-direction rotation: no extra charge
  CHECK(h_rev > h_fwd);           // reversal dominates the plain penalty
}

TEST_CASE("dedup: a cheaper arrival replaces, an equal or dearer one is pruned") {
  const ElevationMap map = flat_map();
  // Drive the planner over a loop that revisits the start bin at higher g:
  // rotating +15 then -15 returns to the same pose. With coarse bins this
  // must not displace the cheaper original.
  const GoalSpec goal{2.0, 0.0, std::nullopt};
  PlannerConfig cfg;
  cfg.penalty.enabled = false;
  const PlanResult r = plan(start_stance(), start_other(), goal, map,
                            ActionConfig::profile("sim"), kEnergy, kFeas, cfg);
  CHECK(r.status == PlanStatus::Success);
  // optimality on the flat straight line: no plan can beat ceil(d/l_max)
  // full-length forward steps by construction of the cost model
  const int min_steps =
      static_cast<int>(std::ceil((2.0 - cfg.goal_radius) / 0.4172));
  CHECK(static_cast<int>(r.footsteps.size()) - 1 >=
        min_steps);
}

TEST_CASE("plan: cancellation flag stops the search") {
  const ElevationMap map = flat_map();
  const GoalSpec goal{4.5, 0.0, std::nullopt};
  PlannerConfig cfg;
  std::atomic<bool> cancel{true};
  const PlanResult r = plan(start_stance(), start_other(), goal, map,
                            ActionConfig::profile("sim"), kEnergy, kFeas, cfg,
                            &cancel);
  CHECK(r.status == PlanStatus::IterationLimit);
  CHECK(r.iterations == 0);
}

TEST_CASE("plan: trace records one row per pop when enabled") {
  const ElevationMap map = flat_map();
  const GoalSpec goal{1.5, 0.0, std::nullopt};
  PlannerConfig cfg;
  cfg.trace = true;
  const PlanResult r = plan(start_stance(), start_other(), goal, map,
                            ActionConfig::profile("sim"), kEnergy, kFeas, cfg);
  CHECK(static_cast<int>(r.trace.size()) == r.iterations);
  CHECK_FALSE(r.trace.empty());
}
