#include <doctest.h>

#include <cmath>

#include "stepnav/replan_sim.hpp"

using namespace stepnav;

namespace {

Scenario straight_scenario(double goal_x = 4.0) {
  Scenario s;
  s.name = "sim_straight";
  s.size_x = 7.0;
  s.size_y = 4.0;
  s.origin_x = -1.0;
  s.origin_y = -2.0;
  s.goal = GoalSpec{goal_x, 0.0, std::nullopt};
  s.start = Pose2{0.0, 0.0, 0.0};
  return s;
}

PlanResult fake_plan(int steps, Side first_side) {
  PlanResult p;
  p.status = PlanStatus::Success;
  FootState cur;
  cur.pose = Pose2{0, 0, 0};
  cur.side = opposite(first_side);
  p.footsteps.push_back(cur);
  for (int i = 0; i < steps; ++i) {
    FootstepAction a;
    a.dx = 0.3;
    a.dy = cur.side == Side::Right ? 0.22 : -0.22;
    cur = successor(cur, a);
    p.footsteps.push_back(cur);
    p.via_actions.push_back(a);
  }
  return p;
}

}  // namespace

TEST_CASE("sync_check: matching numbers and sides use the plan") {
  const PlanResult p = fake_plan(5, Side::Left);
  CHECK(sync_check(7, 7, p, Side::Left) == StepDecision::UsePlan);
}

TEST_CASE("sync_check: stale stamp falls back to stepping in place") {
  const PlanResult p = fake_plan(5, Side::Left);
  CHECK(sync_check(7, 6, p, Side::Left) == StepDecision::StepInPlace);
}

TEST_CASE("sync_check: failed plans are never executed") {
  PlanResult p = fake_plan(5, Side::Left);
  p.status = PlanStatus::IterationLimit;
  CHECK(sync_check(7, 7, p, Side::Left) == StepDecision::StepInPlace);
}

TEST_CASE("sync_check: wrong swing side falls back") {
  const PlanResult p = fake_plan(5, Side::Left);
  CHECK(sync_check(7, 7, p, Side::Right) == StepDecision::StepInPlace);
}

TEST_CASE("preview_window: long plans give their first three steps") {
  const PlanResult p = fake_plan(10, Side::Left);
  const ActionConfig cfg = ActionConfig::profile("sim");
  const auto w = preview_window(p, p.footsteps[0], cfg);
  for (int i = 0; i < 3; ++i) {
    CHECK(w[i].pose.x == p.footsteps[i + 1].pose.x);
    CHECK(w[i].side == p.footsteps[i + 1].side);
  }
}

TEST_CASE("preview_window: short plans pad with step-in-place") {
  const PlanResult p = fake_plan(1, Side::Left);
  const ActionConfig cfg = ActionConfig::profile("sim");
  const auto w = preview_window(p, p.footsteps[0], cfg);
  CHECK(w[0].pose.x == doctest::Approx(0.3));
  // padding alternates sides while staying put
  CHECK(w[1].side == opposite(w[0].side));
  CHECK(w[2].side == opposite(w[1].side));
  CHECK(distance(w[1].pose, w[0].pose) == doctest::Approx(0.22));
  CHECK(w[2].pose.x == doctest::Approx(w[0].pose.x));
  CHECK(w[2].pose.y == doctest::Approx(w[0].pose.y));
}

TEST_CASE("preview_window: failed plan yields three step-in-place steps") {
  PlanResult p;
  p.status = PlanStatus::DeadEnd;
  FootState stance;
  stance.pose = Pose2{1.0, 0.5, 0.3};
  stance.side = Side::Right;
  const ActionConfig cfg = ActionConfig::profile("sim");
  const auto w = preview_window(p, stance, cfg);
  CHECK(w[0].side == Side::Left);
  CHECK(w[1].side == Side::Right);
  CHECK(w[2].side == Side::Left);
  CHECK(w[2].pose.x == doctest::Approx(w[0].pose.x));
}

TEST_CASE("sim: straight run reaches the goal within the step budget") {
  const Scenario s = straight_scenario();
  ReplanSimulator sim(s);
  const SimResult r = sim.run();
  CHECK(r.reached_goal);
  const double dist = 4.0;  // start body to goal
  const double l_opt = 0.40;
  CHECK(r.steps_executed <=
        static_cast<int>(std::ceil(dist / l_opt)) + 4);
}

TEST_CASE("sim: parity never breaks, stale ticks always step in place") {
  Scenario s = straight_scenario();
  s.sim.tick_iteration_budget = 10;  // force some late deliveries
  ReplanSimulator sim(s);
  const SimResult r = sim.run();
  REQUIRE(!r.log.empty());
  for (std::size_t i = 1; i < r.log.size(); ++i)
    CHECK(r.log[i].executed.side != r.log[i - 1].executed.side);
  for (const auto& t : r.log)
    if (t.stale) CHECK(t.decision == StepDecision::StepInPlace);
}

TEST_CASE("sim: every executed footstep is feasible on the live map") {
  Scenario s = straight_scenario();
  s.boxes.push_back(BoxPrim{2.0, 0.35, 0.5, 0.5, 0.4, ""});
  s.events.push_back(DynamicEvent{5, DynamicEvent::Kind::Insert, "blk",
                                  BoxPrim{2.6, -0.25, 0.5, 0.5, 0.5, "blk"}});
  ReplanSimulator sim(s);
  while (!sim.done()) {
    const FootState before = sim.stance();
    const Pose2 prev_other = sim.other_foot();
    const TickRecord rec = sim.tick();
    const ElevationMap& map = sim.map();  // events applied before execution
    const CellSample c = map.sample(before.pose.x, before.pose.y);
    const double ref = c.known ? c.height : 0.0;
    CHECK(foothold_feasible(map, rec.executed.pose, ref, s.feasibility));
    CHECK(body_feasible(map, before.pose, prev_other, rec.executed.pose,
                        s.feasibility));
  }
}

TEST_CASE("sim: dynamic obstacle diverts the robot within two ticks") {
  Scenario base = straight_scenario(4.5);
  // generous deadline: the post-event detour plan must arrive fresh
  base.planner.max_iterations = 20000;
  base.sim.tick_iteration_budget = 20000;
  Scenario with_event = base;
  // person-sized block dropped 0.8 m ahead of the robot (at x=1.2, step 4)
  with_event.events.push_back(
      DynamicEvent{4, DynamicEvent::Kind::Insert, "person",
                   BoxPrim{2.25, 0.0, 0.5, 0.7, 1.0, "person"}});
  const SimResult a = ReplanSimulator(base).run();
  const SimResult b = ReplanSimulator(with_event).run();
  CHECK(b.reached_goal);
  // identical prefix up to the event, divergence within two ticks of it
  int event_tick = -1;
  for (std::size_t i = 0; i < b.log.size(); ++i)
    if (b.log[i].robot_step_number == 4) event_tick = static_cast<int>(i);
  REQUIRE(event_tick >= 0);
  int first_diff = -1;
  for (std::size_t i = 0; i < std::min(a.log.size(), b.log.size()); ++i) {
    if (a.log[i].executed.pose.x != b.log[i].executed.pose.x ||
        a.log[i].executed.pose.y != b.log[i].executed.pose.y ||
        a.log[i].decision != b.log[i].decision) {
      first_diff = static_cast<int>(i);
      break;
    }
  }
  REQUIRE(first_diff >= 0);
  CHECK(first_diff >= event_tick);
  CHECK(first_diff <= event_tick + 1);
}

TEST_CASE("sim: unreachable goals step in place indefinitely and are flagged") {
  Scenario s = straight_scenario();
  s.sim.max_ticks = 30;
  s.sim.tick_iteration_budget = 1;  // nothing ever arrives on time
  ReplanSimulator sim(s);
  const SimResult r = sim.run();
  CHECK_FALSE(r.reached_goal);
  CHECK(r.consecutive_stale_max > 10);
  for (const auto& t : r.log) CHECK(t.decision == StepDecision::StepInPlace);
  // the robot never moved
  const double dx = r.log.back().executed.pose.x;
  CHECK(std::abs(dx) < 0.2);
}
