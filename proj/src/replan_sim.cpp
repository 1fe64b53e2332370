#include "stepnav/replan_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace stepnav {

StepDecision sync_check(int robot_step_number, int plan_step_number,
                        const PlanResult& plan, Side pending_swing) {
  if (robot_step_number != plan_step_number) return StepDecision::StepInPlace;
  if (plan.status != PlanStatus::Success) return StepDecision::StepInPlace;
  if (plan.footsteps.size() < 2) return StepDecision::StepInPlace;
  if (plan.footsteps[1].side != pending_swing) return StepDecision::StepInPlace;
  return StepDecision::UsePlan;
}

std::array<FootState, 3> preview_window(const PlanResult& plan,
                                        const FootState& stance,
                                        const ActionConfig& actions) {
  std::array<FootState, 3> window;
  FootState cur = stance;
  std::size_t next = 1;  // footsteps[0] is the stance itself
  for (auto& slot : window) {
    if (plan.status == PlanStatus::Success && next < plan.footsteps.size()) {
      slot = plan.footsteps[next++];
    } else {
      const FootstepAction sip =
          step_in_place_action(actions, opposite(cur.side));
      slot = successor(cur, sip);
    }
    cur = slot;
  }
  return window;
}

ReplanSimulator::ReplanSimulator(const Scenario& scenario)
    : scenario_(scenario), active_boxes_(scenario.boxes) {
  scenario_.validate();
  ElevationMap built = build_map(scenario_);
  map_ = std::make_shared<const ElevationMap>(
      filter_chain(built, scenario_.filter_radius));
  stance_ = scenario_.start_stance_foot();
  other_foot_ = scenario_.start_other_foot();
  issue_request();  // the tick() pipeline precondition
}

bool ReplanSimulator::done() const {
  return reached_ || clock_ >= scenario_.sim.max_ticks;
}

void ReplanSimulator::issue_request() {
  InFlight req;
  req.stamp = robot_step_number_ + 1;
  FootState start = stance_;
  req.plan = plan(start, other_foot_, scenario_.goal, *map_, scenario_.actions,
                  scenario_.energy, scenario_.feasibility, scenario_.planner);
  total_plan_iterations_ += req.plan.iterations;
  const int budget = std::max(1, scenario_.sim.tick_iteration_budget);
  const int delay = std::max(
      1, static_cast<int>(std::ceil(static_cast<double>(req.plan.iterations) /
                                    budget)));
  // Requests go out at the end of the previous tick; a search within budget
  // arrives one tick later.
  req.arrival_clock = clock_ - 1 + delay;
  inflight_.push_back(req);
}

void ReplanSimulator::apply_due_events() {
  const int executing_step = robot_step_number_ + 1;
  bool due = false;
  for (const auto& e : scenario_.events)
    if (e.at_step == executing_step) due = true;
  if (!due) return;

  bool touched = false;
  ElevationMap work = *map_;
  for (const auto& e : scenario_.events) {
    if (e.at_step != executing_step) continue;
    BoxPrim dirty = e.box;
    if (e.kind == DynamicEvent::Kind::Insert) {
      active_boxes_.push_back(e.box);
    } else {
      bool found = false;
      for (auto it = active_boxes_.begin(); it != active_boxes_.end(); ++it) {
        if (it->name == e.name) {
          dirty = *it;
          active_boxes_.erase(it);
          found = true;
          break;
        }
      }
      if (!found) continue;
    }
    rebuild_region(work, scenario_, active_boxes_, dirty,
                   2.0 * scenario_.filter_radius);
    touched = true;
  }
  if (touched) map_ = std::make_shared<const ElevationMap>(std::move(work));
}

TickRecord ReplanSimulator::tick() {
  if (done()) throw std::logic_error("tick() after completion");
  TickRecord rec;
  rec.clock = clock_;
  const int executing_step = robot_step_number_ + 1;
  rec.robot_step_number = executing_step;

  apply_due_events();

  // Deliver any plans whose compute window has elapsed.
  for (auto it = inflight_.begin(); it != inflight_.end();) {
    if (it->arrival_clock <= clock_) {
      latest_plan_ = std::move(it->plan);
      latest_stamp_ = it->stamp;
      it = inflight_.erase(it);
    } else {
      ++it;
    }
  }

  const Side pending = opposite(stance_.side);
  rec.plan_status = latest_plan_.status;
  rec.plan_iterations = latest_plan_.iterations;
  rec.decision = sync_check(executing_step, latest_stamp_, latest_plan_, pending);
  rec.stale = latest_stamp_ != executing_step;

  FootState next;
  FootstepAction executed_action{};
  if (rec.decision == StepDecision::UsePlan) {
    next = preview_window(latest_plan_, stance_, scenario_.actions)[0];
    executed_action = latest_plan_.via_actions.empty()
                          ? step_in_place_action(scenario_.actions, pending)
                          : latest_plan_.via_actions[0];
    // Execution-time safety gate: the map may have changed since planning.
    const CellSample stance_cell = map_->sample(stance_.pose.x, stance_.pose.y);
    const double ref = stance_cell.known ? stance_cell.height : 0.0;
    if (!foothold_feasible(*map_, next.pose, ref, scenario_.feasibility) ||
        !body_feasible(*map_, stance_.pose, other_foot_, next.pose,
                       scenario_.feasibility)) {
      rec.decision = StepDecision::StepInPlace;
      rec.exec_revalidated = true;
    }
  }
  if (rec.decision == StepDecision::StepInPlace) {
    const FootstepAction sip = step_in_place_action(scenario_.actions, pending);
    executed_action = sip;
    next = successor(stance_, sip);
  }
  next.step_index = executing_step;
  rec.step_energy = step_energy(
      step_geometry(executed_action, scenario_.actions.nominal_width),
      scenario_.energy);

  other_foot_ = stance_.pose;
  stance_ = next;
  robot_step_number_ = executing_step;
  rec.executed = next;
  rec.distance_to_goal = distance_to_goal(stance_.pose, scenario_.goal);
  if (rec.stale) {
    ++consecutive_stale_;
    consecutive_stale_max_ = std::max(consecutive_stale_max_, consecutive_stale_);
  } else {
    consecutive_stale_ = 0;
  }
  if (rec.distance_to_goal < scenario_.planner.goal_radius) reached_ = true;

  ++clock_;
  if (!reached_) issue_request();
  return rec;
}

SimResult ReplanSimulator::run() {
  SimResult result;
  while (!done()) {
    result.log.push_back(tick());
    result.total_energy += result.log.back().step_energy;
  }
  result.reached_goal = reached_;
  result.steps_executed = robot_step_number_;
  result.consecutive_stale_max = consecutive_stale_max_;
  result.total_plan_iterations = total_plan_iterations_;
  return result;
}

void write_tick_csv(const SimResult& result, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "clock,step_number,decision,stale,revalidated,side,x,y,theta,"
       "plan_status,plan_iterations,distance_to_goal\n";
  char b[256];
  for (const auto& r : result.log) {
    std::snprintf(b, sizeof b, "%d,%d,%s,%d,%d,%s,%.6f,%.6f,%.6f,%s,%d,%.6f\n",
                  r.clock, r.robot_step_number,
                  r.decision == StepDecision::UsePlan ? "use_plan" : "step_in_place",
                  r.stale ? 1 : 0, r.exec_revalidated ? 1 : 0,
                  side_name(r.executed.side), r.executed.pose.x,
                  r.executed.pose.y, r.executed.pose.theta,
                  plan_status_name(r.plan_status), r.plan_iterations,
                  r.distance_to_goal);
    f << b;
  }
}

}  // namespace stepnav
