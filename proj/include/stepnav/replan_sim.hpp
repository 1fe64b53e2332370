#pragma once

#include <array>
#include <memory>
#include <vector>

#include "stepnav/planner.hpp"
#include "stepnav/scenario.hpp"

namespace stepnav {

enum class StepDecision { UsePlan, StepInPlace };

// UsePlan iff the plan is fresh (matching step numbers), succeeded, and its
// first step swings the pending side.
StepDecision sync_check(int robot_step_number, int plan_step_number,
                        const PlanResult& plan, Side pending_swing);

// The three steps handed to the walking controller: the first three plan
// steps, padded with step-in-place to exactly three.
std::array<FootState, 3> preview_window(const PlanResult& plan,
                                        const FootState& stance,
                                        const ActionConfig& actions);

struct TickRecord {
  int clock = 0;
  int robot_step_number = 0;
  StepDecision decision = StepDecision::StepInPlace;
  bool stale = false;             // plan stamp mismatched
  bool exec_revalidated = false;  // planned step rejected at execution time
  FootState executed;
  double step_energy = 0.0;  // J, energy of the executed action
  PlanStatus plan_status = PlanStatus::DeadEnd;
  int plan_iterations = 0;
  double distance_to_goal = 0.0;
};

struct SimResult {
  bool reached_goal = false;
  int steps_executed = 0;
  int consecutive_stale_max = 0;
  double total_energy = 0.0;        // J over all executed steps
  int total_plan_iterations = 0;    // summed over every issued request
  std::vector<TickRecord> log;
};

// Deterministic kinematic stepper around the planner: one tick = one step =
// one planning cycle. The plan requested at tick k-1 runs against the map
// snapshot taken then and is delivered at tick k (later if its search
// exceeded the per-tick iteration budget), stamped with the step number it
// was planned for.
class ReplanSimulator {
 public:
  explicit ReplanSimulator(const Scenario& scenario);

  bool done() const;
  TickRecord tick();
  SimResult run();

  const ElevationMap& map() const { return *map_; }
  const FootState& stance() const { return stance_; }
  const Pose2& other_foot() const { return other_foot_; }
  int robot_step_number() const { return robot_step_number_; }
  int total_plan_iterations() const { return total_plan_iterations_; }

 private:
  struct InFlight {
    PlanResult plan;
    int stamp = -1;          // step number the plan starts at
    int arrival_clock = 0;
  };

  void issue_request();
  void apply_due_events();

  Scenario scenario_;
  std::vector<BoxPrim> active_boxes_;
  std::shared_ptr<const ElevationMap> map_;

  FootState stance_;
  Pose2 other_foot_;
  int robot_step_number_ = 0;
  int clock_ = 0;
  bool reached_ = false;
  int consecutive_stale_ = 0;
  int consecutive_stale_max_ = 0;
  int total_plan_iterations_ = 0;

  std::vector<InFlight> inflight_;
  PlanResult latest_plan_;
  int latest_stamp_ = -1;
};

// Per-tick CSV export (clock, step number, decision, executed pose, plan
// status, iterations).
void write_tick_csv(const SimResult& result, const std::string& path);

}  // namespace stepnav
