#include "stepnav/planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <unordered_map>

namespace stepnav {

const char* plan_status_name(PlanStatus s) {
  switch (s) {
    case PlanStatus::Success: return "success";
    case PlanStatus::IterationLimit: return "iteration_limit";
    case PlanStatus::DeadEnd: return "dead_end";
  }
  return "unknown";
}

namespace {

struct Node {
  FootState state;
  Pose2 prev_foot;   // other-foot pose; starting point of the next swing
  double g = 0.0;
  double h = 0.0;
  int parent = -1;
  FootstepAction via;
  bool has_via = false;
};

struct HeapEntry {
  double f;
  double g;
  std::uint64_t seq;
  int id;
};

struct HeapCompare {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.g != b.g) return a.g > b.g;  // ties: lower g first
    return a.seq > b.seq;              // then insertion order
  }
};

// Duplicate-detection table over (x, y, theta, side) bins, keep-lower-g.
// Bins are compared exactly; the hash is only a bucket index.
class BinTable {
 public:
  BinTable(double xy_bin, double theta_bin)
      : xy_bin_(xy_bin), theta_bin_(theta_bin) {}

  struct Key {
    std::int64_t qx, qy, qt;
    Side side;
    bool operator==(const Key&) const = default;
  };

  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::uint64_t h = 1469598103934665603ull;
      const auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 1099511628211ull;
      };
      mix(static_cast<std::uint64_t>(k.qx));
      mix(static_cast<std::uint64_t>(k.qy));
      mix(static_cast<std::uint64_t>(k.qt));
      mix(k.side == Side::Left ? 1u : 2u);
      return static_cast<std::size_t>(h);
    }
  };

  Key key(const FootState& s) const {
    return Key{std::llround(s.pose.x / xy_bin_),
               std::llround(s.pose.y / xy_bin_),
               std::llround(s.pose.theta / theta_bin_), s.side};
  }

  // Returns true if `id` should be pushed; never displaces a lower-g holder.
  bool admit(const FootState& s, double g, int id) {
    auto [it, inserted] = table_.try_emplace(key(s), Entry{id, g});
    if (inserted) return true;
    if (g < it->second.g) {
      it->second = Entry{id, g};
      return true;
    }
    return false;
  }

  // A popped node is stale if its bin has since been claimed by a cheaper one.
  bool is_current(const FootState& s, int id) const {
    auto it = table_.find(key(s));
    return it != table_.end() && it->second.id == id;
  }

 private:
  struct Entry {
    int id;
    double g;
  };
  double xy_bin_;
  double theta_bin_;
  std::unordered_map<Key, Entry, KeyHash> table_;
};

void reconstruct(const std::vector<Node>& arena, int id, PlanResult& out) {
  std::vector<int> chain;
  for (int i = id; i >= 0; i = arena[i].parent) chain.push_back(i);
  std::reverse(chain.begin(), chain.end());
  for (const int i : chain) {
    const Node& n = arena[i];
    out.footsteps.push_back(n.state);
    out.footstep_costs.push_back(PlanStepCost{n.g, n.h});
    if (n.has_via) out.via_actions.push_back(n.via);
  }
}

}  // namespace

namespace {

// Planner-side cost-to-go. Same shape as the energy-module heuristic but
// with the distance term deflated by the termination radius: the search
// stops anywhere inside it, so estimating to the goal point would
// overestimate near the boundary and cost A* its optimality.
double planner_h(const FootState& state, const GoalSpec& goal,
                 HeuristicMode mode, const EnergyParams& energy, double alpha,
                 const StepCountPolicy& policy, double goal_radius) {
  if (mode == HeuristicMode::Zero) return 0.0;
  const double dist =
      std::max(0.0, distance_to_goal(state.pose, goal) - goal_radius);
  if (mode == HeuristicMode::Distance) return alpha * energy.mg() * dist;
  const double dyaw = goal_heading_error(state, goal, goal_radius);
  const int n = policy.count(dist, dyaw);
  return alpha * energy.mg() * dist + energy.mg() * energy.F * dyaw * dyaw / n;
}

}  // namespace

double penalized_h(const FootState& state, const FootstepAction& via,
                   const std::optional<FootstepAction>& prev_action,
                   const GoalSpec& goal, const ElevationMap& map,
                   const ActionConfig& actions, const EnergyParams& energy,
                   const FeasibilityConfig& feas, const PlannerConfig& cfg,
                   double alpha) {
  StepCountPolicy policy{actions.max_step_displacement(), actions.max_step_yaw,
                         cfg.step_count_fixed_n};
  double h = planner_h(state, goal, cfg.heuristic, energy, alpha, policy,
                       cfg.goal_radius);
  if (!cfg.penalty.enabled) return h;

  const double mgc = energy.mg() * energy.C;
  double p = 0.0;
  const auto d_obs = obstacle_ray(map, state.pose, state.pose.theta,
                                  cfg.penalty.check_dist, feas);
  if (d_obs && *d_obs < cfg.penalty.check_dist)
    p = cfg.penalty.weight_mgc * mgc * (cfg.penalty.check_dist - *d_obs);
  if (via.rotate_in_place) {
    p *= cfg.penalty.rotate_relief;
    if (prev_action && prev_action->rotate_in_place &&
        prev_action->dtheta * via.dtheta < 0.0)
      p += cfg.penalty.reverse_mgc * mgc;
  }
  return h + p;
}

PlanResult plan(const FootState& start_stance, const Pose2& start_other,
                const GoalSpec& goal, const ElevationMap& map,
                const ActionConfig& actions, const EnergyParams& energy,
                const FeasibilityConfig& feas, const PlannerConfig& cfg,
                const std::atomic<bool>* cancel) {
  PlanResult result;
  const double alpha =
      optimal_straight_step(energy, actions.max_step_displacement()).cot;
  StepCountPolicy policy{actions.max_step_displacement(), actions.max_step_yaw,
                         cfg.step_count_fixed_n};

  const auto base_h = [&](const FootState& s) {
    return planner_h(s, goal, cfg.heuristic, energy, alpha, policy,
                     cfg.goal_radius);
  };

  std::vector<Node> arena;
  BinTable bins(cfg.dedup_xy_bin, cfg.dedup_theta_bin);
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapCompare> open;
  std::uint64_t seq = 0;

  Node root;
  root.state = start_stance;
  root.prev_foot = start_other;
  root.g = 0.0;
  root.h = base_h(start_stance);
  arena.push_back(root);
  bins.admit(root.state, 0.0, 0);
  open.push(HeapEntry{root.g + root.h, root.g, seq++, 0});

  while (!open.empty()) {
    if (cancel && cancel->load(std::memory_order_relaxed)) {
      result.status = PlanStatus::IterationLimit;
      return result;
    }
    if (result.iterations >= cfg.max_iterations) {
      result.status = PlanStatus::IterationLimit;
      return result;
    }
    const HeapEntry top = open.top();
    open.pop();
    ++result.iterations;
    const Node node = arena[top.id];  // by value: arena reallocates below
    if (cfg.trace)
      result.trace.push_back(
          TraceRow{result.iterations, node.state, node.g, node.h, top.f});
    if (!bins.is_current(node.state, top.id)) continue;  // superseded

    if (distance_to_goal(node.state.pose, goal) < cfg.goal_radius) {
      result.status = PlanStatus::Success;
      result.total_cost = node.g;
      reconstruct(arena, top.id, result);
      return result;
    }

    const double stance_height = [&] {
      const CellSample s = map.sample(node.state.pose.x, node.state.pose.y);
      return s.known ? s.height : 0.0;
    }();
    const auto step_ok = [&](const FootstepAction&, const FootState& succ) {
      if (!foothold_feasible(map, succ.pose, stance_height, feas)) return false;
      return body_feasible(map, node.state.pose, node.prev_foot, succ.pose,
                           feas);
    };

    std::vector<FootstepAction> acts;
    const bool near_goal =
        distance_to_goal(node.state.pose, goal) < actions.near_goal_radius();
    if (near_goal)
      acts = full_set(actions, node.state);
    else
      acts = adaptive_set(actions, node.state, step_ok, energy);

    for (const auto& a : acts) {
      const FootState succ = successor(node.state, a);
      if (near_goal && !step_ok(a, succ)) continue;  // adaptive already checked
      const StepGeometry geom = step_geometry(a, actions.nominal_width);
      const double g_succ = node.g + step_energy(geom, energy);
      const int id = static_cast<int>(arena.size());
      if (!bins.admit(succ, g_succ, id)) continue;
      std::optional<FootstepAction> prev;
      if (node.has_via) prev = node.via;
      const double h_succ =
          cfg.penalty.enabled
              ? penalized_h(succ, a, prev, goal, map, actions, energy, feas,
                            cfg, alpha)
              : base_h(succ);
      Node child;
      child.state = succ;
      child.prev_foot = node.state.pose;
      child.g = g_succ;
      child.h = h_succ;
      child.parent = top.id;
      child.via = a;
      child.has_via = true;
      arena.push_back(child);
      open.push(HeapEntry{g_succ + h_succ, g_succ, seq++, id});
      ++result.expansions;
    }
  }
  result.status = PlanStatus::DeadEnd;
  return result;
}

}  // namespace stepnav
