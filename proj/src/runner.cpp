#include "stepnav/runner.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "stepnav/render.hpp"

namespace stepnav {

VariantFlags VariantFlags::parse(const std::string& spec) {
  VariantFlags v;
  std::istringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("variant item needs key=value: " + item);
    const std::string key = item.substr(0, eq), val = item.substr(eq + 1);
    if (key == "selection") {
      if (val == "min-cot") v.selection = SelectionMode::MinCot;
      else if (val == "farthest") v.selection = SelectionMode::Farthest;
      else throw std::invalid_argument("selection must be min-cot|farthest");
    } else if (key == "heuristic") {
      if (val == "zero") v.heuristic = HeuristicMode::Zero;
      else if (val == "distance") v.heuristic = HeuristicMode::Distance;
      else if (val == "distance+angle") v.heuristic = HeuristicMode::DistanceAngle;
      else throw std::invalid_argument("heuristic must be zero|distance|distance+angle");
    } else if (key == "penalty") {
      if (val == "on") v.penalty = true;
      else if (val == "off") v.penalty = false;
      else throw std::invalid_argument("penalty must be on|off");
    } else if (key == "max-iter") {
      v.max_iter = std::stoi(val);
    } else if (key == "seed") {
      v.seed = std::stoull(val);
    } else {
      throw std::invalid_argument("unknown variant key: " + key);
    }
  }
  return v;
}

std::string VariantFlags::label() const {
  std::string out;
  const auto add = [&](const std::string& s) {
    if (!out.empty()) out += ",";
    out += s;
  };
  if (selection)
    add(*selection == SelectionMode::MinCot ? "selection=min-cot"
                                            : "selection=farthest");
  if (heuristic) {
    if (*heuristic == HeuristicMode::Zero) add("heuristic=zero");
    else if (*heuristic == HeuristicMode::Distance) add("heuristic=distance");
    else add("heuristic=distance+angle");
  }
  if (penalty) add(*penalty ? "penalty=on" : "penalty=off");
  if (max_iter) add("max-iter=" + std::to_string(*max_iter));
  if (seed) add("seed=" + std::to_string(*seed));
  return out.empty() ? "default" : out;
}

void VariantFlags::apply(Scenario& s) const {
  if (selection) s.actions.selection = *selection;
  if (heuristic) s.planner.heuristic = *heuristic;
  if (penalty) s.planner.penalty.enabled = *penalty;
  if (max_iter) s.planner.max_iterations = *max_iter;
  if (seed) s.seed = *seed;
}

void write_plan_csv(const PlanResult& plan, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "step_index,side,x,y,theta,g,h,f\n";
  char b[256];
  for (std::size_t i = 0; i < plan.footsteps.size(); ++i) {
    const FootState& s = plan.footsteps[i];
    const PlanStepCost c =
        i < plan.footstep_costs.size() ? plan.footstep_costs[i] : PlanStepCost{};
    std::snprintf(b, sizeof b, "%d,%s,%.6f,%.6f,%.6f,%.3f,%.3f,%.3f\n",
                  s.step_index, side_name(s.side), s.pose.x, s.pose.y,
                  s.pose.theta, c.g, c.h, c.g + c.h);
    f << b;
  }
}

void write_plan_text(const PlanResult& plan, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  char b[256];
  std::snprintf(b, sizeof b, "%5s %-6s %9s %9s %9s %12s %12s %12s\n", "step",
                "side", "x", "y", "theta", "g", "h", "f");
  f << b;
  for (std::size_t i = 0; i < plan.footsteps.size(); ++i) {
    const FootState& s = plan.footsteps[i];
    const PlanStepCost c =
        i < plan.footstep_costs.size() ? plan.footstep_costs[i] : PlanStepCost{};
    std::snprintf(b, sizeof b, "%5d %-6s %9.4f %9.4f %9.4f %12.2f %12.2f %12.2f\n",
                  s.step_index, side_name(s.side), s.pose.x, s.pose.y,
                  s.pose.theta, c.g, c.h, c.g + c.h);
    f << b;
  }
}

void write_trace_csv(const PlanResult& plan, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "iteration,side,x,y,theta,g,h,f\n";
  char b[256];
  for (const auto& row : plan.trace) {
    std::snprintf(b, sizeof b, "%d,%s,%.6f,%.6f,%.6f,%.3f,%.3f,%.3f\n",
                  row.iteration, side_name(row.state.side), row.state.pose.x,
                  row.state.pose.y, row.state.pose.theta, row.g, row.h, row.f);
    f << b;
  }
}

namespace {

std::string artifact_path(const std::string& out_dir, const std::string& stem,
                          const std::string& suffix) {
  return (std::filesystem::path(out_dir) / (stem + suffix)).string();
}

}  // namespace

RunReport run_scenario(const Scenario& scenario_in, const RunOptions& options) {
  Scenario scenario = scenario_in;
  options.variant.apply(scenario);
  scenario.planner.trace =
      options.trace && options.mode == RunOptions::Mode::Plan;

  RunReport report;
  report.scenario = scenario.name;
  report.variant = options.variant.label();
  report.mode = options.mode == RunOptions::Mode::Plan ? "plan" : "sim";

  const bool write = !options.out_dir.empty();
  if (write) std::filesystem::create_directories(options.out_dir);
  std::string stem = scenario.name + "_" + report.mode;
  if (report.variant != "default") {
    std::string tag = report.variant;
    for (char& ch : tag)
      if (ch == '=' || ch == ',' || ch == '+') ch = '-';
    stem += "_" + tag;
  }

  const auto t0 = std::chrono::steady_clock::now();
  if (options.mode == RunOptions::Mode::Plan) {
    const ElevationMap map =
        filter_chain(build_map(scenario), scenario.filter_radius);
    const PlanResult plan_result =
        plan(scenario.start_stance_foot(), scenario.start_other_foot(),
             scenario.goal, map, scenario.actions, scenario.energy,
             scenario.feasibility, scenario.planner);
    report.total_cost = plan_result.total_cost;
    report.iterations = plan_result.iterations;
    report.expansions = plan_result.expansions;
    report.steps = plan_result.footsteps.empty()
                       ? 0
                       : static_cast<int>(plan_result.footsteps.size()) - 1;
    report.status = plan_result.status;
    report.reached_goal = plan_result.status == PlanStatus::Success;
    if (write) {
      report.plan_csv = artifact_path(options.out_dir, stem, "_plan.csv");
      write_plan_csv(plan_result, report.plan_csv);
      report.plan_txt = artifact_path(options.out_dir, stem, "_plan.txt");
      write_plan_text(plan_result, report.plan_txt);
      if (options.trace) {
        report.trace_csv = artifact_path(options.out_dir, stem, "_trace.csv");
        write_trace_csv(plan_result, report.trace_csv);
      }
      if (options.svg) {
        RenderOptions ropt;
        ropt.foot_length = scenario.feasibility.foot_length;
        ropt.foot_width = scenario.feasibility.foot_width;
        ropt.goal_radius = scenario.planner.goal_radius;
        ropt.body_ellipses = options.ellipses;
        ropt.body_half_width = scenario.feasibility.body_half_width;
        ropt.sway_margin = scenario.feasibility.sway_margin;
        report.svg = artifact_path(options.out_dir, stem, ".svg");
        write_plan_svg(map, plan_result.footsteps, scenario.goal, ropt,
                       report.svg);
      }
    }
  } else {
    ReplanSimulator sim(scenario);
    const SimResult res = sim.run();
    report.total_cost = res.total_energy;
    report.steps = res.steps_executed;
    report.reached_goal = res.reached_goal;
    report.status =
        res.reached_goal ? PlanStatus::Success : PlanStatus::IterationLimit;
    report.iterations = res.total_plan_iterations;
    if (write) {
      report.tick_csv = artifact_path(options.out_dir, stem, "_ticks.csv");
      write_tick_csv(res, report.tick_csv);
      if (options.svg) {
        std::vector<FootState> steps;
        for (const auto& r : res.log) steps.push_back(r.executed);
        RenderOptions ropt;
        ropt.foot_length = scenario.feasibility.foot_length;
        ropt.foot_width = scenario.feasibility.foot_width;
        ropt.goal_radius = scenario.planner.goal_radius;
        report.svg = artifact_path(options.out_dir, stem, ".svg");
        write_plan_svg(sim.map(), steps, scenario.goal, ropt, report.svg);
      }
    }
  }
  const auto t1 = std::chrono::steady_clock::now();
  report.runtime_s = std::chrono::duration<double>(t1 - t0).count();
  return report;
}

RunReport run_file(const std::string& path, const RunOptions& options) {
  return run_scenario(load_scenario(path), options);
}

int exit_code(const RunReport& report) {
  return report.reached_goal ? 0 : 2;
}

Comparison compare(const std::vector<Scenario>& scenarios,
                   const VariantFlags& variant_a, const VariantFlags& variant_b,
                   const RunOptions& base_options) {
  if (scenarios.empty()) throw std::invalid_argument("compare needs at least one scenario");
  Comparison c;
  c.label_a = variant_a.label();
  c.label_b = variant_b.label();
  for (const auto& s : scenarios) {
    RunOptions oa = base_options;
    oa.variant = variant_a;
    RunOptions ob = base_options;
    ob.variant = variant_b;
    CompareRow row;
    row.scenario = s.name;
    row.a = run_scenario(s, oa);
    row.b = run_scenario(s, ob);
    row.cost_delta_pct = row.a.total_cost != 0.0
                             ? (row.b.total_cost - row.a.total_cost) /
                                   row.a.total_cost * 100.0
                             : 0.0;
    row.iteration_delta_pct =
        row.a.iterations != 0
            ? (row.b.iterations - row.a.iterations) /
                  static_cast<double>(row.a.iterations) * 100.0
            : 0.0;
    c.mean_cost_delta_pct += row.cost_delta_pct;
    c.mean_iteration_delta_pct += row.iteration_delta_pct;
    c.rows.push_back(row);
  }
  c.mean_cost_delta_pct /= static_cast<double>(c.rows.size());
  c.mean_iteration_delta_pct /= static_cast<double>(c.rows.size());
  return c;
}

std::string comparison_text(const Comparison& c) {
  std::ostringstream o;
  char b[256];
  std::snprintf(b, sizeof b, "%-18s %14s %14s %9s %10s %10s %9s\n", "scenario",
                "cost(a)", "cost(b)", "dcost%", "iters(a)", "iters(b)",
                "diters%");
  o << "variant a: " << c.label_a << "\nvariant b: " << c.label_b << "\n" << b;
  for (const auto& r : c.rows) {
    std::snprintf(b, sizeof b, "%-18s %14.1f %14.1f %8.2f%% %10d %10d %8.2f%%\n",
                  r.scenario.c_str(), r.a.total_cost, r.b.total_cost,
                  r.cost_delta_pct, r.a.iterations, r.b.iterations,
                  r.iteration_delta_pct);
    o << b;
  }
  std::snprintf(b, sizeof b, "%-18s %14s %14s %8.2f%% %10s %10s %8.2f%%\n",
                "mean", "", "", c.mean_cost_delta_pct, "", "",
                c.mean_iteration_delta_pct);
  o << b;
  return o.str();
}

void write_comparison_csv(const Comparison& c, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "scenario,cost_a,cost_b,cost_delta_pct,iterations_a,iterations_b,"
       "iteration_delta_pct,status_a,status_b\n";
  char b[256];
  for (const auto& r : c.rows) {
    std::snprintf(b, sizeof b, "%s,%.3f,%.3f,%.4f,%d,%d,%.4f,%s,%s\n",
                  r.scenario.c_str(), r.a.total_cost, r.b.total_cost,
                  r.cost_delta_pct, r.a.iterations, r.b.iterations,
                  r.iteration_delta_pct, plan_status_name(r.a.status),
                  plan_status_name(r.b.status));
    f << b;
  }
  std::snprintf(b, sizeof b, "mean,,,%.4f,,,%.4f,,\n", c.mean_cost_delta_pct,
                c.mean_iteration_delta_pct);
  f << b;
}

}  // namespace stepnav
