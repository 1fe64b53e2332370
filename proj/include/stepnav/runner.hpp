#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stepnav/planner.hpp"
#include "stepnav/replan_sim.hpp"
#include "stepnav/scenario.hpp"

namespace stepnav {

// Variant overrides applied on top of a scenario before a run. Parsed from
// comma-separated "key=value" pairs (selection, heuristic, penalty,
// max-iter, seed).
struct VariantFlags {
  std::optional<SelectionMode> selection;
  std::optional<HeuristicMode> heuristic;
  std::optional<bool> penalty;
  std::optional<int> max_iter;
  std::optional<std::uint64_t> seed;

  static VariantFlags parse(const std::string& spec);
  std::string label() const;
  void apply(Scenario& s) const;
};

struct RunOptions {
  enum class Mode { Plan, Sim };
  Mode mode = Mode::Plan;
  VariantFlags variant;
  std::string out_dir;   // empty = no artifacts written
  bool trace = false;    // also dump the per-iteration search trace
  bool svg = true;
  bool ellipses = false;
};

struct RunReport {
  std::string scenario;
  std::string variant;
  std::string mode;
  double total_cost = 0.0;
  int iterations = 0;
  int expansions = 0;
  int steps = 0;
  PlanStatus status = PlanStatus::DeadEnd;
  bool reached_goal = false;
  double runtime_s = 0.0;
  std::string plan_csv, plan_txt, tick_csv, svg, trace_csv;  // artifact paths
};

RunReport run_scenario(const Scenario& scenario, const RunOptions& options);
RunReport run_file(const std::string& path, const RunOptions& options);

// 0 = success, 2 = planner gave up (iteration limit / dead end), 3 = input.
int exit_code(const RunReport& report);

struct CompareRow {
  std::string scenario;
  RunReport a, b;
  double cost_delta_pct = 0.0;       // (b - a) / a * 100
  double iteration_delta_pct = 0.0;  // (b - a) / a * 100
};

struct Comparison {
  std::string label_a, label_b;
  std::vector<CompareRow> rows;
  double mean_cost_delta_pct = 0.0;
  double mean_iteration_delta_pct = 0.0;
};

Comparison compare(const std::vector<Scenario>& scenarios,
                   const VariantFlags& variant_a, const VariantFlags& variant_b,
                   const RunOptions& base_options);

std::string comparison_text(const Comparison& c);
void write_comparison_csv(const Comparison& c, const std::string& path);

// Plan export: one record per footstep (step_index, side, x, y, theta, g, h, f)
// as CSV and as an aligned text table.
void write_plan_csv(const PlanResult& plan, const std::string& path);
void write_plan_text(const PlanResult& plan, const std::string& path);
void write_trace_csv(const PlanResult& plan, const std::string& path);

}  // namespace stepnav
