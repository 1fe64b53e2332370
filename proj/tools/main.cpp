#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stepnav/map_io.hpp"
#include "stepnav/runner.hpp"

namespace {

struct CommonFlags {
  std::string selection, heuristic, penalty;
  int max_iter = 0;
  long long seed = -1;
  std::string out_dir = "out";
  bool trace = false;
  bool ellipses = false;
  bool no_svg = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--selection", f.selection, "min-cot|farthest")
      ->check(CLI::IsMember({"min-cot", "farthest"}));
  cmd->add_option("--heuristic", f.heuristic, "zero|distance|distance+angle")
      ->check(CLI::IsMember({"zero", "distance", "distance+angle"}));
  cmd->add_option("--penalty", f.penalty, "on|off")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--max-iter", f.max_iter, "planner iteration cap");
  cmd->add_option("--seed", f.seed, "terrain seed override");
  cmd->add_option("--out-dir", f.out_dir, "artifact directory");
  cmd->add_flag("--trace", f.trace, "dump the per-iteration search trace");
  cmd->add_flag("--ellipses", f.ellipses, "draw body ellipses in the SVG");
  cmd->add_flag("--no-svg", f.no_svg, "skip SVG rendering");
}

stepnav::VariantFlags to_variant(const CommonFlags& f) {
  std::string spec;
  const auto add = [&spec](const std::string& s) {
    if (!spec.empty()) spec += ",";
    spec += s;
  };
  if (!f.selection.empty()) add("selection=" + f.selection);
  if (!f.heuristic.empty()) add("heuristic=" + f.heuristic);
  if (!f.penalty.empty()) add("penalty=" + f.penalty);
  if (f.max_iter > 0) add("max-iter=" + std::to_string(f.max_iter));
  if (f.seed >= 0) add("seed=" + std::to_string(f.seed));
  return stepnav::VariantFlags::parse(spec);
}

void print_report(const stepnav::RunReport& r) {
  std::printf("scenario   %s\n", r.scenario.c_str());
  std::printf("variant    %s\n", r.variant.c_str());
  std::printf("mode       %s\n", r.mode.c_str());
  std::printf("status     %s\n", stepnav::plan_status_name(r.status));
  std::printf("cost       %.1f J\n", r.total_cost);
  std::printf("steps      %d\n", r.steps);
  std::printf("iterations %d\n", r.iterations);
  std::printf("expansions %d\n", r.expansions);
  std::printf("runtime    %.3f s\n", r.runtime_s);
  if (!r.plan_csv.empty()) std::printf("plan csv   %s\n", r.plan_csv.c_str());
  if (!r.tick_csv.empty()) std::printf("tick csv   %s\n", r.tick_csv.c_str());
  if (!r.trace_csv.empty()) std::printf("trace csv  %s\n", r.trace_csv.c_str());
  if (!r.svg.empty()) std::printf("svg        %s\n", r.svg.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stepnav - footstep planning scenario runner"};
  app.require_subcommand(1);

  // run
  std::string run_scenario_path, run_mode = "plan";
  CommonFlags run_flags;
  CLI::App* run_cmd = app.add_subcommand("run", "plan or simulate one scenario");
  run_cmd->add_option("scenario", run_scenario_path, "scenario file")->required();
  run_cmd->add_option("--mode", run_mode, "plan|sim")
      ->check(CLI::IsMember({"plan", "sim"}));
  add_common(run_cmd, run_flags);

  // compare
  std::vector<std::string> cmp_paths;
  std::string variant_a_spec, variant_b_spec;
  CommonFlags cmp_flags;
  CLI::App* cmp_cmd =
      app.add_subcommand("compare", "run two variants over a scenario set");
  cmp_cmd->add_option("scenarios", cmp_paths, "scenario files")->required();
  cmp_cmd->add_option("--variant-a", variant_a_spec, "e.g. selection=min-cot")
      ->required();
  cmp_cmd->add_option("--variant-b", variant_b_spec, "e.g. selection=farthest")
      ->required();
  add_common(cmp_cmd, cmp_flags);

  // export-map
  std::string exp_scenario_path, exp_dir = "out";
  CLI::App* exp_cmd =
      app.add_subcommand("export-map", "write the filtered map layers");
  exp_cmd->add_option("scenario", exp_scenario_path, "scenario file")->required();
  exp_cmd->add_option("--out-dir", exp_dir, "artifact directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      stepnav::RunOptions opt;
      opt.mode = run_mode == "sim" ? stepnav::RunOptions::Mode::Sim
                                   : stepnav::RunOptions::Mode::Plan;
      opt.variant = to_variant(run_flags);
      opt.out_dir = run_flags.out_dir;
      opt.trace = run_flags.trace;
      opt.svg = !run_flags.no_svg;
      opt.ellipses = run_flags.ellipses;
      const stepnav::RunReport report =
          stepnav::run_file(run_scenario_path, opt);
      print_report(report);
      return stepnav::exit_code(report);
    }
    if (cmp_cmd->parsed()) {
      std::vector<stepnav::Scenario> scenarios;
      for (const auto& p : cmp_paths)
        scenarios.push_back(stepnav::load_scenario(p));
      stepnav::RunOptions opt;
      opt.out_dir = cmp_flags.out_dir;
      opt.svg = !cmp_flags.no_svg;
      const auto comparison = stepnav::compare(
          scenarios, stepnav::VariantFlags::parse(variant_a_spec),
          stepnav::VariantFlags::parse(variant_b_spec), opt);
      std::cout << stepnav::comparison_text(comparison);
      if (!cmp_flags.out_dir.empty()) {
        const std::string csv = cmp_flags.out_dir + "/comparison.csv";
        stepnav::write_comparison_csv(comparison, csv);
        std::cout << "csv: " << csv << "\n";
      }
      return 0;
    }
    if (exp_cmd->parsed()) {
      const stepnav::Scenario sc = stepnav::load_scenario(exp_scenario_path);
      const stepnav::ElevationMap map =
          stepnav::filter_chain(stepnav::build_map(sc), sc.filter_radius);
      std::filesystem::create_directories(exp_dir);
      for (const std::string layer :
           {"height", "smoothed_height", "normal_z", "slope", "roughness",
            "traversability"}) {
        stepnav::write_layer_csv(map, layer, exp_dir + "/" + sc.name + "_" + layer + ".csv");
        stepnav::write_layer_pgm(map, layer, exp_dir + "/" + sc.name + "_" + layer + ".pgm");
      }
      std::cout << "layers written to " << exp_dir << "\n";
      return 0;
    }
  } catch (const stepnav::ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
