#include "stepnav/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace stepnav {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Order-independent per-cell noise in [0, 1): partial map rebuilds reproduce
// the full build bit for bit.
double cell_noise(std::uint64_t seed, std::uint64_t patch, int ix, int iy) {
  std::uint64_t h = splitmix64(seed ^ 0x8BADF00Dull);
  h = splitmix64(h ^ (patch + 1));
  h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(ix)));
  h = splitmix64(h ^ (static_cast<std::uint64_t>(static_cast<std::uint32_t>(iy)) << 32));
  return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);
}

struct Line {
  std::string path;
  int number = 0;
  std::vector<std::string> tokens;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ScenarioError(path + ":" + std::to_string(number) + ": " + msg);
  }
  const std::string& tok(std::size_t i) const {
    if (i >= tokens.size()) fail("missing field " + std::to_string(i + 1));
    return tokens[i];
  }
  double num(std::size_t i) const {
    const std::string& t = tok(i);
    std::size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(t, &pos);
    } catch (const std::exception&) {
      fail("expected a number, got '" + t + "'");
    }
    if (pos != t.size()) fail("expected a number, got '" + t + "'");
    return v;
  }
  long integer(std::size_t i) const {
    const double v = num(i);
    if (v != std::floor(v)) fail("expected an integer, got '" + tok(i) + "'");
    return static_cast<long>(v);
  }
  void unit(std::size_t i, const std::string& expected) const {
    if (tok(i) != expected)
      fail("expected unit '" + expected + "', got '" + tok(i) + "'");
  }
  double angle(std::size_t i) const {  // value + deg|rad unit
    const double v = num(i);
    const std::string& u = tok(i + 1);
    if (u == "deg") return deg2rad(v);
    if (u == "rad") return v;
    fail("expected angle unit deg|rad, got '" + u + "'");
  }
};

BoxPrim parse_box(const Line& ln, std::size_t at, const std::string& name) {
  BoxPrim b;
  b.cx = ln.num(at);
  b.cy = ln.num(at + 1);
  b.sx = ln.num(at + 2);
  b.sy = ln.num(at + 3);
  b.height = ln.num(at + 4);
  ln.unit(at + 5, "m");
  b.name = name;
  if (b.sx <= 0 || b.sy <= 0) ln.fail("box extents must be positive");
  return b;
}

}  // namespace

FootState Scenario::start_stance_foot() const {
  const double half = 0.5 * actions.nominal_width;
  const double off = start_stance == Side::Left ? half : -half;
  FootState f;
  f.pose = advance(start, 0.0, off, 0.0);
  f.side = start_stance;
  f.step_index = 0;
  return f;
}

Pose2 Scenario::start_other_foot() const {
  const double half = 0.5 * actions.nominal_width;
  const double off = start_stance == Side::Left ? -half : half;
  return advance(start, 0.0, off, 0.0);
}

void Scenario::validate() const {
  if (resolution <= 0) throw ScenarioError("map resolution must be positive");
  if (size_x <= 0 || size_y <= 0) throw ScenarioError("map size must be positive");
  if (energy.A <= 0 || energy.C <= 0 || energy.D <= 0 || energy.F <= 0)
    throw ScenarioError("energy constants A, C, D, F must be positive");
  if (energy.mass <= 0 || energy.gravity <= 0 || energy.step_time <= 0)
    throw ScenarioError("mass, gravity and step time must be positive");
  if (feasibility.foot_length <= 0 || feasibility.foot_width <= 0 ||
      feasibility.body_half_width <= 0 || feasibility.foothold_height_max <= 0 ||
      feasibility.body_obstacle_height <= 0)
    throw ScenarioError("feasibility lengths must be positive");
  if (feasibility.traversability_min < 0 || feasibility.traversability_min > 1)
    throw ScenarioError("traversability threshold must lie in [0, 1]");
  if (planner.goal_radius <= 0) throw ScenarioError("goal radius must be positive");
  if (planner.max_iterations <= 0)
    throw ScenarioError("iteration limit must be positive");
  for (const auto& sub : actions.subsets)
    for (const auto& c : sub.candidates)
      if (!actions.candidate_within_limits(c))
        throw ScenarioError("action candidate in subset '" + sub.id +
                            "' violates the kinematic limits");

  const double x0 = origin_x, y0 = origin_y;
  const double x1 = origin_x + size_x, y1 = origin_y + size_y;
  const auto check_box = [&](const BoxPrim& b, const std::string& what) {
    if (b.cx - b.sx / 2 < x0 - 1e-9 || b.cx + b.sx / 2 > x1 + 1e-9 ||
        b.cy - b.sy / 2 < y0 - 1e-9 || b.cy + b.sy / 2 > y1 + 1e-9) {
      std::ostringstream os;
      os << what << " at (" << b.cx << ", " << b.cy << ") size (" << b.sx
         << " x " << b.sy << ") lies outside the map bounds";
      throw ScenarioError(os.str());
    }
  };
  for (std::size_t i = 0; i < boxes.size(); ++i)
    check_box(boxes[i], "box " + std::to_string(i + 1));
  for (std::size_t i = 0; i < ramps.size(); ++i) {
    const auto& r = ramps[i];
    BoxPrim b{r.cx, r.cy, r.sx, r.sy, r.height, ""};
    check_box(b, "ramp " + std::to_string(i + 1));
  }
  for (std::size_t i = 0; i < noise.size(); ++i) {
    const auto& n = noise[i];
    BoxPrim b{n.cx, n.cy, n.sx, n.sy, n.amplitude, ""};
    check_box(b, "noise patch " + std::to_string(i + 1));
  }
  for (const auto& e : events)
    if (e.kind == DynamicEvent::Kind::Insert)
      check_box(e.box, "event '" + e.name + "' box");
}

Scenario parse_scenario(const std::string& text, const std::string& origin_name) {
  Scenario s;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  bool custom_subsets = false;  // first custom subset replaces the profile's
  while (std::getline(in, raw)) {
    ++line_no;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    Line ln{origin_name, line_no, {}};
    for (std::string t; ls >> t;) ln.tokens.push_back(t);
    if (ln.tokens.empty()) continue;
    const std::string& key = ln.tok(0);

    if (key == "name") {
      s.name = ln.tok(1);
    } else if (key == "map") {
      const std::string& sub = ln.tok(1);
      if (sub == "size") {
        s.size_x = ln.num(2);
        s.size_y = ln.num(3);
        ln.unit(4, "m");
      } else if (sub == "resolution") {
        s.resolution = ln.num(2);
        ln.unit(3, "m");
      } else if (sub == "origin") {
        s.origin_x = ln.num(2);
        s.origin_y = ln.num(3);
        ln.unit(4, "m");
      } else {
        ln.fail("unknown map key '" + sub + "'");
      }
    } else if (key == "seed") {
      s.seed = static_cast<std::uint64_t>(ln.integer(1));
    } else if (key == "filter") {
      if (ln.tok(1) != "radius") ln.fail("unknown filter key");
      s.filter_radius = ln.num(2);
      ln.unit(3, "m");
    } else if (key == "start") {
      const std::string& sub = ln.tok(1);
      if (sub == "pose") {
        s.start.x = ln.num(2);
        s.start.y = ln.num(3);
        s.start.theta = ln.angle(4);
      } else if (sub == "stance") {
        const std::string& side = ln.tok(2);
        if (side == "left") s.start_stance = Side::Left;
        else if (side == "right") s.start_stance = Side::Right;
        else ln.fail("stance must be left|right");
      } else {
        ln.fail("unknown start key '" + sub + "'");
      }
    } else if (key == "goal") {
      const std::string& sub = ln.tok(1);
      if (sub == "position") {
        s.goal.x = ln.num(2);
        s.goal.y = ln.num(3);
        ln.unit(4, "m");
      } else if (sub == "heading") {
        s.goal.heading = ln.angle(2);
      } else if (sub == "radius") {
        s.planner.goal_radius = ln.num(2);
        ln.unit(3, "m");
      } else {
        ln.fail("unknown goal key '" + sub + "'");
      }
    } else if (key == "box") {
      s.boxes.push_back(parse_box(ln, 1, ""));
    } else if (key == "ramp") {
      RampPrim r;
      r.cx = ln.num(1);
      r.cy = ln.num(2);
      r.sx = ln.num(3);
      r.sy = ln.num(4);
      const std::string& dir = ln.tok(5);
      if (dir == "+x") { r.axis = 'x'; r.dir = +1; }
      else if (dir == "-x") { r.axis = 'x'; r.dir = -1; }
      else if (dir == "+y") { r.axis = 'y'; r.dir = +1; }
      else if (dir == "-y") { r.axis = 'y'; r.dir = -1; }
      else ln.fail("ramp direction must be +x|-x|+y|-y");
      r.height = ln.num(6);
      ln.unit(7, "m");
      s.ramps.push_back(r);
    } else if (key == "noise") {
      NoisePrim n;
      n.cx = ln.num(1);
      n.cy = ln.num(2);
      n.sx = ln.num(3);
      n.sy = ln.num(4);
      n.amplitude = ln.num(5);
      ln.unit(6, "m");
      s.noise.push_back(n);
    } else if (key == "event") {
      DynamicEvent e;
      e.at_step = static_cast<int>(ln.integer(1));
      const std::string& kind = ln.tok(2);
      if (kind == "insert") {
        e.kind = DynamicEvent::Kind::Insert;
        e.name = ln.tok(3);
        if (ln.tok(4) != "box") ln.fail("only box events are supported");
        e.box = parse_box(ln, 5, e.name);
      } else if (kind == "remove") {
        e.kind = DynamicEvent::Kind::Remove;
        e.name = ln.tok(3);
      } else {
        ln.fail("event kind must be insert|remove");
      }
      s.events.push_back(e);
    } else if (key == "energy") {
      const std::string& p = ln.tok(1);
      const double v = ln.num(2);
      if (p == "A") s.energy.A = v;
      else if (p == "B") s.energy.B = v;
      else if (p == "C") s.energy.C = v;
      else if (p == "D") s.energy.D = v;
      else if (p == "E") s.energy.E = v;
      else if (p == "F") s.energy.F = v;
      else if (p == "mass") { s.energy.mass = v; ln.unit(3, "kg"); }
      else if (p == "gravity") s.energy.gravity = v;
      else if (p == "side_penalty") s.energy.side_penalty_multiplier = v;
      else if (p == "step_time") { s.energy.step_time = v; ln.unit(3, "s"); }
      else if (p == "yaw_inertia") s.energy.yaw_inertia = v;
      else ln.fail("unknown energy parameter '" + p + "'");
    } else if (key == "feasibility") {
      const std::string& p = ln.tok(1);
      if (p == "traversability_min") s.feasibility.traversability_min = ln.num(2);
      else if (p == "foothold_height_max") { s.feasibility.foothold_height_max = ln.num(2); ln.unit(3, "m"); }
      else if (p == "foot_size") {
        s.feasibility.foot_length = ln.num(2);
        s.feasibility.foot_width = ln.num(3);
        ln.unit(4, "m");
      } else if (p == "body_half_width") { s.feasibility.body_half_width = ln.num(2); ln.unit(3, "m"); }
      else if (p == "sway_margin") { s.feasibility.sway_margin = ln.num(2); ln.unit(3, "m"); }
      else if (p == "body_obstacle_height") { s.feasibility.body_obstacle_height = ln.num(2); ln.unit(3, "m"); }
      else ln.fail("unknown feasibility parameter '" + p + "'");
    } else if (key == "planner") {
      const std::string& p = ln.tok(1);
      if (p == "max_iterations") s.planner.max_iterations = static_cast<int>(ln.integer(2));
      else if (p == "goal_radius") { s.planner.goal_radius = ln.num(2); ln.unit(3, "m"); }
      else if (p == "penalty") {
        const std::string& v = ln.tok(2);
        if (v == "on") s.planner.penalty.enabled = true;
        else if (v == "off") s.planner.penalty.enabled = false;
        else ln.fail("planner penalty must be on|off");
      } else if (p == "penalty_weight") s.planner.penalty.weight_mgc = ln.num(2);
      else if (p == "penalty_reverse") s.planner.penalty.reverse_mgc = ln.num(2);
      else if (p == "penalty_relief") s.planner.penalty.rotate_relief = ln.num(2);
      else if (p == "penalty_check_dist") { s.planner.penalty.check_dist = ln.num(2); ln.unit(3, "m"); }
      else if (p == "heuristic") {
        const std::string& v = ln.tok(2);
        if (v == "zero") s.planner.heuristic = HeuristicMode::Zero;
        else if (v == "distance") s.planner.heuristic = HeuristicMode::Distance;
        else if (v == "distance+angle") s.planner.heuristic = HeuristicMode::DistanceAngle;
        else ln.fail("planner heuristic must be zero|distance|distance+angle");
      } else if (p == "dedup_xy") { s.planner.dedup_xy_bin = ln.num(2); ln.unit(3, "m"); }
      else if (p == "dedup_theta") s.planner.dedup_theta_bin = ln.angle(2);
      else if (p == "heuristic_n") s.planner.step_count_fixed_n = static_cast<int>(ln.integer(2));
      else ln.fail("unknown planner parameter '" + p + "'");
    } else if (key == "actions") {
      const std::string& p = ln.tok(1);
      if (p == "profile") {
        const SelectionMode keep = s.actions.selection;
        const double keep_w = s.actions.nominal_width;
        s.actions = ActionConfig::profile(ln.tok(2));
        s.actions.selection = keep;
        s.actions.nominal_width = keep_w;
      } else if (p == "selection") {
        const std::string& v = ln.tok(2);
        if (v == "min-cot") s.actions.selection = SelectionMode::MinCot;
        else if (v == "farthest") s.actions.selection = SelectionMode::Farthest;
        else ln.fail("actions selection must be min-cot|farthest");
      } else if (p == "nominal_width") {
        s.actions.nominal_width = ln.num(2);
        ln.unit(3, "m");
      } else if (p == "max_step_length") {
        s.actions.max_step_length = ln.num(2);
        ln.unit(3, "m");
      } else if (p == "min_width") {
        s.actions.min_step_width = ln.num(2);
        ln.unit(3, "m");
      } else if (p == "max_width") {
        s.actions.max_step_width = ln.num(2);
        ln.unit(3, "m");
      } else if (p == "max_yaw") {
        s.actions.max_step_yaw = ln.angle(2);
      } else if (p == "subset") {
        if (!custom_subsets) {
          s.actions.subsets.clear();
          custom_subsets = true;
        }
        ActionSubset sub;
        sub.id = ln.tok(2);
        const std::string& kind = ln.tok(3);
        if (kind == "normal") { /* plain displacement subset */ }
        else if (kind == "sidestep") sub.sidestep = true;
        else if (kind == "rotate") sub.rotate_in_place = true;
        else ln.fail("subset kind must be normal|sidestep|rotate");
        s.actions.subsets.push_back(sub);
      } else if (p == "candidate") {
        const std::string& id = ln.tok(2);
        ActionSubset* sub = nullptr;
        for (auto& x : s.actions.subsets)
          if (x.id == id) sub = &x;
        if (!sub) ln.fail("candidate names unknown subset '" + id + "'");
        ActionCandidate c{ln.num(3), ln.num(4), ln.angle(5)};
        if (!s.actions.candidate_within_limits(c))
          ln.fail("candidate violates the kinematic limits");
        sub->candidates.push_back(c);
      } else {
        ln.fail("unknown actions parameter '" + p + "'");
      }
    } else if (key == "sim") {
      const std::string& p = ln.tok(1);
      if (p == "budget") s.sim.tick_iteration_budget = static_cast<int>(ln.integer(2));
      else if (p == "max_ticks") s.sim.max_ticks = static_cast<int>(ln.integer(2));
      else ln.fail("unknown sim parameter '" + p + "'");
    } else {
      ln.fail("unknown directive '" + key + "'");
    }
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ScenarioError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_scenario(buf.str(), path);
}

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream o;
  char b[512];
  o << "name " << s.name << "\n";
  std::snprintf(b, sizeof b, "map size %g %g m\n", s.size_x, s.size_y); o << b;
  std::snprintf(b, sizeof b, "map resolution %g m\n", s.resolution); o << b;
  std::snprintf(b, sizeof b, "map origin %g %g m\n", s.origin_x, s.origin_y); o << b;
  o << "seed " << s.seed << "\n";
  std::snprintf(b, sizeof b, "filter radius %g m\n", s.filter_radius); o << b;
  std::snprintf(b, sizeof b, "start pose %g %g %.10g rad\n", s.start.x, s.start.y,
                s.start.theta); o << b;
  o << "start stance " << side_name(s.start_stance) << "\n";
  std::snprintf(b, sizeof b, "goal position %g %g m\n", s.goal.x, s.goal.y); o << b;
  if (s.goal.heading) {
    std::snprintf(b, sizeof b, "goal heading %.10g rad\n", *s.goal.heading); o << b;
  }
  std::snprintf(b, sizeof b, "goal radius %g m\n", s.planner.goal_radius); o << b;
  for (const auto& x : s.boxes) {
    std::snprintf(b, sizeof b, "box %g %g %g %g %g m\n", x.cx, x.cy, x.sx, x.sy,
                  x.height);
    o << b;
  }
  for (const auto& r : s.ramps) {
    std::snprintf(b, sizeof b, "ramp %g %g %g %g %c%c %g m\n", r.cx, r.cy, r.sx,
                  r.sy, r.dir > 0 ? '+' : '-', r.axis, r.height);
    o << b;
  }
  for (const auto& n : s.noise) {
    std::snprintf(b, sizeof b, "noise %g %g %g %g %g m\n", n.cx, n.cy, n.sx,
                  n.sy, n.amplitude);
    o << b;
  }
  for (const auto& e : s.events) {
    if (e.kind == DynamicEvent::Kind::Insert) {
      std::snprintf(b, sizeof b, "event %d insert %s box %g %g %g %g %g m\n",
                    e.at_step, e.name.c_str(), e.box.cx, e.box.cy, e.box.sx,
                    e.box.sy, e.box.height);
    } else {
      std::snprintf(b, sizeof b, "event %d remove %s\n", e.at_step,
                    e.name.c_str());
    }
    o << b;
  }
  const EnergyParams& en = s.energy;
  std::snprintf(b, sizeof b,
                "energy A %.10g\nenergy B %.10g\nenergy C %.10g\n"
                "energy D %.10g\nenergy E %.10g\nenergy F %.10g\n",
                en.A, en.B, en.C, en.D, en.E, en.F);
  o << b;
  std::snprintf(b, sizeof b,
                "energy mass %.10g kg\nenergy gravity %.10g\n"
                "energy side_penalty %.10g\nenergy step_time %.10g s\n"
                "energy yaw_inertia %.10g\n",
                en.mass, en.gravity, en.side_penalty_multiplier, en.step_time,
                en.yaw_inertia);
  o << b;
  const FeasibilityConfig& fe = s.feasibility;
  std::snprintf(b, sizeof b,
                "feasibility traversability_min %.10g\n"
                "feasibility foothold_height_max %.10g m\n"
                "feasibility foot_size %.10g %.10g m\n"
                "feasibility body_half_width %.10g m\n"
                "feasibility sway_margin %.10g m\n"
                "feasibility body_obstacle_height %.10g m\n",
                fe.traversability_min, fe.foothold_height_max, fe.foot_length,
                fe.foot_width, fe.body_half_width, fe.sway_margin,
                fe.body_obstacle_height);
  o << b;
  const PlannerConfig& pl = s.planner;
  const char* hname = pl.heuristic == HeuristicMode::Zero ? "zero"
                      : pl.heuristic == HeuristicMode::Distance
                          ? "distance"
                          : "distance+angle";
  std::snprintf(b, sizeof b,
                "planner max_iterations %d\nplanner heuristic %s\n"
                "planner heuristic_n %d\nplanner penalty %s\n",
                pl.max_iterations, hname, pl.step_count_fixed_n,
                pl.penalty.enabled ? "on" : "off");
  o << b;
  std::snprintf(b, sizeof b,
                "planner penalty_weight %.10g\nplanner penalty_reverse %.10g\n"
                "planner penalty_relief %.10g\nplanner penalty_check_dist %.10g m\n"
                "planner dedup_xy %.10g m\nplanner dedup_theta %.10g rad\n",
                pl.penalty.weight_mgc, pl.penalty.reverse_mgc,
                pl.penalty.rotate_relief, pl.penalty.check_dist,
                pl.dedup_xy_bin, pl.dedup_theta_bin);
  o << b;
  std::snprintf(b, sizeof b, "actions profile %s\nactions selection %s\n"
                "actions nominal_width %.10g m\n",
                s.actions.profile_name.c_str(),
                s.actions.selection == SelectionMode::MinCot ? "min-cot"
                                                             : "farthest",
                s.actions.nominal_width);
  o << b;
  std::snprintf(b, sizeof b,
                "actions max_step_length %.10g m\nactions min_width %.10g m\n"
                "actions max_width %.10g m\nactions max_yaw %.10g rad\n",
                s.actions.max_step_length, s.actions.min_step_width,
                s.actions.max_step_width, s.actions.max_step_yaw);
  o << b;
  for (const auto& sub : s.actions.subsets) {
    std::snprintf(b, sizeof b, "actions subset %s %s\n", sub.id.c_str(),
                  sub.rotate_in_place ? "rotate"
                                      : (sub.sidestep ? "sidestep" : "normal"));
    o << b;
    for (const auto& c : sub.candidates) {
      std::snprintf(b, sizeof b, "actions candidate %s %.10g %.10g %.10g rad\n",
                    sub.id.c_str(), c.dx, c.dy, c.dtheta);
      o << b;
    }
  }
  std::snprintf(b, sizeof b, "sim budget %d\nsim max_ticks %d\n",
                s.sim.tick_iteration_budget, s.sim.max_ticks);
  o << b;
  return o.str();
}

namespace {

void rasterize_cells(ElevationMap& map, const Scenario& sc,
                     const std::vector<BoxPrim>& boxes, int ix0, int iy0,
                     int ix1, int iy1) {
  for (int iy = iy0; iy <= iy1; ++iy)
    for (int ix = ix0; ix <= ix1; ++ix) map.set_height(ix, iy, 0.0);

  const auto clip = [&](double cx, double cy, double sx, double sy, int& jx0,
                        int& jy0, int& jx1, int& jy1) {
    jx0 = std::max(ix0, map.index_x(cx - sx / 2));
    jy0 = std::max(iy0, map.index_y(cy - sy / 2));
    jx1 = std::min(ix1, map.index_x(cx + sx / 2));
    jy1 = std::min(iy1, map.index_y(cy + sy / 2));
  };
  const auto center_inside = [](double c, double lo, double hi) {
    return c >= lo - 1e-12 && c < hi - 1e-12;
  };

  for (const auto& bx : boxes) {
    int jx0, jy0, jx1, jy1;
    clip(bx.cx, bx.cy, bx.sx, bx.sy, jx0, jy0, jx1, jy1);
    for (int iy = jy0; iy <= jy1; ++iy) {
      for (int ix = jx0; ix <= jx1; ++ix) {
        if (!center_inside(map.center_x(ix), bx.cx - bx.sx / 2, bx.cx + bx.sx / 2) ||
            !center_inside(map.center_y(iy), bx.cy - bx.sy / 2, bx.cy + bx.sy / 2))
          continue;
        map.set_height(ix, iy, std::max(map.height(ix, iy), bx.height));
      }
    }
  }
  for (const auto& r : sc.ramps) {
    int jx0, jy0, jx1, jy1;
    clip(r.cx, r.cy, r.sx, r.sy, jx0, jy0, jx1, jy1);
    for (int iy = jy0; iy <= jy1; ++iy) {
      for (int ix = jx0; ix <= jx1; ++ix) {
        const double cx = map.center_x(ix), cy = map.center_y(iy);
        if (!center_inside(cx, r.cx - r.sx / 2, r.cx + r.sx / 2) ||
            !center_inside(cy, r.cy - r.sy / 2, r.cy + r.sy / 2))
          continue;
        double t;
        if (r.axis == 'x')
          t = (cx - (r.cx - r.sx / 2)) / r.sx;
        else
          t = (cy - (r.cy - r.sy / 2)) / r.sy;
        if (r.dir < 0) t = 1.0 - t;
        map.set_height(ix, iy, std::max(map.height(ix, iy), t * r.height));
      }
    }
  }
  for (std::size_t pi = 0; pi < sc.noise.size(); ++pi) {
    const auto& n = sc.noise[pi];
    int jx0, jy0, jx1, jy1;
    clip(n.cx, n.cy, n.sx, n.sy, jx0, jy0, jx1, jy1);
    for (int iy = jy0; iy <= jy1; ++iy) {
      for (int ix = jx0; ix <= jx1; ++ix) {
        if (!center_inside(map.center_x(ix), n.cx - n.sx / 2, n.cx + n.sx / 2) ||
            !center_inside(map.center_y(iy), n.cy - n.sy / 2, n.cy + n.sy / 2))
          continue;
        const double h = n.amplitude * cell_noise(sc.seed, pi, ix, iy);
        map.set_height(ix, iy, std::max(map.height(ix, iy), h));
      }
    }
  }
}

}  // namespace

ElevationMap build_map(const Scenario& scenario) {
  scenario.validate();
  ElevationMap map(scenario.resolution, scenario.size_x, scenario.size_y,
                   scenario.origin_x, scenario.origin_y);
  rasterize_cells(map, scenario, scenario.boxes, 0, 0, map.cells_x() - 1,
                  map.cells_y() - 1);
  return map;
}

void rebuild_region(ElevationMap& map, const Scenario& scenario,
                    const std::vector<BoxPrim>& boxes, const BoxPrim& dirty,
                    double margin) {
  const int ix0 = std::max(0, map.index_x(dirty.cx - dirty.sx / 2 - margin));
  const int iy0 = std::max(0, map.index_y(dirty.cy - dirty.sy / 2 - margin));
  const int ix1 =
      std::min(map.cells_x() - 1, map.index_x(dirty.cx + dirty.sx / 2 + margin));
  const int iy1 =
      std::min(map.cells_y() - 1, map.index_y(dirty.cy + dirty.sy / 2 + margin));
  rasterize_cells(map, scenario, boxes, ix0, iy0, ix1, iy1);
  filter_region(map, scenario.filter_radius, ix0, iy0, ix1, iy1);
}

}  // namespace stepnav
