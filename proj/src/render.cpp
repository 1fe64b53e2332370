#include "stepnav/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace stepnav {

namespace {

constexpr double kScale = 100.0;  // px per meter

struct Mapper {
  double ox, oy, top;
  double px(double x) const { return (x - ox) * kScale; }
  double py(double y) const { return (top - y) * kScale; }  // svg y points down
};

}  // namespace

void write_plan_svg(const ElevationMap& map, const std::vector<FootState>& steps,
                    const GoalSpec& goal, const RenderOptions& opt,
                    const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  const Mapper m{map.origin_x(), map.origin_y(),
                 map.origin_y() + map.size_y()};
  const double w = map.size_x() * kScale, h = map.size_y() * kScale;
  char b[512];
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
    << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
  f << "<rect width=\"" << w << "\" height=\"" << h
    << "\" fill=\"#f2f0ec\"/>\n";

  // Height raster, 16 gray levels, row runs merged to keep files small.
  double hmax = 0.0;
  for (int iy = 0; iy < map.cells_y(); ++iy)
    for (int ix = 0; ix < map.cells_x(); ++ix)
      if (map.valid(ix, iy)) hmax = std::max(hmax, map.height(ix, iy));
  if (hmax > 0.0) {
    const double res = map.resolution();
    for (int iy = 0; iy < map.cells_y(); ++iy) {
      int run_start = -1, run_level = 0;
      const auto flush = [&](int end_ix) {
        if (run_start < 0) return;
        const double x0 = map.origin_x() + run_start * res;
        const double y0 = map.origin_y() + iy * res;
        const int shade = 220 - run_level * 11;
        std::snprintf(b, sizeof b,
                      "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\""
                      " fill=\"rgb(%d,%d,%d)\"/>\n",
                      m.px(x0), m.py(y0 + res), (end_ix - run_start) * res * kScale,
                      res * kScale, shade, shade - 10, shade - 20);
        f << b;
        run_start = -1;
      };
      for (int ix = 0; ix < map.cells_x(); ++ix) {
        int level = 0;
        if (map.valid(ix, iy) && map.height(ix, iy) > 1e-6)
          level = 1 + std::min(15, static_cast<int>(15.0 * map.height(ix, iy) / hmax));
        if (level == 0) {
          flush(ix);
        } else if (run_start < 0) {
          run_start = ix;
          run_level = level;
        } else if (level != run_level) {
          flush(ix);
          run_start = ix;
          run_level = level;
        }
      }
      flush(map.cells_x());
    }
  }

  // Goal tolerance disc and center.
  std::snprintf(b, sizeof b,
                "<circle cx=\"%.1f\" cy=\"%.1f\" r=\"%.1f\" fill=\"none\""
                " stroke=\"#2a9d2a\" stroke-width=\"2\"/>\n",
                m.px(goal.x), m.py(goal.y), opt.goal_radius * kScale);
  f << b;
  std::snprintf(b, sizeof b,
                "<circle cx=\"%.1f\" cy=\"%.1f\" r=\"4\" fill=\"#2a9d2a\"/>\n",
                m.px(goal.x), m.py(goal.y));
  f << b;

  if (opt.body_ellipses) {
    for (std::size_t i = 1; i < steps.size(); ++i) {
      const Pose2& p = steps[i - 1].pose;
      const Pose2& q = steps[i].pose;
      const double d = std::hypot(q.x - p.x, q.y - p.y);
      const double a = 0.5 * d + opt.sway_margin;
      const double ang = std::atan2(q.y - p.y, q.x - p.x);
      std::snprintf(b, sizeof b,
                    "<ellipse cx=\"0\" cy=\"0\" rx=\"%.1f\" ry=\"%.1f\""
                    " fill=\"none\" stroke=\"#9db8d8\" stroke-width=\"1\""
                    " transform=\"translate(%.1f,%.1f) rotate(%.2f)\"/>\n",
                    a * kScale, opt.body_half_width * kScale,
                    m.px(0.5 * (p.x + q.x)), m.py(0.5 * (p.y + q.y)),
                    -rad2deg(ang));
      f << b;
    }
  }

  for (const auto& s : steps) {
    const double fl = opt.foot_length * kScale, fw = opt.foot_width * kScale;
    const char* fill = s.side == Side::Left ? "#c23b3b" : "#2b5fb0";
    std::snprintf(b, sizeof b,
                  "<rect class=\"footstep %s\" x=\"%.1f\" y=\"%.1f\" width=\"%.1f\""
                  " height=\"%.1f\" fill=\"%s\" fill-opacity=\"0.65\""
                  " transform=\"rotate(%.2f %.1f %.1f)\"/>\n",
                  side_name(s.side), m.px(s.pose.x) - fl / 2,
                  m.py(s.pose.y) - fw / 2, fl, fw, fill, -rad2deg(s.pose.theta),
                  m.px(s.pose.x), m.py(s.pose.y));
    f << b;
  }
  f << "</svg>\n";
}

}  // namespace stepnav
