#include "stepnav/map_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace stepnav {

void write_layer_csv(const ElevationMap& map, const std::string& layer,
                     const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  const std::vector<double>& data = map.layer(layer);
  char b[64];
  f << "# layer=" << layer;
  std::snprintf(b, sizeof b, " resolution=%.17g", map.resolution());
  f << b;
  std::snprintf(b, sizeof b, " origin=%.17g,%.17g", map.origin_x(), map.origin_y());
  f << b;
  f << " nx=" << map.cells_x() << " ny=" << map.cells_y() << "\n";
  for (int iy = 0; iy < map.cells_y(); ++iy) {
    for (int ix = 0; ix < map.cells_x(); ++ix) {
      if (ix) f << ',';
      const double v = data[map.cell_index(ix, iy)];
      if (!map.valid(ix, iy) || std::isnan(v)) {
        f << "nan";
      } else {
        std::snprintf(b, sizeof b, "%.17g", v);
        f << b;
      }
    }
    f << '\n';
  }
}

ElevationMap load_height_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::string header;
  std::getline(f, header);
  double resolution = 0, ox = 0, oy = 0;
  int nx = 0, ny = 0;
  {
    std::istringstream hs(header);
    std::string tok;
    while (hs >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      const std::string k = tok.substr(0, eq), v = tok.substr(eq + 1);
      if (k == "resolution") resolution = std::stod(v);
      else if (k == "nx") nx = std::stoi(v);
      else if (k == "ny") ny = std::stoi(v);
      else if (k == "origin") {
        const auto comma = v.find(',');
        ox = std::stod(v.substr(0, comma));
        oy = std::stod(v.substr(comma + 1));
      }
    }
  }
  if (resolution <= 0 || nx <= 0 || ny <= 0)
    throw std::runtime_error(path + ": missing or bad raster header");
  ElevationMap map(resolution, nx * resolution, ny * resolution, ox, oy);
  std::string line;
  for (int iy = 0; iy < ny; ++iy) {
    if (!std::getline(f, line))
      throw std::runtime_error(path + ": truncated raster (row " +
                               std::to_string(iy + 1) + ")");
    std::istringstream ls(line);
    std::string cell;
    for (int ix = 0; ix < nx; ++ix) {
      if (!std::getline(ls, cell, ','))
        throw std::runtime_error(path + ": short row " + std::to_string(iy + 1));
      if (cell == "nan") {
        map.set_valid(ix, iy, false);
        map.set_height(ix, iy, 0.0);
      } else {
        map.set_height(ix, iy, std::stod(cell));
      }
    }
  }
  return map;
}

void write_layer_pgm(const ElevationMap& map, const std::string& layer,
                     const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  const std::vector<double>& data = map.layer(layer);
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (int iy = 0; iy < map.cells_y(); ++iy)
    for (int ix = 0; ix < map.cells_x(); ++ix) {
      const double v = data[map.cell_index(ix, iy)];
      if (!map.valid(ix, iy) || std::isnan(v)) continue;
      if (first) { lo = hi = v; first = false; }
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  const double span = hi > lo ? hi - lo : 1.0;
  f << "P5\n" << map.cells_x() << " " << map.cells_y() << "\n255\n";
  // Image rows top to bottom = map rows north to south.
  for (int iy = map.cells_y() - 1; iy >= 0; --iy) {
    for (int ix = 0; ix < map.cells_x(); ++ix) {
      const double v = data[map.cell_index(ix, iy)];
      unsigned char px = 0;
      if (map.valid(ix, iy) && !std::isnan(v))
        px = static_cast<unsigned char>(
            std::clamp(255.0 * (v - lo) / span, 0.0, 255.0));
      f.put(static_cast<char>(px));
    }
  }
}

}  // namespace stepnav
