#pragma once

#include <string>

#include "stepnav/elevation_map.hpp"

namespace stepnav {

// Row-major CSV raster for one layer, with a header carrying the grid
// parameters. Unknown cells are written as "nan".
void write_layer_csv(const ElevationMap& map, const std::string& layer,
                     const std::string& path);

// Reads a height-layer CSV back into an unfiltered map ("nan" = invalid).
ElevationMap load_height_csv(const std::string& path);

// 8-bit grayscale PGM of a layer, min-max normalized, for eyeballing.
void write_layer_pgm(const ElevationMap& map, const std::string& layer,
                     const std::string& path);

}  // namespace stepnav
