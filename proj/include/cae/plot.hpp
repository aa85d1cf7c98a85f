#pragma once

#include "cae/mmd.hpp"

#include <iosfwd>
#include <string>

namespace cae {

// Standalone SVG renderings of a landscape: polyline for one free charge,
// heatmap (grey scale, dark = low energy) for two. Singular cells are skipped.
void write_landscape_svg(std::ostream& out, const Landscape& landscape, const std::string& title);

}  // namespace cae
