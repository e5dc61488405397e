#pragma once

#include "lamdyn/dendrite.hpp"

#include <string>

namespace lamdyn {

// Unit-disk picture: circle, one chord per leaf, filled polygon per gap, dot
// per bud; colors keyed by the class orbit data (preperiod, period), frontier
// classes gray.  Output is deterministic byte for byte.
std::string render_disk_svg(const Lamination& L);

// Abstract tree picture: radial layout rooted at the canonical first class,
// vertices colored by kind.  Deterministic byte for byte.
std::string render_tree_svg(const DendriteApprox& D);

}  // namespace lamdyn
