#pragma once

#include <string_view>

#include "signorini/geometry.hpp"

namespace signorini::testing {

/// Unit square (0,0),(1,0),(1,1),(0,1); tags for bottom, right, top, left.
inline BoundarySpec unit_square(std::string_view tags) {
  BoundarySpec spec;
  spec.polygon.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  for (std::size_t e = 0; e < 4; ++e) spec.segments.push_back({e, e, tag_from_letter(tags[e]), {}});
  return spec;
}

/// L-shaped hexagon with the reentrant corner at the origin.
inline BoundarySpec l_domain(std::string_view tags) {
  BoundarySpec spec;
  spec.polygon.vertices = {{0, 0}, {1, 0}, {1, 1}, {-1, 1}, {-1, -1}, {0, -1}};
  for (std::size_t e = 0; e < 6; ++e) spec.segments.push_back({e, e, tag_from_letter(tags[e]), {}});
  return spec;
}

}  // namespace signorini::testing
