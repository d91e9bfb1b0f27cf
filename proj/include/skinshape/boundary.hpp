#pragma once

#include <span>
#include <vector>

#include "skinshape/components.hpp"

namespace skinshape {

/// Closed outer contour of a region in raster coordinates (x right, y down).
///
/// Points run counterclockwise in the y-up frame, which is clockwise on
/// screen; with raster coordinates this gives a positive shoelace area.
/// The closing edge from the last point back to the first is implied.
struct BoundarySequence {
  std::vector<Point> points;
  std::size_t size() const { return points.size(); }
};

/// Moore-neighbor trace of the outer boundary, starting at the uppermost,
/// then leftmost, region pixel. Throws DegenerateBoundary for regions with
/// fewer than 4 pixels or whose trace encloses no area (one-pixel lines).
BoundarySequence trace_boundary(const RegionSet& regions, int region_id);

/// Shoelace area of the closed polygon through the points, in raster coordinates.
double signed_area(std::span<const Point> points);

}  // namespace skinshape
