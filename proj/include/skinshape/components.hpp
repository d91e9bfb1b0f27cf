#pragma once

#include <compare>
#include <optional>
#include <vector>

#include "skinshape/mask.hpp"

namespace skinshape {

struct Point {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const Point&, const Point&) = default;
};

/// Inclusive pixel bounds.
struct BoundingBox {
  int x0 = 0;
  int y0 = 0;
  int x1 = -1;
  int y1 = -1;
  int width() const { return x1 - x0 + 1; }
  int height() const { return y1 - y0 + 1; }
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct Region {
  int id = 0;
  std::size_t area = 0;
  BoundingBox bbox;
  double cx = 0.0;
  double cy = 0.0;
  /// Region pixels with at least one 4-neighbor outside the region.
  std::size_t perimeter = 0;
  /// Raster order.
  std::vector<Point> pixels;
};

/// 8-connected components of a binary mask. Label ids follow raster order of
/// each component's first pixel; `regions` is sorted by area, descending,
/// with ties in ascending id.
struct RegionSet {
  int width = 0;
  int height = 0;
  std::vector<int> labels;
  std::vector<Region> regions;

  int label(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
  /// Throws Error for an unknown id.
  const Region& region(int id) const;
  std::size_t total_area() const;
};

RegionSet label_components(const BinaryMask& mask);

/// Maximum-area region id (smallest id on ties); nullopt means no skin.
std::optional<int> largest_component(const RegionSet& regions);

}  // namespace skinshape
