#include "skinshape/boundary.hpp"

#include <array>

#include "skinshape/error.hpp"

namespace skinshape {

namespace {

// Clockwise on screen, starting west.
constexpr std::array<Point, 8> kRing = {
    {{-1, 0}, {-1, -1}, {0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}}};

int ring_index(int dx, int dy) {
  for (int i = 0; i < 8; ++i) {
    if (kRing[i].x == dx && kRing[i].y == dy) return i;
  }
  return -1;
}

}  // namespace

double signed_area(std::span<const Point> points) {
  const std::size_t n = points.size();
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = points[i];
    const Point& b = points[(i + 1) % n];
    twice += static_cast<double>(a.x) * b.y - static_cast<double>(b.x) * a.y;
  }
  return 0.5 * twice;
}

BoundarySequence trace_boundary(const RegionSet& regions, int region_id) {
  const Region& region = regions.region(region_id);
  if (region.area < 4) throw DegenerateBoundary();

  const auto member = [&](int x, int y) {
    return x >= 0 && y >= 0 && x < regions.width && y < regions.height && regions.label(x, y) == region_id;
  };

  const Point start = region.pixels.front();
  BoundarySequence out;
  out.points.push_back(start);

  Point cur = start;
  int backtrack = 0;  // west of the start pixel is outside the region
  const std::size_t max_steps = 4 * region.area + 16;
  for (std::size_t step = 0; step < max_steps; ++step) {
    int found = -1;
    for (int i = 1; i <= 8; ++i) {
      const int d = (backtrack + i) % 8;
      if (member(cur.x + kRing[d].x, cur.y + kRing[d].y)) {
        found = d;
        break;
      }
    }
    if (found < 0) throw DegenerateBoundary();

    const Point next{cur.x + kRing[found].x, cur.y + kRing[found].y};
    if (cur == start && out.points.size() >= 2 && next == out.points[1]) {
      out.points.pop_back();
      break;
    }
    const Point behind{cur.x + kRing[(found + 7) % 8].x, cur.y + kRing[(found + 7) % 8].y};
    backtrack = ring_index(behind.x - next.x, behind.y - next.y);
    out.points.push_back(next);
    cur = next;
  }

  if (out.points.size() < 4 || signed_area(out.points) <= 0.0) throw DegenerateBoundary();
  return out;
}

}  // namespace skinshape
