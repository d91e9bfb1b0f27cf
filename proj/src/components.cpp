#include "skinshape/components.hpp"

#include <algorithm>
#include <array>

#include "skinshape/error.hpp"

namespace skinshape {

const Region& RegionSet::region(int id) const {
  for (const Region& r : regions) {
    if (r.id == id) return r;
  }
  throw Error("unknown region id " + std::to_string(id));
}

std::size_t RegionSet::total_area() const {
  std::size_t total = 0;
  for (const Region& r : regions) total += r.area;
  return total;
}

RegionSet label_components(const BinaryMask& mask) {
  RegionSet rs;
  rs.width = mask.width;
  rs.height = mask.height;
  rs.labels.assign(mask.bits.size(), 0);

  static constexpr std::array<std::array<int, 2>, 8> kNeighbors = {
      {{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}}};

  std::vector<Point> stack;
  int next_id = 0;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.at(x, y) || rs.label(x, y) != 0) continue;
      Region region;
      region.id = ++next_id;
      region.bbox = {x, y, x, y};
      rs.labels[static_cast<std::size_t>(y) * mask.width + x] = region.id;
      stack.push_back({x, y});
      while (!stack.empty()) {
        const Point p = stack.back();
        stack.pop_back();
        region.pixels.push_back(p);
        for (const auto& [dx, dy] : kNeighbors) {
          const int nx = p.x + dx;
          const int ny = p.y + dy;
          if (!mask.inside(nx, ny) || !mask.at(nx, ny)) continue;
          int& lbl = rs.labels[static_cast<std::size_t>(ny) * mask.width + nx];
          if (lbl != 0) continue;
          lbl = region.id;
          stack.push_back({nx, ny});
        }
      }
      std::sort(region.pixels.begin(), region.pixels.end(),
                [](const Point& a, const Point& b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });

      double sx = 0.0;
      double sy = 0.0;
      for (const Point& p : region.pixels) {
        sx += p.x;
        sy += p.y;
        region.bbox.x0 = std::min(region.bbox.x0, p.x);
        region.bbox.x1 = std::max(region.bbox.x1, p.x);
        region.bbox.y0 = std::min(region.bbox.y0, p.y);
        region.bbox.y1 = std::max(region.bbox.y1, p.y);
        const auto outside = [&](int qx, int qy) {
          return !mask.inside(qx, qy) || rs.label(qx, qy) != region.id;
        };
        if (outside(p.x - 1, p.y) || outside(p.x + 1, p.y) || outside(p.x, p.y - 1) ||
            outside(p.x, p.y + 1)) {
          ++region.perimeter;
        }
      }
      region.area = region.pixels.size();
      region.cx = sx / static_cast<double>(region.area);
      region.cy = sy / static_cast<double>(region.area);
      rs.regions.push_back(std::move(region));
    }
  }
  std::stable_sort(rs.regions.begin(), rs.regions.end(), [](const Region& a, const Region& b) {
    return a.area != b.area ? a.area > b.area : a.id < b.id;
  });
  return rs;
}

std::optional<int> largest_component(const RegionSet& regions) {
  if (regions.regions.empty()) return std::nullopt;
  return regions.regions.front().id;
}

}  // namespace skinshape
