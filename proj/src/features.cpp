#include "skinshape/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace skinshape {

Ellipse ellipse_fit(std::span<const Point> pixels) {
  Ellipse e;
  const std::size_t n = pixels.size();
  if (n == 0) return e;
  double sx = 0.0, sy = 0.0;
  for (const Point& p : pixels) {
    sx += p.x;
    sy += p.y;
  }
  e.cx = sx / n;
  e.cy = sy / n;
  if (n < 3) return e;

  double cxx = 0.0, cyy = 0.0, cxy = 0.0;
  for (const Point& p : pixels) {
    const double dx = p.x - e.cx;
    const double dy = e.cy - p.y;  // y-up
    cxx += dx * dx;
    cyy += dy * dy;
    cxy += dx * dy;
  }
  cxx /= n;
  cyy /= n;
  cxy /= n;

  const double mean = 0.5 * (cxx + cyy);
  const double disc = std::sqrt(0.25 * (cxx - cyy) * (cxx - cyy) + cxy * cxy);
  const double l1 = mean + disc;
  const double l2 = std::max(0.0, mean - disc);
  e.major = 4.0 * std::sqrt(l1);
  e.orientation = 0.5 * std::atan2(2.0 * cxy, cxx - cyy) * 180.0 / std::numbers::pi;
  if (e.orientation <= -90.0) e.orientation += 180.0;
  if (l2 <= 1e-12 * std::max(l1, 1.0)) {
    e.minor = 0.0;
    e.degenerate = true;
  } else {
    e.minor = 4.0 * std::sqrt(l2);
    e.degenerate = false;
  }
  return e;
}

HuMoments hu_moments(const BinaryMask& mask) {
  double m00 = 0.0, m10 = 0.0, m01 = 0.0;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.at(x, y)) continue;
      m00 += 1.0;
      m10 += x;
      m01 += y;
    }
  }
  if (m00 == 0.0) return {};
  const double xc = m10 / m00;
  const double yc = m01 / m00;
  double mu20 = 0.0, mu02 = 0.0, mu11 = 0.0;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.at(x, y)) continue;
      const double dx = x - xc;
      const double dy = y - yc;
      mu20 += dx * dx;
      mu02 += dy * dy;
      mu11 += dx * dy;
    }
  }
  // eta_pq = mu_pq / m00^(1 + (p+q)/2); second order gives m00^2.
  const double norm = m00 * m00;
  const double eta20 = mu20 / norm;
  const double eta02 = mu02 / norm;
  const double eta11 = mu11 / norm;
  return {eta20 + eta02, (eta20 - eta02) * (eta20 - eta02) + 4.0 * eta11 * eta11};
}

std::array<double, 6> edge_direction_histogram(const RasterImage& image, const Region& region) {
  std::array<double, 6> hist{};
  const auto gray = to_grayscale(image);
  const int w = image.width();
  const int h = image.height();
  const auto g = [&](int x, int y) {
    x = std::clamp(x, 0, w - 1);
    y = std::clamp(y, 0, h - 1);
    return gray[static_cast<std::size_t>(y) * w + x];
  };

  std::vector<double> magnitude(region.pixels.size());
  std::vector<double> angle(region.pixels.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < region.pixels.size(); ++i) {
    const auto [x, y] = region.pixels[i];
    const double gx = (g(x + 1, y - 1) + 2 * g(x + 1, y) + g(x + 1, y + 1)) -
                      (g(x - 1, y - 1) + 2 * g(x - 1, y) + g(x - 1, y + 1));
    const double gy_down = (g(x - 1, y + 1) + 2 * g(x, y + 1) + g(x + 1, y + 1)) -
                           (g(x - 1, y - 1) + 2 * g(x, y - 1) + g(x + 1, y - 1));
    magnitude[i] = std::hypot(gx, gy_down);
    double deg = std::atan2(-gy_down, gx) * 180.0 / std::numbers::pi;
    if (deg < 0.0) deg += 360.0;
    angle[i] = deg;
    peak = std::max(peak, magnitude[i]);
  }
  if (peak <= 0.0) return hist;

  double votes = 0.0;
  for (std::size_t i = 0; i < magnitude.size(); ++i) {
    if (magnitude[i] < 0.1 * peak) continue;
    std::size_t best = 0;
    double best_dist = 1e9;
    for (std::size_t b = 0; b < kEdgeDirections.size(); ++b) {
      double d = std::fabs(angle[i] - kEdgeDirections[b]);
      d = std::min(d, 360.0 - d);
      if (d < best_dist) {
        best_dist = d;
        best = b;
      }
    }
    hist[best] += 1.0;
    votes += 1.0;
  }
  for (double& v : hist) v /= votes;
  return hist;
}

namespace {

struct Corner {
  long long x;
  long long y;
};

long long cross(const Corner& o, const Corner& a, const Corner& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

double convex_hull_area(std::span<const Point> pixels) {
  if (pixels.empty()) return 0.0;
  // Only the extreme cells of each row can contribute hull vertices.
  std::vector<Corner> pts;
  std::size_t i = 0;
  std::vector<Point> sorted(pixels.begin(), pixels.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const Point& a, const Point& b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1].y == sorted[i].y) ++j;
    const long long y = sorted[i].y;
    const long long xl = sorted[i].x;
    const long long xr = sorted[j].x + 1;
    pts.push_back({xl, y});
    pts.push_back({xl, y + 1});
    pts.push_back({xr, y});
    pts.push_back({xr, y + 1});
    i = j + 1;
  }
  std::sort(pts.begin(), pts.end(), [](const Corner& a, const Corner& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Corner& a, const Corner& b) { return a.x == b.x && a.y == b.y; }),
            pts.end());
  if (pts.size() < 3) return 0.0;

  std::vector<Corner> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Corner& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t t = pts.size() - 1, lower = k + 1; t-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[t]) <= 0) --k;
    hull[k++] = pts[t];
  }
  hull.resize(k - 1);

  long long twice = 0;
  for (std::size_t a = 0; a < hull.size(); ++a) {
    const Corner& p = hull[a];
    const Corner& q = hull[(a + 1) % hull.size()];
    twice += p.x * q.y - q.x * p.y;
  }
  return std::fabs(static_cast<double>(twice)) * 0.5;
}

const std::vector<std::string>& feature_names() {
  static const std::vector<std::string> names = {
      "skin_ratio",       "component_count",   "fd_0",          "fd_2",
      "fd_3",             "fd_4",              "fd_5",          "fd_6",
      "fd_7",             "fd_8",              "fd_9",          "fd_10",
      "signature_peaks",  "eccentricity",      "equiv_diameter", "perimeter_area_ratio",
      "color_count",      "hu_phi1",           "hu_phi2",       "global_center_x",
      "global_center_y",  "local_center_x",    "local_center_y", "global_major_axis",
      "global_minor_axis", "local_major_axis", "local_minor_axis", "global_axis_ratio",
      "local_axis_ratio", "orientation_diff",  "solidity",      "extent",
      "bbox_aspect",      "largest_region_share", "edge_dir_0",  "edge_dir_45",
      "edge_dir_90",      "edge_dir_135",      "edge_dir_225",  "edge_dir_315"};
  return names;
}

FeatureVector extract_features(const RasterImage& image, const SkinMask& mask, const RegionSet& regions,
                               int largest_id,
                               const std::optional<std::array<double, kDescriptorCount>>& descriptors,
                               const std::optional<Signature>& signature) {
  FeatureVector fv;
  auto& v = fv.values;
  const Region& largest = regions.region(largest_id);
  const double w = image.width();
  const double h = image.height();
  const double diagonal = std::hypot(w, h);
  const auto unit = [](double x) { return std::clamp(x, 0.0, 1.0); };

  double prob_sum = 0.0;
  for (double p : mask.prob) prob_sum += p;
  v[0] = unit(prob_sum / (w * h));
  v[1] = std::min(1.0, static_cast<double>(regions.regions.size()) / 100.0);
  if (descriptors) std::copy(descriptors->begin(), descriptors->end(), v.begin() + 2);
  v[12] = signature ? std::min(1.0, signature->peak_count / 20.0) : 0.0;

  const Ellipse local = ellipse_fit(largest.pixels);
  std::vector<Point> skin;
  skin.reserve(mask.bits.count());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (mask.bits.at(x, y)) skin.push_back({x, y});
    }
  }
  const Ellipse global = ellipse_fit(skin);

  const auto ratio = [](const Ellipse& e) { return e.degenerate || e.major <= 0.0 ? 0.0 : e.minor / e.major; };
  v[13] = local.degenerate ? 0.0 : std::sqrt(std::max(0.0, 1.0 - ratio(local) * ratio(local)));
  const double area = static_cast<double>(largest.area);
  v[14] = unit(2.0 * std::sqrt(area / std::numbers::pi) / diagonal);
  v[15] = unit(static_cast<double>(largest.perimeter) / area);
  v[16] = static_cast<double>(count_colors(image)) / 4096.0;

  const HuMoments hu = hu_moments(mask.bits);
  v[17] = hu.phi1;
  v[18] = hu.phi2;

  v[19] = unit(global.cx / w);
  v[20] = unit(global.cy / h);
  v[21] = unit(local.cx / w);
  v[22] = unit(local.cy / h);
  v[23] = unit(global.major / diagonal);
  v[24] = unit(global.minor / diagonal);
  v[25] = unit(local.major / diagonal);
  v[26] = unit(local.minor / diagonal);
  v[27] = ratio(global);
  v[28] = ratio(local);
  if (!global.degenerate && !local.degenerate) {
    double d = std::fmod(std::fabs(global.orientation - local.orientation), 180.0);
    if (d > 90.0) d = 180.0 - d;
    v[29] = d / 90.0;
  }

  const double hull = convex_hull_area(largest.pixels);
  v[30] = hull > 0.0 ? unit(area / hull) : 0.0;
  v[31] = unit(area / (static_cast<double>(largest.bbox.width()) * largest.bbox.height()));
  v[32] = std::min(4.0, static_cast<double>(largest.bbox.width()) / largest.bbox.height()) / 4.0;
  v[33] = area / static_cast<double>(regions.total_area());

  const auto edh = edge_direction_histogram(image, largest);
  std::copy(edh.begin(), edh.end(), v.begin() + 34);
  return fv;
}

}  // namespace skinshape
