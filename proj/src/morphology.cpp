#include "skinshape/morphology.hpp"

#include <cmath>
#include <vector>

#include "skinshape/error.hpp"

namespace skinshape {

int disk_radius(int width, int height, double c) {
  if (!(c > 0.0)) throw Error("morphology constant must be positive");
  const double r = std::floor(static_cast<double>(width + height) / c + 0.5);
  return std::max(1, static_cast<int>(r));
}

namespace {

/// Half-width of the disk's horizontal run at each vertical offset.
std::vector<int> disk_runs(int radius) {
  std::vector<int> half(2 * static_cast<std::size_t>(radius) + 1);
  for (int dy = -radius; dy <= radius; ++dy) {
    int w = 0;
    while ((w + 1) * (w + 1) + dy * dy <= radius * radius) ++w;
    half[dy + radius] = w;
  }
  return half;
}

/// Per-row prefix counts, width + 1 entries per row.
std::vector<int> row_prefix(const BinaryMask& m) {
  std::vector<int> pre(static_cast<std::size_t>(m.width + 1) * m.height, 0);
  for (int y = 0; y < m.height; ++y) {
    int* row = pre.data() + static_cast<std::size_t>(y) * (m.width + 1);
    for (int x = 0; x < m.width; ++x) row[x + 1] = row[x] + (m.at(x, y) ? 1 : 0);
  }
  return pre;
}

BinaryMask apply(const BinaryMask& mask, int radius, bool erosion) {
  if (radius < 1) throw Error("structuring element radius must be at least 1");
  const auto half = disk_runs(radius);
  const auto pre = row_prefix(mask);
  const int w = mask.width;
  BinaryMask out(w, mask.height);
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < w; ++x) {
      bool hit = erosion;
      for (int dy = -radius; dy <= radius && hit == erosion; ++dy) {
        const int yy = y + dy;
        const int hw = half[dy + radius];
        if (yy < 0 || yy >= mask.height) {
          if (erosion) hit = false;
          continue;
        }
        const int lo = x - hw;
        const int hi = x + hw;
        const int* row = pre.data() + static_cast<std::size_t>(yy) * (w + 1);
        if (erosion) {
          if (lo < 0 || hi >= w || row[hi + 1] - row[lo] != hi - lo + 1) hit = false;
        } else {
          const int cl = std::max(lo, 0);
          const int ch = std::min(hi, w - 1);
          if (cl <= ch && row[ch + 1] - row[cl] > 0) hit = true;
        }
      }
      out.at(x, y) = hit ? 1 : 0;
    }
  }
  return out;
}

}  // namespace

BinaryMask erode(const BinaryMask& mask, int radius) { return apply(mask, radius, true); }

BinaryMask dilate(const BinaryMask& mask, int radius) { return apply(mask, radius, false); }

BinaryMask morph_open(const BinaryMask& mask, int radius) {
  // Dilating the eroded set never leaves the original support, so no padding.
  return dilate(erode(mask, radius), radius);
}

BinaryMask morph_close(const BinaryMask& mask, int radius) {
  if (radius < 1) throw Error("structuring element radius must be at least 1");
  BinaryMask padded(mask.width + 2 * radius, mask.height + 2 * radius);
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) padded.at(x + radius, y + radius) = mask.at(x, y);
  }
  const BinaryMask closed = erode(dilate(padded, radius), radius);
  BinaryMask out(mask.width, mask.height);
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) out.at(x, y) = closed.at(x + radius, y + radius);
  }
  return out;
}

SkinMask morph_open(const SkinMask& mask, int radius) { return {morph_open(mask.bits, radius), mask.prob}; }

SkinMask morph_close(const SkinMask& mask, int radius) { return {morph_close(mask.bits, radius), mask.prob}; }

SkinMask refine(const SkinMask& mask, const MorphologyConfig& cfg, int width, int height) {
  const int r_open = disk_radius(width, height, cfg.c_open);
  const int r_close = disk_radius(width, height, cfg.c_close);
  return morph_close(morph_open(mask, r_open), r_close);
}

}  // namespace skinshape
