#pragma once

#include <cstdint>
#include <vector>

namespace skinshape {

/// Binary grid, 1 = foreground.
struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  BinaryMask() = default;
  BinaryMask(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), bits(static_cast<std::size_t>(w) * h, fill) {}

  bool inside(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }
  std::uint8_t at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t& at(int x, int y) { return bits[static_cast<std::size_t>(y) * width + x]; }
  /// Out-of-bounds reads as background.
  std::uint8_t get(int x, int y) const { return inside(x, y) ? at(x, y) : 0; }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto b : bits) n += b != 0;
    return n;
  }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;
};

struct ProbabilityMap {
  int width = 0;
  int height = 0;
  std::vector<double> values;
};

/// Thresholded skin map with the posterior it was derived from.
struct SkinMask {
  BinaryMask bits;
  std::vector<double> prob;

  int width() const { return bits.width; }
  int height() const { return bits.height; }
};

}  // namespace skinshape
