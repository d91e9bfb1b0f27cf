#pragma once

#include "skinshape/mask.hpp"

namespace skinshape {

/// Divisors for the automatic disk radius of opening and closing.
struct MorphologyConfig {
  double c_open = 75.0;
  double c_close = 100.0;
};

/// round((width + height) / c), half up, never below 1.
int disk_radius(int width, int height, double c);

/// Morphology with the disk {(dx,dy) : dx^2 + dy^2 <= radius^2}.
///
/// The mask is treated as a window onto an unbounded background plane: the
/// operators are evaluated on that plane and the result is cropped back to the
/// window. Erosion therefore strips foreground that touches the border, and
/// closing keeps every input pixel (it is evaluated on a padded canvas).
BinaryMask erode(const BinaryMask& mask, int radius);
BinaryMask dilate(const BinaryMask& mask, int radius);
BinaryMask morph_open(const BinaryMask& mask, int radius);
BinaryMask morph_close(const BinaryMask& mask, int radius);

SkinMask morph_open(const SkinMask& mask, int radius);
SkinMask morph_close(const SkinMask& mask, int radius);

/// Opening with the c_open radius, then closing with the c_close radius.
SkinMask refine(const SkinMask& mask, const MorphologyConfig& cfg, int width, int height);

}  // namespace skinshape
