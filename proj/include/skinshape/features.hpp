#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skinshape/components.hpp"
#include "skinshape/fourier.hpp"
#include "skinshape/image.hpp"
#include "skinshape/mask.hpp"
#include "skinshape/signature.hpp"

namespace skinshape {

inline constexpr std::size_t kFeatureDimension = 40;

/// Second-moment ellipse. Orientation is in degrees, (-90, 90], measured
/// counterclockwise from +x in the y-up frame.
struct Ellipse {
  double cx = 0.0;
  double cy = 0.0;
  double major = 0.0;
  double minor = 0.0;
  double orientation = 0.0;
  bool degenerate = true;
};

/// Axes are 4 sqrt(eigenvalue) of the population covariance of the pixel
/// coordinates. Fewer than 3 points or a vanishing minor variance give a
/// degenerate ellipse with minor = 0.
Ellipse ellipse_fit(std::span<const Point> pixels);

struct HuMoments {
  double phi1 = 0.0;
  double phi2 = 0.0;
};

/// First two Hu invariants of a binary mask (every foreground pixel weighs 1).
/// An empty mask yields (0, 0).
HuMoments hu_moments(const BinaryMask& mask);

/// Directions of the six histogram bins, in degrees.
inline constexpr std::array<double, 6> kEdgeDirections = {0.0, 45.0, 90.0, 135.0, 225.0, 315.0};

/// Sobel gradient directions over the region's pixels, normalized to sum 1.
/// Only pixels at or above 10% of the region's peak magnitude vote.
std::array<double, 6> edge_direction_histogram(const RasterImage& image, const Region& region);

/// Area of the convex hull of the region's pixel squares (unit cells).
double convex_hull_area(std::span<const Point> pixels);

/// Fixed-order feature vector.
struct FeatureVector {
  std::array<double, kFeatureDimension> values{};
};

const std::vector<std::string>& feature_names();

/// Assembles the 40-entry vector from one image's intermediate products.
/// Missing descriptors or signature (degenerate contour) read as zeros.
FeatureVector extract_features(const RasterImage& image, const SkinMask& mask, const RegionSet& regions,
                               int largest_id,
                               const std::optional<std::array<double, kDescriptorCount>>& descriptors,
                               const std::optional<Signature>& signature);

}  // namespace skinshape
