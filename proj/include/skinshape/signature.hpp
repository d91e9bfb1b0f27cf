#pragma once

#include <array>

#include "skinshape/boundary.hpp"

namespace skinshape {

inline constexpr int kSignatureBins = 360;
inline constexpr int kPeakSmoothingWindow = 5;
inline constexpr double kPeakRelativeProminence = 0.05;

/// Centroid-to-boundary distance sampled at one-degree steps; angles are
/// measured counterclockwise from +x in the y-up frame.
struct Signature {
  std::array<double, kSignatureBins> samples{};
  double mean_radius = 0.0;
  int peak_count = 0;
};

/// Bins every boundary point by its nearest whole degree around the region
/// centroid, averages each bin, and fills empty bins by circular linear
/// interpolation between the nearest filled neighbors.
Signature boundary_signature(const RegionSet& regions, int region_id, const BoundarySequence& boundary);
Signature boundary_signature(double cx, double cy, const BoundarySequence& boundary);

/// Circular moving average (window 5), then circular local maxima whose
/// prominence reaches 5% of the mean radius. A plateau counts once.
int count_signature_peaks(const Signature& signature);

}  // namespace skinshape
