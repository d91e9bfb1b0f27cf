#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

#include "skinshape/boundary.hpp"
#include "skinshape/components.hpp"
#include "skinshape/features.hpp"
#include "skinshape/morphology.hpp"
#include "skinshape/skin.hpp"

namespace skinshape {

struct PipelineConfig {
  int max_side = kDefaultMaxSide;
  double theta = kDefaultSkinThreshold;
  MorphologyConfig morphology;
};

/// Every intermediate product of one image's pass, kept for inspection.
struct ImageAnalysis {
  RasterImage working;  // down-sampled input
  SkinMask mask;        // refined
  RegionSet regions;
  std::optional<int> largest;
  std::optional<BoundarySequence> boundary;
  std::optional<DescriptorSet> descriptors;
  std::optional<Signature> signature;
  /// Set when the largest region's contour could not be normalized.
  bool degenerate_shape = false;
  FeatureVector features;

  bool no_skin() const { return !largest.has_value(); }
};

/// downsample -> skin posterior -> threshold -> open/close -> components ->
/// largest region -> boundary -> descriptors + signature -> features.
/// Images without skin leave `largest` empty and the feature vector zeroed.
ImageAnalysis analyze_image(const RasterImage& image, const SkinHistogramModel& skin,
                            const PipelineConfig& cfg);

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Results land by index,
/// so ordering does not depend on scheduling. The first exception is rethrown.
template <class T>
std::vector<T> parallel_map(std::size_t n, unsigned jobs, const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(n);
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  const auto worker = [&] {
    for (std::size_t i = next++; i < n && !failed; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

unsigned default_jobs();

}  // namespace skinshape
