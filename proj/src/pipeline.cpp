#include "skinshape/pipeline.hpp"

#include "skinshape/error.hpp"

namespace skinshape {

ImageAnalysis analyze_image(const RasterImage& image, const SkinHistogramModel& skin,
                            const PipelineConfig& cfg) {
  ImageAnalysis a;
  a.working = downsample(image, cfg.max_side);
  const int w = a.working.width();
  const int h = a.working.height();
  a.mask = refine(threshold_mask(skin_probability_map(a.working, skin), cfg.theta), cfg.morphology, w, h);
  a.regions = label_components(a.mask.bits);
  a.largest = largest_component(a.regions);
  if (!a.largest) return a;

  std::optional<std::array<double, kDescriptorCount>> normalized;
  try {
    a.boundary = trace_boundary(a.regions, *a.largest);
    a.descriptors = fourier_descriptors(*a.boundary);
    normalized = normalize_descriptors(*a.descriptors);
    a.signature = boundary_signature(a.regions, *a.largest, *a.boundary);
  } catch (const DegenerateBoundary&) {
    a.degenerate_shape = true;
  } catch (const DegenerateContour&) {
    a.degenerate_shape = true;
  }
  a.features = extract_features(a.working, a.mask, a.regions, *a.largest, normalized, a.signature);
  return a;
}

unsigned default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace skinshape
