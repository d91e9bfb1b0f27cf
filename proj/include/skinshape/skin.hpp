#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "skinshape/image.hpp"
#include "skinshape/mask.hpp"

namespace skinshape {

inline constexpr int kDefaultSkinBins = 32;
inline constexpr double kDefaultSkinThreshold = 0.5;

/// Paired skin / non-skin color histograms over a quantized RGB cube.
///
/// Posteriors use add-one smoothing on both likelihoods with equal priors, so
/// every value lies strictly inside (0, 1) and unseen cells sit at 0.5.
class SkinHistogramModel {
 public:
  SkinHistogramModel() = default;
  /// Throws Error unless bins is 16, 32 or 64, both count vectors have bins^3
  /// cells, and both totals are positive.
  SkinHistogramModel(int bins, std::vector<std::uint32_t> skin_counts,
                     std::vector<std::uint32_t> nonskin_counts);

  int bins() const { return bins_; }
  std::size_t cell_count() const { return skin_counts_.size(); }
  std::uint32_t skin_total() const { return skin_total_; }
  std::uint32_t nonskin_total() const { return nonskin_total_; }
  std::span<const std::uint32_t> skin_counts() const { return skin_counts_; }
  std::span<const std::uint32_t> nonskin_counts() const { return nonskin_counts_; }

  std::size_t cell_index(Rgb c) const;
  double posterior(Rgb c) const { return posterior_[cell_index(c)]; }
  double likelihood_ratio(Rgb c) const;

  friend bool operator==(const SkinHistogramModel& a, const SkinHistogramModel& b) {
    return a.bins_ == b.bins_ && a.skin_counts_ == b.skin_counts_ &&
           a.nonskin_counts_ == b.nonskin_counts_;
  }

 private:
  int bins_ = 0;
  int shift_ = 0;
  std::vector<std::uint32_t> skin_counts_;
  std::vector<std::uint32_t> nonskin_counts_;
  std::uint32_t skin_total_ = 0;
  std::uint32_t nonskin_total_ = 0;
  std::vector<double> posterior_;
};

/// Incremental histogram builder for streaming pixel sources.
class SkinHistogramAccumulator {
 public:
  explicit SkinHistogramAccumulator(int bins = kDefaultSkinBins);

  void add_skin(Rgb c);
  void add_nonskin(Rgb c);
  /// Adds every pixel of the image, routed by the mask (nonzero = skin).
  void add_labeled(const RasterImage& image, const BinaryMask& truth);

  std::uint64_t skin_total() const { return skin_total_; }
  std::uint64_t nonskin_total() const { return nonskin_total_; }

  SkinHistogramModel build() const;

 private:
  int bins_;
  int shift_;
  std::vector<std::uint32_t> skin_;
  std::vector<std::uint32_t> nonskin_;
  std::uint64_t skin_total_ = 0;
  std::uint64_t nonskin_total_ = 0;
};

SkinHistogramModel train_skin_histogram(std::span<const Rgb> skin_pixels,
                                        std::span<const Rgb> nonskin_pixels,
                                        int bins = kDefaultSkinBins);

ProbabilityMap skin_probability_map(const RasterImage& image, const SkinHistogramModel& model);

/// bits[p] = 1 iff prob[p] >= theta.
SkinMask threshold_mask(const ProbabilityMap& prob, double theta = kDefaultSkinThreshold);

/// Interchange format: 16-byte little-endian header {magic "SKHM", bins,
/// skin_total, nonskin_total} as uint32, then bins^3 skin counts followed by
/// bins^3 non-skin counts, all uint32 little-endian.
void write_skin_histogram(const SkinHistogramModel& model, const std::filesystem::path& path);
SkinHistogramModel read_skin_histogram(const std::filesystem::path& path);

}  // namespace skinshape
