#pragma once

#include <optional>
#include <span>
#include <vector>

namespace skinshape {

inline constexpr double kDecisionThreshold = 0.5;

/// Importance of each source and of their coalition.
struct FusionParams {
  double mu1 = 0.47;  // first classifier (MLP)
  double mu2 = 0.53;  // second classifier (NF)
  double mu12 = 1.0;

  /// Throws Error unless mu1 and mu2 lie in [0, 1].
  void validate() const;
  friend bool operator==(const FusionParams&, const FusionParams&) = default;
};

/// [mu12 - (mu2 + mu1)] h1 + mu1 h1 + mu2 h2, evaluated as written (the
/// inputs are not sorted) and clamped to [0, 1].
double fuse(double h1, double h2, const FusionParams& p);

struct ScoredLabel {
  double score = 0.0;
  int label = 0;
};

struct EvalResult {
  std::size_t tp = 0;
  std::size_t fn = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  /// Absent when the corresponding class has no samples.
  std::optional<double> tp_rate;
  std::optional<double> fp_rate;
  double threshold = kDecisionThreshold;

  std::size_t total() const { return tp + fn + fp + tn; }
  double accuracy() const { return total() ? static_cast<double>(tp + tn) / total() : 0.0; }
  /// tp_rate - fp_rate with absent rates read as 0.
  double youden() const { return tp_rate.value_or(0.0) - fp_rate.value_or(0.0); }
};

/// Positive iff score > threshold. Throws Error on empty input.
EvalResult evaluate(std::span<const ScoredLabel> scores, double threshold = kDecisionThreshold);

struct FusionSample {
  double h1 = 0.0;
  double h2 = 0.0;
  int label = 0;
};

struct SweepPoint {
  double mu1 = 0.0;
  double tp_rate = 0.0;
  double fp_rate = 0.0;
  double objective = 0.0;
};

struct MuSearchResult {
  FusionParams best;
  std::vector<SweepPoint> surface;
};

/// Sweeps mu1 over {0, step, ..., 1} with mu2 = 1 - mu1 and mu12 = 1,
/// scoring tp_rate - fp_rate. Ties go to the mu1 closest to 0.5, then to the
/// smaller mu1. Throws Error unless both classes are present.
MuSearchResult grid_search_mu(std::span<const FusionSample> samples, double step = 0.01,
                              double threshold = kDecisionThreshold);

}  // namespace skinshape
