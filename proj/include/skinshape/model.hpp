#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skinshape/anfis.hpp"
#include "skinshape/fusion.hpp"
#include "skinshape/mlp.hpp"
#include "skinshape/pipeline.hpp"
#include "skinshape/skin.hpp"
#include "skinshape/sofm_classifier.hpp"

namespace skinshape {

inline constexpr int kModelFormatVersion = 1;

struct Provenance {
  std::uint64_t seed = 0;
  /// FNV-1a of the training table, 16 hex digits.
  std::string dataset_hash;
  /// Only filled from SOURCE_DATE_EPOCH so rebuilt models stay byte-identical.
  std::string timestamp;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// Everything needed to classify an image. A skin-only container (no
/// classifiers yet) is what train-skin produces and extract consumes.
struct TrainedModel {
  int version = kModelFormatVersion;
  SkinHistogramModel skin;
  PipelineConfig pipeline;
  std::vector<std::string> feature_names;
  std::optional<MlpModel> mlp;
  std::optional<NfModel> nf;
  std::optional<SofmClassifier> sofm;
  FusionParams fusion;
  Provenance provenance;

  std::size_t dimension() const { return feature_names.size(); }
  bool has_classifiers() const { return mlp.has_value() && nf.has_value(); }
  /// Throws DimensionMismatch when an embedded component disagrees with D.
  void validate() const;
};

std::string serialize_model(const TrainedModel& model);
/// Throws Error for malformed documents or an unknown version.
TrainedModel parse_model(std::string_view text);
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

struct ImageScores {
  bool no_skin = false;
  double mlp = 0.0;
  double nf = 0.0;
  double sofm = 0.0;
  double fused = 0.0;
};

/// Classifier scores for one feature row. No-skin rows score 0 everywhere.
ImageScores score_features(const TrainedModel& model, std::span<const double> features, bool no_skin);
ImageScores score_image(const TrainedModel& model, const RasterImage& image);

}  // namespace skinshape
