#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "skinshape/model.hpp"
#include "skinshape/select.hpp"
#include "skinshape/table.hpp"

namespace skinshape {

/// Flags shared by every subcommand. Unset optionals fall back to the model
/// (pipeline settings) or to the trained / default values (fusion weights).
struct GlobalOptions {
  std::uint64_t seed = 1;
  std::optional<int> max_side;
  std::optional<double> theta;
  std::optional<double> c_open;
  std::optional<double> c_close;
  int folds = kDefaultFolds;
  std::optional<double> mu1;
  std::optional<double> mu2;
  std::optional<double> mu12;
  double threshold = kDecisionThreshold;
  unsigned jobs = 0;  // 0 = hardware concurrency

  unsigned worker_count() const { return jobs ? jobs : default_jobs(); }
  PipelineConfig pipeline(const PipelineConfig& base) const;
};

/// Model named on the command line, else $SKINSHAPE_MODEL, else nullopt.
std::optional<std::filesystem::path> model_path(const std::optional<std::filesystem::path>& flag);

/// Skin-only container holding the built-in synthetic skin histogram.
TrainedModel default_skin_container();

struct ExtractResult {
  FeatureTable table;
  /// Manifest entries that failed, with the reason.
  std::vector<std::pair<std::string, std::string>> failures;
  std::size_t attempted = 0;
  /// More than 1% of the attempted images failed.
  bool over_tolerance() const { return failures.size() * 100 > attempted; }
};

/// Runs the per-image pipeline over the manifest entries (all of them, or
/// only those whose split matches). Rows keep manifest order.
ExtractResult extract_features(const CorpusManifest& manifest, const SkinHistogramModel& skin,
                               const PipelineConfig& cfg, const std::string& split, unsigned jobs);

struct TrainSettings {
  std::uint64_t seed = 1;
  int folds = kDefaultFolds;
  int mlp_epochs = 300;
  int nf_epochs = 40;
  int sofm_epochs = 50;
  /// Fixed fusion weights; nullopt runs the mu search on out-of-fold scores.
  std::optional<FusionParams> fusion;
};

struct TrainOutcome {
  TrainedModel model;
  TrainReport mlp_report;
  TrainReport nf_report;
  MuSearchResult mu_search;
};

/// Trains MLP, NF and SOFM on the labeled rows and assembles the model.
/// The skin container supplies the skin histogram and pipeline settings.
TrainOutcome train_model(const FeatureTable& table, const TrainedModel& skin, const TrainSettings& settings,
                         std::string dataset_hash = {});

struct ClassifierRow {
  std::string name;
  EvalResult result;
};

struct EvaluationSummary {
  std::vector<ClassifierRow> rows;  // mlp, nf, [sofm], fused
  std::vector<std::pair<std::string, std::string>> failures;
  std::size_t unlabeled = 0;
  const EvalResult& row(const std::string& name) const;
};

/// Scores labeled feature rows. Unlabeled rows are counted and skipped.
EvaluationSummary evaluate_table(const TrainedModel& model, const FeatureTable& table, double threshold);

/// Report CSVs.
void write_curve_csv(const TrainReport& report, const std::filesystem::path& path);
void write_sweep_csv(const MuSearchResult& sweep, const std::filesystem::path& path);
void write_evaluation_csv(const EvaluationSummary& summary, const std::filesystem::path& path);
void print_evaluation(const EvaluationSummary& summary, std::ostream& out);
void write_selection_csvs(const SelectionReport& report, const SofmGrid& grid,
                          const std::vector<std::string>& names, const std::filesystem::path& dir);
void write_planes_csv(const SofmGrid& grid, const std::vector<std::string>& names,
                      const std::filesystem::path& path);

/// ISO-8601 UTC time from SOURCE_DATE_EPOCH, or empty when it is unset.
std::string build_timestamp();
std::string hex64(std::uint64_t v);

}  // namespace skinshape
