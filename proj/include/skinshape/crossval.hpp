#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace skinshape {

inline constexpr int kDefaultFolds = 5;

/// Seeded shuffle into `folds` groups whose sizes differ by at most one.
/// Returns the fold index of every sample.
std::vector<int> kfold_split(std::size_t n, int folds, std::uint64_t seed);

/// Stratified variant: each class is shuffled and dealt round-robin, the deal
/// continuing across classes so fold sizes still differ by at most one.
std::vector<int> kfold_split(std::span<const int> labels, int folds, std::uint64_t seed);

/// Row indices of the samples inside / outside one fold.
std::vector<std::size_t> fold_members(std::span<const int> assignment, int fold);
std::vector<std::size_t> fold_complement(std::span<const int> assignment, int fold);

/// Splits a seed into independent streams (splitmix64).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

struct FoldMetrics {
  std::size_t size = 0;
  double validation_loss = 0.0;
  double tp_rate = 0.0;
  double fp_rate = 0.0;
};

/// Training history of a cross-validated classifier. Epochs are 1-based in
/// `selected_epoch`; curve entry e-1 belongs to epoch e.
struct TrainReport {
  std::uint64_t seed = 0;
  /// Loss of the final all-data run after each epoch.
  std::vector<double> train_loss;
  /// Mean validation loss over folds after each epoch.
  std::vector<double> validation_loss;
  /// Training-loss curve of every fold run.
  std::vector<std::vector<double>> fold_train_loss;
  int selected_epoch = 0;
  std::vector<FoldMetrics> folds;
  /// Out-of-fold score of every training sample at the selected epoch.
  std::vector<double> oof_scores;
};

}  // namespace skinshape

#include <functional>

#include "skinshape/matrix.hpp"

namespace skinshape {

/// Scores one raw feature row with the model state at the current epoch.
using Predictor = std::function<double(std::span<const double>)>;
/// Called by a training run after every epoch.
using EpochObserver = std::function<void(double train_loss, const Predictor& predict)>;
/// Trains a fresh model on (x, y) for at most `epochs` epochs.
using TrainingRun =
    std::function<void(const Matrix& x, std::span<const double> y, int epochs, std::uint64_t seed,
                       const EpochObserver& observe)>;

/// K-fold driver shared by the classifiers. Picks the epoch with the lowest
/// mean validation MSE (earliest on ties) and fills every report field except
/// `train_loss`, which belongs to the caller's final all-data run. Binary
/// `labels` stratify the folds and enable per-fold TP/FP; pass an empty span
/// for plain regression targets. Runs that stop early are held at their last
/// epoch.
TrainReport cross_validate(const Matrix& x, std::span<const double> y, std::span<const int> labels,
                           int folds, int epochs, std::uint64_t seed, const TrainingRun& run);

}  // namespace skinshape
