#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "skinshape/crossval.hpp"
#include "skinshape/matrix.hpp"
#include "skinshape/standardize.hpp"

namespace skinshape {

/// One hidden layer of logistic units feeding one logistic output.
///
/// Parameter layout: hidden weights (hidden x inputs, row-major), hidden
/// biases, output weights, output bias.
class MlpNetwork {
 public:
  MlpNetwork() = default;
  MlpNetwork(std::size_t inputs, std::size_t hidden);
  MlpNetwork(std::size_t inputs, std::size_t hidden, std::vector<double> params);

  std::size_t inputs() const { return inputs_; }
  std::size_t hidden() const { return hidden_; }
  std::size_t parameter_count() const { return params_.size(); }
  const std::vector<double>& params() const { return params_; }
  std::vector<double>& params() { return params_; }

  double forward(std::span<const double> x) const { return forward(params_, x); }
  double forward(std::span<const double> params, std::span<const double> x) const;

  /// Mean squared error over the rows of x; fills grad when it is non-empty.
  double loss(std::span<const double> params, const Matrix& x, std::span<const double> y,
              std::span<double> grad) const;

  friend bool operator==(const MlpNetwork&, const MlpNetwork&) = default;

 private:
  std::size_t inputs_ = 0;
  std::size_t hidden_ = 0;
  std::vector<double> params_;
};

struct MlpModel {
  Standardizer standardizer;
  MlpNetwork network;

  std::size_t dimension() const { return standardizer.dimension(); }
  friend bool operator==(const MlpModel&, const MlpModel&) = default;
};

struct MlpConfig {
  std::size_t hidden = 10;
  int epochs = 300;
  int folds = kDefaultFolds;
  std::uint64_t seed = 1;
};

/// Weights drawn uniformly from [-0.5, 0.5].
MlpNetwork mlp_initialize(std::size_t inputs, std::size_t hidden, std::uint64_t seed);

/// Standardizes, then minimizes MSE with scaled conjugate gradient. One epoch
/// is one SCG iteration; observe receives the loss after each.
MlpModel mlp_fit(const Matrix& x, std::span<const double> y, std::size_t hidden, int epochs,
                 std::uint64_t seed, const EpochObserver& observe = {});

/// Cross-validated training: k-fold runs choose the stopping epoch, then a
/// fresh all-data run is cut at that epoch. Rejects single-class labels.
std::pair<MlpModel, TrainReport> mlp_train(const Matrix& x, std::span<const int> labels,
                                           const MlpConfig& cfg);

/// Score in (0, 1). Throws DimensionMismatch on a wrong-length input.
double mlp_predict(const MlpModel& model, std::span<const double> x);

/// Throws Error for labels other than 0/1, DegenerateLabels unless both occur.
void require_binary_labels(std::span<const int> labels);

}  // namespace skinshape
