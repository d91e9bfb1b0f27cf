#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "skinshape/crossval.hpp"
#include "skinshape/matrix.hpp"
#include "skinshape/standardize.hpp"

namespace skinshape {

struct SubtractiveClusteringConfig {
  double radius = 0.5;
  double squash = 1.5;
  double accept_ratio = 0.5;
  double reject_ratio = 0.15;
  /// 0 = unbounded.
  std::size_t max_centers = 0;
};

/// Chiu's subtractive clustering. Squared distances are averaged over the
/// dimensions (mean squared difference), which equals the plain Euclidean
/// form for one-dimensional data and keeps the radius meaningful for wide
/// feature vectors. Returns one center per row.
Matrix subtractive_clustering(const Matrix& x, const SubtractiveClusteringConfig& cfg = {});

/// First-order TSK rule with one Gaussian membership function per input.
struct NfRule {
  std::vector<double> center;
  std::vector<double> width;
  /// Linear consequent: inputs.size() slopes followed by the intercept.
  std::vector<double> coefficients;

  friend bool operator==(const NfRule&, const NfRule&) = default;
};

/// Rules live in the standardized input space.
struct NfModel {
  Standardizer standardizer;
  std::vector<NfRule> rules;

  std::size_t dimension() const { return standardizer.dimension(); }
  /// Unclamped TSK output for an already standardized input.
  double raw_output(std::span<const double> standardized) const;

  friend bool operator==(const NfModel&, const NfModel&) = default;
};

struct AnfisConfig {
  int epochs = 40;
  int folds = kDefaultFolds;
  std::uint64_t seed = 1;
  double learning_rate = 0.01;
  SubtractiveClusteringConfig clustering{0.5, 1.5, 0.5, 0.15, 6};
};

/// Normalized firing strengths of every rule for one standardized input.
std::vector<double> normalized_firing(const NfModel& model, std::span<const double> standardized);

/// Least-squares design matrix: for rule r, columns r*(D+1) .. r*(D+1)+D hold
/// wbar_r * x_1 .. wbar_r * x_D, wbar_r.
Matrix consequent_design(const NfModel& model, const Matrix& standardized);

/// Minimum-norm least-squares solution of A theta = y.
std::vector<double> least_squares(const Matrix& a, std::span<const double> y);

/// Hybrid training on real-valued targets. Centers are given in the raw input
/// space; widths start at radius * range / sqrt(8) per standardized input.
/// Each epoch solves the consequents by least squares, records the loss, then
/// takes one gradient step on the membership parameters.
NfModel anfis_fit(const Matrix& x, std::span<const double> y, const Matrix& centers, int epochs,
                  double radius, double learning_rate, const EpochObserver& observe = {});

/// Cross-validated regression variant: clusters each training fold, picks the
/// stopping epoch, then refits on all data.
std::pair<NfModel, TrainReport> anfis_train(const Matrix& x, std::span<const double> y,
                                            const AnfisConfig& cfg);

/// Classifier entry point: requires binary labels with both classes present.
std::pair<NfModel, TrainReport> anfis_train(const Matrix& x, std::span<const int> labels,
                                            const AnfisConfig& cfg);

/// TSK inference clamped to [0, 1].
double nf_predict(const NfModel& model, std::span<const double> x);

}  // namespace skinshape
