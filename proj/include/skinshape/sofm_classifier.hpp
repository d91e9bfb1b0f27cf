#pragma once

#include <span>
#include <vector>

#include "skinshape/matrix.hpp"
#include "skinshape/sofm.hpp"
#include "skinshape/standardize.hpp"

namespace skinshape {

/// SOFM with one class label per neuron.
struct SofmClassifier {
  Standardizer standardizer;
  SofmGrid grid;
  std::vector<int> neuron_labels;

  std::size_t dimension() const { return standardizer.dimension(); }
  friend bool operator==(const SofmClassifier&, const SofmClassifier&) = default;
};

/// Trains on standardized features, labels each neuron by majority vote of
/// the samples it wins (ties go positive), and gives neurons that win nothing
/// the label of the nearest voting neuron on the hex grid.
SofmClassifier sofm_classify_train(const Matrix& x, std::span<const int> labels, const SofmConfig& cfg);

/// 0.0 or 1.0: the winning neuron's label.
double sofm_predict(const SofmClassifier& model, std::span<const double> x);

}  // namespace skinshape
