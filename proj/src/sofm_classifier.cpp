#include "skinshape/sofm_classifier.hpp"

#include <limits>

#include "skinshape/error.hpp"
#include "skinshape/mlp.hpp"

namespace skinshape {

SofmClassifier sofm_classify_train(const Matrix& x, std::span<const int> labels, const SofmConfig& cfg) {
  if (labels.size() != x.rows()) throw DimensionMismatch(x.rows(), labels.size());
  require_binary_labels(labels);
  SofmClassifier model;
  model.standardizer = Standardizer::fit(x);
  const Matrix xs = model.standardizer.apply(x);
  model.grid = train_sofm(xs, cfg);

  const std::size_t neurons = model.grid.neurons();
  std::vector<int> pos(neurons, 0), neg(neurons, 0);
  for (std::size_t r = 0; r < xs.rows(); ++r) {
    const std::size_t w = model.grid.winner(xs.row(r));
    (labels[r] == 1 ? pos : neg)[w]++;
  }
  model.neuron_labels.assign(neurons, -1);
  for (std::size_t n = 0; n < neurons; ++n) {
    if (pos[n] + neg[n] > 0) model.neuron_labels[n] = pos[n] >= neg[n] ? 1 : 0;
  }
  std::vector<int> resolved = model.neuron_labels;
  for (std::size_t n = 0; n < neurons; ++n) {
    if (model.neuron_labels[n] >= 0) continue;
    int best = std::numeric_limits<int>::max();
    for (std::size_t m = 0; m < neurons; ++m) {
      if (model.neuron_labels[m] < 0) continue;
      const int d = model.grid.grid_distance(n, m);
      if (d < best) {
        best = d;
        resolved[n] = model.neuron_labels[m];
      }
    }
  }
  model.neuron_labels = std::move(resolved);
  return model;
}

double sofm_predict(const SofmClassifier& model, std::span<const double> x) {
  if (x.size() != model.dimension()) throw DimensionMismatch(model.dimension(), x.size());
  return model.neuron_labels[model.grid.winner(model.standardizer.apply(x))] == 1 ? 1.0 : 0.0;
}

}  // namespace skinshape
