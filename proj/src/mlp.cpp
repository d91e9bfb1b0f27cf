#include "skinshape/mlp.hpp"

#include <cmath>

#include "skinshape/error.hpp"
#include "skinshape/rng.hpp"
#include "skinshape/scg.hpp"

namespace skinshape {

namespace {

double logistic(double a) { return 1.0 / (1.0 + std::exp(-a)); }

}  // namespace

MlpNetwork::MlpNetwork(std::size_t inputs, std::size_t hidden)
    : inputs_(inputs), hidden_(hidden), params_(hidden * inputs + 2 * hidden + 1, 0.0) {}

MlpNetwork::MlpNetwork(std::size_t inputs, std::size_t hidden, std::vector<double> params)
    : inputs_(inputs), hidden_(hidden), params_(std::move(params)) {
  if (params_.size() != hidden * inputs + 2 * hidden + 1) throw Error("MLP parameter count mismatch");
}

double MlpNetwork::forward(std::span<const double> p, std::span<const double> x) const {
  const double* w1 = p.data();
  const double* b1 = w1 + hidden_ * inputs_;
  const double* w2 = b1 + hidden_;
  const double b2 = w2[hidden_];
  double out = b2;
  for (std::size_t h = 0; h < hidden_; ++h) {
    double a = b1[h];
    const double* row = w1 + h * inputs_;
    for (std::size_t i = 0; i < inputs_; ++i) a += row[i] * x[i];
    out += w2[h] * logistic(a);
  }
  return logistic(out);
}

double MlpNetwork::loss(std::span<const double> p, const Matrix& x, std::span<const double> y,
                        std::span<double> grad) const {
  const double* w1 = p.data();
  const double* b1 = w1 + hidden_ * inputs_;
  const double* w2 = b1 + hidden_;
  const double b2 = w2[hidden_];
  const bool want_grad = !grad.empty();
  if (want_grad) std::fill(grad.begin(), grad.end(), 0.0);
  double* g_w1 = want_grad ? grad.data() : nullptr;
  double* g_b1 = want_grad ? g_w1 + hidden_ * inputs_ : nullptr;
  double* g_w2 = want_grad ? g_b1 + hidden_ : nullptr;

  const double n = static_cast<double>(x.rows());
  std::vector<double> z(hidden_);
  double sse = 0.0;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto xr = x.row(r);
    double a_out = b2;
    for (std::size_t h = 0; h < hidden_; ++h) {
      double a = b1[h];
      const double* row = w1 + h * inputs_;
      for (std::size_t i = 0; i < inputs_; ++i) a += row[i] * xr[i];
      z[h] = logistic(a);
      a_out += w2[h] * z[h];
    }
    const double o = logistic(a_out);
    const double err = o - y[r];
    sse += err * err;
    if (!want_grad) continue;
    const double delta_out = 2.0 * err / n * o * (1.0 - o);
    for (std::size_t h = 0; h < hidden_; ++h) {
      g_w2[h] += delta_out * z[h];
      const double delta_h = delta_out * w2[h] * z[h] * (1.0 - z[h]);
      g_b1[h] += delta_h;
      double* g_row = g_w1 + h * inputs_;
      for (std::size_t i = 0; i < inputs_; ++i) g_row[i] += delta_h * xr[i];
    }
    g_w2[hidden_] += delta_out;
  }
  return sse / n;
}

MlpNetwork mlp_initialize(std::size_t inputs, std::size_t hidden, std::uint64_t seed) {
  MlpNetwork net(inputs, hidden);
  Rng rng(seed);
  for (double& w : net.params()) w = rng.uniform(-0.5, 0.5);
  return net;
}

MlpModel mlp_fit(const Matrix& x, std::span<const double> y, std::size_t hidden, int epochs,
                 std::uint64_t seed, const EpochObserver& observe) {
  if (x.rows() == 0) throw Error("MLP training set is empty");
  if (y.size() != x.rows()) throw DimensionMismatch(x.rows(), y.size());
  MlpModel model;
  model.standardizer = Standardizer::fit(x);
  const Matrix xs = model.standardizer.apply(x);
  model.network = mlp_initialize(x.cols(), hidden, seed);

  const MlpNetwork& net = model.network;
  ScaledConjugateGradient scg(
      [&](std::span<const double> w, std::span<double> g) { return net.loss(w, xs, y, g); },
      model.network.params());
  for (int e = 0; e < epochs && !scg.converged(); ++e) {
    scg.iterate();
    if (observe) {
      const auto& w = scg.weights();
      observe(scg.loss(), [&](std::span<const double> row) {
        return net.forward(w, model.standardizer.apply(row));
      });
    }
  }
  model.network.params() = scg.weights();
  return model;
}

void require_binary_labels(std::span<const int> labels) {
  bool pos = false;
  bool neg = false;
  for (int l : labels) {
    if (l == 1) {
      pos = true;
    } else if (l == 0) {
      neg = true;
    } else {
      throw Error("labels must be 0 or 1");
    }
  }
  if (!pos || !neg) throw DegenerateLabels();
}

std::pair<MlpModel, TrainReport> mlp_train(const Matrix& x, std::span<const int> labels,
                                           const MlpConfig& cfg) {
  if (labels.size() != x.rows()) throw DimensionMismatch(x.rows(), labels.size());
  require_binary_labels(labels);
  if (x.rows() < static_cast<std::size_t>(cfg.folds) || cfg.folds < 2) {
    throw Error("MLP training needs folds >= 2 and at least one row per fold");
  }
  const std::vector<double> y(labels.begin(), labels.end());

  TrainReport report = cross_validate(
      x, y, labels, cfg.folds, cfg.epochs, cfg.seed,
      [&](const Matrix& xt, std::span<const double> yt, int epochs, std::uint64_t seed,
          const EpochObserver& observe) { mlp_fit(xt, yt, cfg.hidden, epochs, seed, observe); });

  // The full-length run only feeds the training curve; the returned model
  // replays the same trajectory up to the selected epoch.
  const std::uint64_t final_seed = derive_seed(cfg.seed, 0xF1A1);
  mlp_fit(x, y, cfg.hidden, cfg.epochs, final_seed,
          [&](double loss, const Predictor&) { report.train_loss.push_back(loss); });
  MlpModel model = mlp_fit(x, y, cfg.hidden, report.selected_epoch, final_seed);
  return {std::move(model), std::move(report)};
}

double mlp_predict(const MlpModel& model, std::span<const double> x) {
  if (x.size() != model.dimension()) throw DimensionMismatch(model.dimension(), x.size());
  return model.network.forward(model.standardizer.apply(x));
}

}  // namespace skinshape
