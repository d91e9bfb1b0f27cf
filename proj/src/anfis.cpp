#include "skinshape/anfis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "skinshape/error.hpp"
#include "skinshape/mlp.hpp"

namespace skinshape {

namespace {

constexpr double kMinWidth = 1e-3;

double mean_sq_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return d / static_cast<double>(a.size());
}

}  // namespace

Matrix subtractive_clustering(const Matrix& x, const SubtractiveClusteringConfig& cfg) {
  if (x.rows() == 0) throw Error("subtractive clustering needs data");
  if (!(cfg.radius > 0.0)) throw Error("cluster radius must be positive");
  const std::size_t n = x.rows();
  const double alpha = 4.0 / (cfg.radius * cfg.radius);
  const double rb = cfg.squash * cfg.radius;
  const double beta = 4.0 / (rb * rb);

  std::vector<double> potential(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double k = std::exp(-alpha * mean_sq_distance(x.row(i), x.row(j)));
      potential[i] += k;
      if (j != i) potential[j] += k;
    }
  }

  const auto argmax = [&] {
    return static_cast<std::size_t>(std::max_element(potential.begin(), potential.end()) - potential.begin());
  };
  Matrix centers;
  const auto accept = [&](std::size_t k) {
    const double pk = potential[k];
    centers.append_row(x.row(k));
    for (std::size_t j = 0; j < n; ++j) {
      potential[j] -= pk * std::exp(-beta * mean_sq_distance(x.row(k), x.row(j)));
    }
  };

  std::size_t first = argmax();
  const double p1 = potential[first];
  accept(first);
  while (cfg.max_centers == 0 || centers.rows() < cfg.max_centers) {
    const std::size_t k = argmax();
    const double pk = potential[k];
    if (pk > cfg.accept_ratio * p1) {
      accept(k);
      continue;
    }
    if (pk < cfg.reject_ratio * p1) break;
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.rows(); ++c) {
      dmin = std::min(dmin, std::sqrt(mean_sq_distance(x.row(k), centers.row(c))));
    }
    if (dmin / cfg.radius + pk / p1 >= 1.0) {
      accept(k);
    } else {
      potential[k] = 0.0;
    }
  }
  return centers;
}

std::vector<double> normalized_firing(const NfModel& model, std::span<const double> xs) {
  const std::size_t r_count = model.rules.size();
  std::vector<double> logw(r_count);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < r_count; ++r) {
    const NfRule& rule = model.rules[r];
    double l = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double z = (xs[i] - rule.center[i]) / rule.width[i];
      l -= 0.5 * z * z;
    }
    logw[r] = l;
    top = std::max(top, l);
  }
  // Product of memberships, normalized in the log domain to avoid underflow.
  double total = 0.0;
  for (double& l : logw) {
    l = std::exp(l - top);
    total += l;
  }
  for (double& l : logw) l /= total;
  return logw;
}

namespace {

double rule_output(const NfRule& rule, std::span<const double> xs) {
  double f = rule.coefficients.back();
  for (std::size_t i = 0; i < xs.size(); ++i) f += rule.coefficients[i] * xs[i];
  return f;
}

}  // namespace

double NfModel::raw_output(std::span<const double> xs) const {
  const auto wbar = normalized_firing(*this, xs);
  double out = 0.0;
  for (std::size_t r = 0; r < rules.size(); ++r) out += wbar[r] * rule_output(rules[r], xs);
  return out;
}

Matrix consequent_design(const NfModel& model, const Matrix& xs) {
  const std::size_t d = xs.cols();
  const std::size_t block = d + 1;
  Matrix a(xs.rows(), model.rules.size() * block);
  for (std::size_t n = 0; n < xs.rows(); ++n) {
    const auto row = xs.row(n);
    const auto wbar = normalized_firing(model, row);
    for (std::size_t r = 0; r < model.rules.size(); ++r) {
      for (std::size_t i = 0; i < d; ++i) a(n, r * block + i) = wbar[r] * row[i];
      a(n, r * block + d) = wbar[r];
    }
  }
  return a;
}

std::vector<double> least_squares(const Matrix& a, std::span<const double> y) {
  if (a.rows() != y.size()) throw DimensionMismatch(a.rows(), y.size());
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const RowMajor> am(a.data().data(), static_cast<Eigen::Index>(a.rows()),
                                      static_cast<Eigen::Index>(a.cols()));
  const Eigen::Map<const Eigen::VectorXd> ym(y.data(), static_cast<Eigen::Index>(y.size()));
  const Eigen::MatrixXd dense = am;
  const Eigen::VectorXd theta = dense.completeOrthogonalDecomposition().solve(ym);
  return {theta.data(), theta.data() + theta.size()};
}

NfModel anfis_fit(const Matrix& x, std::span<const double> y, const Matrix& centers, int epochs,
                  double radius, double learning_rate, const EpochObserver& observe) {
  if (x.rows() == 0) throw Error("ANFIS training set is empty");
  if (y.size() != x.rows()) throw DimensionMismatch(x.rows(), y.size());
  if (centers.rows() == 0) throw Error("ANFIS needs at least one rule");
  if (centers.cols() != x.cols()) throw DimensionMismatch(x.cols(), centers.cols());

  NfModel model;
  model.standardizer = Standardizer::fit(x);
  const Matrix xs = model.standardizer.apply(x);
  const std::size_t d = x.cols();
  const std::size_t n = x.rows();

  std::vector<double> init_width(d);
  for (std::size_t i = 0; i < d; ++i) {
    double lo = xs(0, i), hi = xs(0, i);
    for (std::size_t r = 1; r < n; ++r) {
      lo = std::min(lo, xs(r, i));
      hi = std::max(hi, xs(r, i));
    }
    const double w = radius * (hi - lo) / std::sqrt(8.0);
    init_width[i] = w > kMinWidth ? w : 1.0;
  }
  for (std::size_t c = 0; c < centers.rows(); ++c) {
    NfRule rule;
    rule.center = model.standardizer.apply(centers.row(c));
    rule.width = init_width;
    rule.coefficients.assign(d + 1, 0.0);
    model.rules.push_back(std::move(rule));
  }

  const std::size_t r_count = model.rules.size();
  const std::size_t block = d + 1;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    const Matrix a = consequent_design(model, xs);
    const auto theta = least_squares(a, y);
    for (std::size_t r = 0; r < r_count; ++r) {
      std::copy(theta.begin() + static_cast<std::ptrdiff_t>(r * block),
                theta.begin() + static_cast<std::ptrdiff_t>((r + 1) * block),
                model.rules[r].coefficients.begin());
    }

    std::vector<double> g_center(r_count * d, 0.0), g_width(r_count * d, 0.0);
    double sse = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      const auto row = xs.row(s);
      const auto wbar = normalized_firing(model, row);
      std::vector<double> f(r_count);
      double out = 0.0;
      for (std::size_t r = 0; r < r_count; ++r) {
        f[r] = rule_output(model.rules[r], row);
        out += wbar[r] * f[r];
      }
      const double err = out - y[s];
      sse += err * err;
      const double d_out = 2.0 * err / static_cast<double>(n);
      for (std::size_t r = 0; r < r_count; ++r) {
        // d out / d log w_r = wbar_r (f_r - out)
        const double d_log = d_out * wbar[r] * (f[r] - out);
        if (d_log == 0.0) continue;
        const NfRule& rule = model.rules[r];
        for (std::size_t i = 0; i < d; ++i) {
          const double diff = row[i] - rule.center[i];
          const double w2 = rule.width[i] * rule.width[i];
          g_center[r * d + i] += d_log * diff / w2;
          g_width[r * d + i] += d_log * diff * diff / (w2 * rule.width[i]);
        }
      }
    }
    if (observe) {
      observe(sse / static_cast<double>(n), [&model](std::span<const double> raw) {
        return std::clamp(model.raw_output(model.standardizer.apply(raw)), 0.0, 1.0);
      });
    }
    if (epoch + 1 == epochs) break;  // the returned model is the one just scored
    for (std::size_t r = 0; r < r_count; ++r) {
      NfRule& rule = model.rules[r];
      for (std::size_t i = 0; i < d; ++i) {
        rule.center[i] -= learning_rate * g_center[r * d + i];
        rule.width[i] = std::max(kMinWidth, rule.width[i] - learning_rate * g_width[r * d + i]);
      }
    }
  }
  return model;
}

namespace {

NfModel fit_with_clustering(const Matrix& x, std::span<const double> y, int epochs, const AnfisConfig& cfg,
                            const EpochObserver& observe) {
  const Standardizer s = Standardizer::fit(x);
  const Matrix centers_std = subtractive_clustering(s.apply(x), cfg.clustering);
  Matrix centers(centers_std.rows(), x.cols());
  for (std::size_t c = 0; c < centers.rows(); ++c) {
    for (std::size_t i = 0; i < x.cols(); ++i) centers(c, i) = centers_std(c, i) * s.scale[i] + s.mean[i];
  }
  return anfis_fit(x, y, centers, epochs, cfg.clustering.radius, cfg.learning_rate, observe);
}

std::pair<NfModel, TrainReport> train_impl(const Matrix& x, std::span<const double> y,
                                           std::span<const int> labels, const AnfisConfig& cfg) {
  if (y.size() != x.rows()) throw DimensionMismatch(x.rows(), y.size());
  TrainReport report = cross_validate(
      x, y, labels, cfg.folds, cfg.epochs, cfg.seed,
      [&](const Matrix& xt, std::span<const double> yt, int epochs, std::uint64_t,
          const EpochObserver& observe) { fit_with_clustering(xt, yt, epochs, cfg, observe); });
  fit_with_clustering(x, y, cfg.epochs, cfg,
                      [&](double loss, const Predictor&) { report.train_loss.push_back(loss); });
  NfModel model = fit_with_clustering(x, y, report.selected_epoch, cfg, {});
  return {std::move(model), std::move(report)};
}

}  // namespace

std::pair<NfModel, TrainReport> anfis_train(const Matrix& x, std::span<const double> y,
                                            const AnfisConfig& cfg) {
  return train_impl(x, y, {}, cfg);
}

std::pair<NfModel, TrainReport> anfis_train(const Matrix& x, std::span<const int> labels,
                                            const AnfisConfig& cfg) {
  if (labels.size() != x.rows()) throw DimensionMismatch(x.rows(), labels.size());
  require_binary_labels(labels);
  const std::vector<double> y(labels.begin(), labels.end());
  return train_impl(x, y, labels, cfg);
}

double nf_predict(const NfModel& model, std::span<const double> x) {
  if (x.size() != model.dimension()) throw DimensionMismatch(model.dimension(), x.size());
  return std::clamp(model.raw_output(model.standardizer.apply(x)), 0.0, 1.0);
}

}  // namespace skinshape
