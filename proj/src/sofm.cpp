#include "skinshape/sofm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "skinshape/error.hpp"
#include "skinshape/rng.hpp"

namespace skinshape {

int hex_distance(int row_a, int col_a, int row_b, int col_b) {
  const int qa = col_a - (row_a - (row_a & 1)) / 2;
  const int qb = col_b - (row_b - (row_b & 1)) / 2;
  const int dq = qa - qb;
  const int dr = row_a - row_b;
  return (std::abs(dq) + std::abs(dr) + std::abs(dq + dr)) / 2;
}

SofmGrid::SofmGrid(int rows, int cols, Matrix weights, bool trained)
    : rows_(rows), cols_(cols), weights_(std::move(weights)), trained_(trained) {
  if (rows < 1 || cols < 1) throw Error("SOFM grid needs positive dimensions");
  if (weights_.rows() != static_cast<std::size_t>(rows) * cols) {
    throw Error("SOFM weight rows must equal rows x cols");
  }
}

std::size_t SofmGrid::winner(std::span<const double> x) const {
  if (x.size() != dimension()) throw Error("SOFM input dimension mismatch");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < neurons(); ++n) {
    const auto w = weights_.row(n);
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) d += (x[i] - w[i]) * (x[i] - w[i]);
    if (d < best_d) {
      best_d = d;
      best = n;
    }
  }
  return best;
}

int SofmGrid::grid_distance(std::size_t a, std::size_t b) const {
  const int ia = static_cast<int>(a);
  const int ib = static_cast<int>(b);
  return hex_distance(ia / cols_, ia % cols_, ib / cols_, ib % cols_);
}

SofmGrid train_sofm(const Matrix& data, const SofmConfig& cfg) {
  if (data.rows() == 0 || data.cols() == 0) throw Error("SOFM training data is empty");
  if (cfg.epochs < 1) throw Error("SOFM needs at least one epoch");
  const std::size_t neurons = static_cast<std::size_t>(cfg.rows) * cfg.cols;
  Rng rng(cfg.seed);

  Matrix init(neurons, data.cols());
  for (std::size_t n = 0; n < neurons; ++n) {
    const auto src = data.row(rng.below(data.rows()));
    std::copy(src.begin(), src.end(), init.row(n).begin());
  }
  SofmGrid grid(cfg.rows, cfg.cols, std::move(init), false);

  std::vector<std::vector<int>> dist(neurons, std::vector<int>(neurons));
  for (std::size_t a = 0; a < neurons; ++a) {
    for (std::size_t b = 0; b < neurons; ++b) dist[a][b] = grid.grid_distance(a, b);
  }

  const double sigma_start = std::max(cfg.rows, cfg.cols) / 2.0;
  const std::size_t total = static_cast<std::size_t>(cfg.epochs) * data.rows();
  std::vector<std::size_t> order(data.rows());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::size_t t = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t idx : order) {
      const double frac = total > 1 ? static_cast<double>(t) / static_cast<double>(total - 1) : 1.0;
      const double sigma = sigma_start + (cfg.sigma_end - sigma_start) * frac;
      const double rate = cfg.rate_start + (cfg.rate_end - cfg.rate_start) * frac;
      const auto x = data.row(idx);
      const std::size_t win = grid.winner(x);
      for (std::size_t n = 0; n < neurons; ++n) {
        const double d = dist[win][n];
        const double h = std::exp(-d * d / (2.0 * sigma * sigma));
        const double step = rate * h;
        if (step < 1e-300) continue;
        auto w = grid.weights().row(n);
        for (std::size_t i = 0; i < x.size(); ++i) w[i] += step * (x[i] - w[i]);
      }
      ++t;
    }
  }
  return SofmGrid(cfg.rows, cfg.cols, grid.weights(), true);
}

std::vector<Matrix> weight_planes(const SofmGrid& grid) {
  if (!grid.trained()) throw Error("SOFM grid is not trained");
  std::vector<Matrix> planes;
  for (std::size_t i = 0; i < grid.dimension(); ++i) {
    Matrix plane(static_cast<std::size_t>(grid.rows()), static_cast<std::size_t>(grid.cols()));
    for (std::size_t n = 0; n < grid.neurons(); ++n) {
      plane(n / grid.cols(), n % grid.cols()) = grid.weights()(n, i);
    }
    planes.push_back(std::move(plane));
  }
  return planes;
}

std::vector<double> plane_variances(const SofmGrid& grid) {
  if (!grid.trained()) throw Error("SOFM grid is not trained");
  std::vector<double> out(grid.dimension(), 0.0);
  const double n = static_cast<double>(grid.neurons());
  for (std::size_t i = 0; i < grid.dimension(); ++i) {
    double mean = 0.0;
    for (std::size_t k = 0; k < grid.neurons(); ++k) mean += grid.weights()(k, i);
    mean /= n;
    double var = 0.0;
    for (std::size_t k = 0; k < grid.neurons(); ++k) {
      const double d = grid.weights()(k, i) - mean;
      var += d * d;
    }
    out[i] = var / n;
  }
  return out;
}

}  // namespace skinshape
