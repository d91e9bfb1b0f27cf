#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "skinshape/matrix.hpp"

namespace skinshape {

struct SofmConfig {
  int rows = 4;
  int cols = 4;
  int epochs = 50;
  std::uint64_t seed = 1;
  double sigma_end = 0.5;
  double rate_start = 0.5;
  double rate_end = 0.01;
};

/// Distance on a hexagonal lattice stored in odd-row offset layout
/// (odd rows shifted half a cell right), via axial coordinates.
int hex_distance(int row_a, int col_a, int row_b, int col_b);

/// Kohonen map on a hexagonal grid. Neuron n sits at (n / cols, n % cols).
class SofmGrid {
 public:
  SofmGrid() = default;
  SofmGrid(int rows, int cols, Matrix weights, bool trained);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t neurons() const { return weights_.rows(); }
  std::size_t dimension() const { return weights_.cols(); }
  bool trained() const { return trained_; }
  const Matrix& weights() const { return weights_; }
  Matrix& weights() { return weights_; }

  /// Nearest neuron by Euclidean distance; lowest index on ties.
  std::size_t winner(std::span<const double> x) const;
  int grid_distance(std::size_t a, std::size_t b) const;

  friend bool operator==(const SofmGrid&, const SofmGrid&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  Matrix weights_;
  bool trained_ = false;
};

/// Sequential Kohonen training. Neurons start at randomly drawn data rows;
/// each epoch visits the rows in a fresh seeded order. The Gaussian
/// neighborhood width falls linearly from max(rows, cols)/2 to sigma_end and
/// the learning rate from rate_start to rate_end over all updates.
SofmGrid train_sofm(const Matrix& data, const SofmConfig& cfg);

/// One rows x cols plane per input component. Throws for an untrained grid.
std::vector<Matrix> weight_planes(const SofmGrid& grid);

/// Population variance of each input component across neurons.
std::vector<double> plane_variances(const SofmGrid& grid);

}  // namespace skinshape
