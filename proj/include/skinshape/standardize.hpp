#pragma once

#include <span>
#include <vector>

#include "skinshape/matrix.hpp"

namespace skinshape {

/// Per-feature z-scoring. Zero-variance features map to 0.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer fit(const Matrix& x);

  std::size_t dimension() const { return mean.size(); }
  std::vector<double> apply(std::span<const double> x) const;
  Matrix apply(const Matrix& x) const;

  friend bool operator==(const Standardizer&, const Standardizer&) = default;
};

}  // namespace skinshape
