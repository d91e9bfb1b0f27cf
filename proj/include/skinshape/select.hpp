#pragma once

#include <string>
#include <vector>

#include "skinshape/matrix.hpp"
#include "skinshape/sofm.hpp"

namespace skinshape {

struct CorrelationResult {
  /// Pearson coefficients, symmetric with unit diagonal.
  Matrix rho;
  /// Columns with zero variance; their off-diagonal entries are 0.
  std::vector<bool> zero_variance;
};

/// Throws Error for fewer than two rows.
CorrelationResult correlation_matrix(const Matrix& data);

enum class DropReason { UniformPlane, Correlated };

std::string to_string(DropReason reason);

struct DroppedFeature {
  std::size_t index = 0;
  DropReason reason = DropReason::UniformPlane;
  /// For Correlated: the feature it duplicates.
  std::size_t partner = 0;
  double rho = 0.0;
};

struct SelectionReport {
  Matrix correlation;
  std::vector<double> plane_variance;
  std::vector<DroppedFeature> dropped;
  std::vector<std::size_t> kept;
};

inline constexpr double kDefaultRhoMax = 0.9;
inline constexpr double kDefaultVarMin = 1e-3;

/// Drops features with a near-uniform weight plane (variance < var_min),
/// then walks pairs (i < j) in order and, for |rho| > rho_max, drops the
/// member with the lower plane variance (the higher index on ties).
SelectionReport select_features(const SofmGrid& grid, const Matrix& correlation,
                                double rho_max = kDefaultRhoMax, double var_min = kDefaultVarMin);

}  // namespace skinshape
