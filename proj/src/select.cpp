#include "skinshape/select.hpp"

#include <cmath>

#include "skinshape/error.hpp"

namespace skinshape {

CorrelationResult correlation_matrix(const Matrix& data) {
  if (data.rows() < 2) throw Error("correlation needs at least two rows");
  const std::size_t d = data.cols();
  const double n = static_cast<double>(data.rows());
  std::vector<double> mean(d, 0.0), sd(d, 0.0);
  for (std::size_t r = 0; r < data.rows(); ++r) {
    for (std::size_t c = 0; c < d; ++c) mean[c] += data(r, c);
  }
  for (double& m : mean) m /= n;
  for (std::size_t r = 0; r < data.rows(); ++r) {
    for (std::size_t c = 0; c < d; ++c) sd[c] += (data(r, c) - mean[c]) * (data(r, c) - mean[c]);
  }
  CorrelationResult out{Matrix(d, d, 0.0), std::vector<bool>(d, false)};
  for (std::size_t c = 0; c < d; ++c) {
    sd[c] = std::sqrt(sd[c]);
    out.zero_variance[c] = !(sd[c] > 1e-12 * std::max(1.0, std::fabs(mean[c]) * std::sqrt(n)));
    out.rho(c, c) = 1.0;
  }
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a + 1; b < d; ++b) {
      double v = 0.0;
      if (!out.zero_variance[a] && !out.zero_variance[b]) {
        double cov = 0.0;
        for (std::size_t r = 0; r < data.rows(); ++r) cov += (data(r, a) - mean[a]) * (data(r, b) - mean[b]);
        v = std::clamp(cov / (sd[a] * sd[b]), -1.0, 1.0);
      }
      out.rho(a, b) = v;
      out.rho(b, a) = v;
    }
  }
  return out;
}

std::string to_string(DropReason reason) {
  return reason == DropReason::UniformPlane ? "uniform-plane" : "correlated";
}

SelectionReport select_features(const SofmGrid& grid, const Matrix& correlation, double rho_max,
                                double var_min) {
  const std::size_t d = grid.dimension();
  if (correlation.rows() != d || correlation.cols() != d) {
    throw Error("correlation matrix does not match SOFM input dimension");
  }
  SelectionReport report;
  report.correlation = correlation;
  report.plane_variance = plane_variances(grid);

  std::vector<bool> dropped(d, false);
  for (std::size_t i = 0; i < d; ++i) {
    if (report.plane_variance[i] < var_min) {
      dropped[i] = true;
      report.dropped.push_back({i, DropReason::UniformPlane, i, 0.0});
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      if (dropped[i] || dropped[j]) continue;
      const double rho = correlation(i, j);
      if (!(std::fabs(rho) > rho_max)) continue;
      const double vi = report.plane_variance[i];
      const double vj = report.plane_variance[j];
      const std::size_t victim = vi < vj ? i : j;
      const std::size_t keeper = victim == i ? j : i;
      dropped[victim] = true;
      report.dropped.push_back({victim, DropReason::Correlated, keeper, rho});
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (!dropped[i]) report.kept.push_back(i);
  }
  return report;
}

}  // namespace skinshape
