#include "skinshape/signature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace skinshape {

namespace {

constexpr int N = kSignatureBins;

std::array<double, N> smooth(const std::array<double, N>& s) {
  constexpr int half = kPeakSmoothingWindow / 2;
  std::array<double, N> out{};
  for (int i = 0; i < N; ++i) {
    double acc = 0.0;
    for (int d = -half; d <= half; ++d) acc += s[(i + d + N) % N];
    out[i] = acc / kPeakSmoothingWindow;
  }
  return out;
}

}  // namespace

Signature boundary_signature(double cx, double cy, const BoundarySequence& boundary) {
  std::array<double, N> sum{};
  std::array<int, N> count{};
  for (const Point& p : boundary.points) {
    const double dx = p.x - cx;
    const double dy = cy - p.y;  // y-up
    double deg = std::atan2(dy, dx) * 180.0 / std::numbers::pi;
    if (deg < 0.0) deg += 360.0;
    const int bin = static_cast<int>(std::floor(deg + 0.5)) % N;
    sum[bin] += std::hypot(dx, dy);
    ++count[bin];
  }

  Signature sig;
  std::vector<int> filled;
  for (int i = 0; i < N; ++i) {
    if (count[i] > 0) {
      sig.samples[i] = sum[i] / count[i];
      filled.push_back(i);
    }
  }
  if (!filled.empty()) {
    for (std::size_t f = 0; f < filled.size(); ++f) {
      const int a = filled[f];
      const int b = filled[(f + 1) % filled.size()];
      const int gap = (b - a + N) % N == 0 ? N : (b - a + N) % N;
      for (int step = 1; step < gap; ++step) {
        const double t = static_cast<double>(step) / gap;
        sig.samples[(a + step) % N] = (1.0 - t) * sig.samples[a] + t * sig.samples[b];
      }
    }
  }
  double total = 0.0;
  for (double r : sig.samples) total += r;
  sig.mean_radius = total / N;
  sig.peak_count = count_signature_peaks(sig);
  return sig;
}

Signature boundary_signature(const RegionSet& regions, int region_id, const BoundarySequence& boundary) {
  const Region& r = regions.region(region_id);
  return boundary_signature(r.cx, r.cy, boundary);
}

int count_signature_peaks(const Signature& signature) {
  const auto s = smooth(signature.samples);

  // Collapse circular runs of equal values so plateaus behave as one sample.
  int first = 0;
  while (first < N && s[first] == s[(first + N - 1) % N]) ++first;
  if (first == N) return 0;  // constant
  std::vector<double> runs;
  for (int i = 0; i < N; ++i) {
    const double v = s[(first + i) % N];
    if (runs.empty() || v != runs.back()) runs.push_back(v);
  }
  const int r = static_cast<int>(runs.size());
  if (r < 2) return 0;

  const double min_prominence = kPeakRelativeProminence * signature.mean_radius;
  int peaks = 0;
  for (int i = 0; i < r; ++i) {
    const double v = runs[i];
    if (!(runs[(i + r - 1) % r] < v && runs[(i + 1) % r] < v)) continue;
    double left_min = v;
    for (int j = 1; j < r; ++j) {
      const double w = runs[(i - j + r) % r];
      if (w > v) break;
      left_min = std::min(left_min, w);
    }
    double right_min = v;
    for (int j = 1; j < r; ++j) {
      const double w = runs[(i + j) % r];
      if (w > v) break;
      right_min = std::min(right_min, w);
    }
    if (v - std::max(left_min, right_min) >= min_prominence) ++peaks;
  }
  return peaks;
}

}  // namespace skinshape
