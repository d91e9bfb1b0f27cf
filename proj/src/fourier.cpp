#include "skinshape/fourier.hpp"

#include <cmath>
#include <mutex>

#include <fftw3.h>

#include "skinshape/error.hpp"

namespace skinshape {

namespace {

// FFTW's planner is not reentrant; execution on a private plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<Complex> transform(std::span<const Complex> input, int sign) {
  const int n = static_cast<int>(input.size());
  std::vector<Complex> in(input.begin(), input.end());
  std::vector<Complex> out(input.size());
  if (n == 0) return out;
  auto* in_ptr = reinterpret_cast<fftw_complex*>(in.data());
  auto* out_ptr = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(n, in_ptr, out_ptr, sign, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw Error("FFT planning failed");
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace

std::vector<Complex> to_complex(const BoundarySequence& boundary) {
  std::vector<Complex> s;
  s.reserve(boundary.size());
  for (const Point& p : boundary.points) s.emplace_back(p.x, p.y);
  return s;
}

DescriptorSet fourier_descriptors(std::span<const Complex> samples) {
  return {transform(samples, FFTW_FORWARD)};
}

DescriptorSet fourier_descriptors(const BoundarySequence& boundary) {
  const auto s = to_complex(boundary);
  return fourier_descriptors(s);
}

std::array<double, kDescriptorCount> normalize_descriptors(const DescriptorSet& d) {
  const std::size_t k = d.size();
  if (k < 2) throw DegenerateContour();
  double energy = 0.0;
  for (const Complex& c : d.coefficients) energy += std::abs(c);
  const double scale = std::abs(d.coefficients[1]);
  if (!(scale > 1e-12 * energy)) throw DegenerateContour();

  std::array<double, kDescriptorCount> out{};
  for (int i = 0; i < kDescriptorCount; ++i) {
    const auto u = static_cast<std::size_t>(kDescriptorIndices[i]);
    out[i] = u < k ? std::abs(d.coefficients[u]) / scale : 0.0;
  }
  return out;
}

std::vector<Complex> reconstruct_boundary(const DescriptorSet& d, std::size_t m) {
  const std::size_t k = d.size();
  if (m < 1 || m > k) throw Error("reconstruction order must lie in [1, K]");
  std::vector<Complex> kept(k, Complex{});
  for (std::size_t u = 0; u < m; ++u) kept[u] = d.coefficients[u];
  for (std::size_t u = k - m + 1; u < k; ++u) kept[u] = d.coefficients[u];
  auto points = transform(kept, FFTW_BACKWARD);
  const double inv = 1.0 / static_cast<double>(k);
  for (Complex& p : points) p *= inv;
  return points;
}

}  // namespace skinshape
