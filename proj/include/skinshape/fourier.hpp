#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "skinshape/boundary.hpp"

namespace skinshape {

using Complex = std::complex<double>;

inline constexpr int kDescriptorCount = 10;

/// Indices of the coefficients kept as features; index 1 is the scale reference.
inline constexpr std::array<int, kDescriptorCount> kDescriptorIndices = {0, 2, 3, 4, 5, 6, 7, 8, 9, 10};

/// a(u) = sum_k s(k) exp(-j 2 pi u k / K), u = 0..K-1, with no 1/K factor.
struct DescriptorSet {
  std::vector<Complex> coefficients;
  std::size_t size() const { return coefficients.size(); }
};

/// s(k) = x(k) + j y(k).
std::vector<Complex> to_complex(const BoundarySequence& boundary);

DescriptorSet fourier_descriptors(const BoundarySequence& boundary);
DescriptorSet fourier_descriptors(std::span<const Complex> samples);

/// |a(u)| / |a(1)| for u in {0, 2..10}. Indices past K-1 read as zero.
/// Throws DegenerateContour when |a(1)| vanishes.
std::array<double, kDescriptorCount> normalize_descriptors(const DescriptorSet& d);

/// Inverse transform (with the 1/K factor) of the symmetric low-pass
/// {0..m-1} U {K-m+1..K-1}; returns K points. Requires 1 <= m <= K.
std::vector<Complex> reconstruct_boundary(const DescriptorSet& d, std::size_t m);

}  // namespace skinshape
