#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "oracles.hpp"
#include "shapes.hpp"
#include "skinshape/boundary.hpp"
#include "skinshape/error.hpp"
#include "skinshape/fourier.hpp"
#include "skinshape/rng.hpp"
#include "skinshape/signature.hpp"

using namespace skinshape;

namespace {

BoundarySequence trace_largest(const BinaryMask& m) {
  const RegionSet rs = label_components(m);
  return trace_boundary(rs, *largest_component(rs));
}

Signature signature_of(const BinaryMask& m) {
  const RegionSet rs = label_components(m);
  const int id = *largest_component(rs);
  return boundary_signature(rs, id, trace_boundary(rs, id));
}

std::vector<Complex> square4() { return {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}; }

double max_abs_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_SUITE("boundary") {
  TEST_CASE("3x3 square gives an 8-point ring from the top-left pixel") {
    const BoundarySequence b = trace_largest(shapes::rect(10, 10, 2, 3, 4, 5));
    REQUIRE(b.size() == 8);
    CHECK(b.points[0] == Point{2, 3});
    CHECK(b.points[1] == Point{3, 3});  // clockwise on screen
    CHECK(signed_area(b.points) > 0);
  }

  TEST_CASE("rectangle boundary length") {
    for (auto [w, h] : {std::pair{5, 3}, {12, 7}, {2, 9}, {20, 20}}) {
      const BoundarySequence b = trace_largest(shapes::rect(30, 30, 1, 1, w, h));
      CHECK(b.size() == static_cast<std::size_t>(2 * w + 2 * h - 4));
    }
  }

  TEST_CASE("degenerate regions") {
    CHECK_THROWS_AS(trace_largest(shapes::rect(10, 10, 3, 3, 4, 3)), DegenerateBoundary);
    CHECK_THROWS_WITH(trace_largest(shapes::rect(20, 10, 1, 4, 15, 4)), "degenerate boundary");
    BinaryMask diag(10, 10);
    for (int i = 0; i < 8; ++i) diag.at(i, i) = 1;
    CHECK_THROWS_AS(trace_largest(diag), DegenerateBoundary);
  }

  TEST_CASE("traced contours are closed 8-connected chains with positive area") {
    Rng rng(4);
    for (int t = 0; t < 20; ++t) {
      const BinaryMask m = shapes::ellipse(80, 80, rng.uniform(30, 50), rng.uniform(30, 50), rng.uniform(8, 25),
                                           rng.uniform(8, 25), rng.uniform(0, 3));
      const RegionSet rs = label_components(m);
      const int id = *largest_component(rs);
      const BoundarySequence b = trace_boundary(rs, id);
      CHECK(b.size() >= 4);
      CHECK(signed_area(b.points) > 0);
      for (std::size_t k = 0; k < b.size(); ++k) {
        const Point p = b.points[k], q = b.points[(k + 1) % b.size()];
        CHECK(std::max(std::abs(p.x - q.x), std::abs(p.y - q.y)) == 1);
        CHECK(rs.label(p.x, p.y) == id);
      }
      const auto top = *std::min_element(rs.region(id).pixels.begin(), rs.region(id).pixels.end(),
                                         [](Point a, Point c) { return std::pair{a.y, a.x} < std::pair{c.y, c.x}; });
      CHECK(b.points[0] == top);
    }
  }

  TEST_CASE("boundary visits every perimeter pixel of a convex blob") {
    const BinaryMask m = shapes::disk(50, 50, 25, 25, 15);
    const RegionSet rs = label_components(m);
    const BoundarySequence b = trace_boundary(rs, 1);
    std::set<std::pair<int, int>> on;
    for (Point p : b.points) on.insert({p.x, p.y});
    for (Point p : rs.region(1).pixels) {
      const bool edge = !(m.get(p.x - 1, p.y) && m.get(p.x + 1, p.y) && m.get(p.x, p.y - 1) && m.get(p.x, p.y + 1));
      if (edge) CHECK(on.count({p.x, p.y}) == 1);
    }
  }
}

TEST_SUITE("fourier") {
  TEST_CASE("4-point square") {
    const DescriptorSet d = fourier_descriptors(square4());
    CHECK(std::abs(d.coefficients[0]) < 1e-12);
    CHECK(std::abs(d.coefficients[1]) == doctest::Approx(4 * std::sqrt(2.0)));
    CHECK(std::abs(d.coefficients[2]) < 1e-12);
    CHECK(std::abs(d.coefficients[3]) < 1e-12);
    const auto n = normalize_descriptors(d);
    for (double v : n) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
  }

  TEST_CASE("translation only moves a(0)") {
    Rng rng(2);
    std::vector<Complex> s(37);
    for (auto& z : s) z = {rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const Complex t(3.5, -2.0);
    std::vector<Complex> moved = s;
    for (auto& z : moved) z += t;
    const auto a = fourier_descriptors(s).coefficients;
    const auto b = fourier_descriptors(moved).coefficients;
    CHECK(std::abs(b[0] - a[0] - 37.0 * t) < 1e-9);
    for (std::size_t u = 1; u < a.size(); ++u) CHECK(std::abs(b[u] - a[u]) < 1e-9);
  }

  TEST_CASE("constant boundary has no AC terms and cannot be normalized") {
    const std::vector<Complex> s(12, Complex(4, 9));
    const DescriptorSet d = fourier_descriptors(s);
    for (std::size_t u = 1; u < d.size(); ++u) CHECK(std::abs(d.coefficients[u]) < 1e-9);
    CHECK_THROWS_WITH_AS(normalize_descriptors(d), "degenerate contour", DegenerateContour);
  }

  TEST_CASE("matches the definition-level DFT") {
    Rng rng(77);
    for (int t = 0; t < 12; ++t) {
      std::vector<Complex> s(static_cast<std::size_t>(rng.range(4, 300)));
      for (auto& z : s) z = {rng.uniform(-100, 100), rng.uniform(-100, 100)};
      const auto ref = oracle::dft(s);
      double scale = 0;
      for (auto z : ref) scale = std::max(scale, std::abs(z));
      CHECK(max_abs_diff(fourier_descriptors(s).coefficients, ref) / scale < 1e-9);
    }
  }

  TEST_CASE("normalized descriptors ignore scale, rotation and start point") {
    const BoundarySequence b = trace_largest(shapes::ellipse(90, 90, 45, 40, 30, 14, 0.4));
    const auto s = to_complex(b);
    const auto ref = normalize_descriptors(fourier_descriptors(s));
    std::vector<Complex> scaled = s, turned(s.size());
    for (auto& z : scaled) z *= 3.0;
    for (std::size_t k = 0; k < s.size(); ++k) turned[k] = s[(k + 11) % s.size()] * Complex(0, 1);
    const auto a = normalize_descriptors(fourier_descriptors(scaled));
    const auto c = normalize_descriptors(fourier_descriptors(turned));
    for (int i = 0; i < kDescriptorCount; ++i) {
      CHECK(a[i] == doctest::Approx(ref[i]).epsilon(1e-9));
      CHECK(c[i] == doctest::Approx(ref[i]).epsilon(1e-9));
    }
  }

  TEST_CASE("short boundaries read missing indices as zero") {
    const std::vector<Complex> s = {{0, 0}, {2, 0}, {2, 1}, {1, 2}, {0, 1}};
    const auto n = normalize_descriptors(fourier_descriptors(s));
    for (int i = 4; i < kDescriptorCount; ++i) CHECK(n[i] == 0.0);  // u = 5..10 exceed K-1
    CHECK(n[3] > 0.0);
  }

  TEST_CASE("reconstruction") {
    const BoundarySequence b = trace_largest(shapes::ellipse(140, 100, 70, 50, 60, 30, 0.2));
    const auto s = to_complex(b);
    const DescriptorSet d = fourier_descriptors(s);
    CHECK(max_abs_diff(reconstruct_boundary(d, s.size()), s) < 1e-9);
    const auto dc = reconstruct_boundary(d, 1);
    for (auto z : dc) CHECK(std::abs(z - d.coefficients[0] / static_cast<double>(s.size())) < 1e-9);
    CHECK(max_abs_diff(reconstruct_boundary(d, 10), s) < 0.05 * 120.0);
    CHECK_THROWS_AS(reconstruct_boundary(d, 0), Error);
    CHECK_THROWS_AS(reconstruct_boundary(d, s.size() + 1), Error);
  }

  TEST_CASE("parseval") {
    Rng rng(5);
    std::vector<Complex> s(257);
    for (auto& z : s) z = {rng.normal(), rng.normal()};
    const auto a = fourier_descriptors(s).coefficients;
    double es = 0, ea = 0;
    for (auto z : s) es += std::norm(z);
    for (auto z : a) ea += std::norm(z);
    CHECK(std::abs(es - ea / s.size()) / es < 1e-12);
  }
}

TEST_SUITE("signature") {
  TEST_CASE("disk signature is nearly flat") {
    const Signature sig = signature_of(shapes::disk(120, 120, 60, 60, 40));
    for (double r : sig.samples) CHECK(std::fabs(r - sig.mean_radius) <= 1.5);
    CHECK(sig.peak_count == 0);
    CHECK(count_signature_peaks(sig) == 0);
  }

  TEST_CASE("square signature") {
    // Half side 30 about the pixel-centre (50, 50).
    const Signature sig = signature_of(shapes::rect(101, 101, 20, 20, 80, 80));
    CHECK(sig.samples[0] == doctest::Approx(30.0).epsilon(0.04));
    CHECK(sig.samples[45] == doctest::Approx(30.0 * std::sqrt(2.0)).epsilon(0.04));
    CHECK(sig.samples[90] == doctest::Approx(30.0).epsilon(0.04));
    CHECK(sig.peak_count == 4);
  }

  TEST_CASE("angles follow the y-up convention") {
    // A wide horizontal bar, then a tab sticking up on screen (y smaller).
    BinaryMask m = shapes::rect(100, 100, 20, 40, 79, 59);
    for (int y = 10; y < 40; ++y)
      for (int x = 45; x < 55; ++x) m.at(x, y) = 1;
    const Signature sig = signature_of(m);
    CHECK(sig.samples[90] > sig.samples[270] + 10);
  }

  TEST_CASE("five-point star") {
    const Signature sig = signature_of(shapes::polygon(120, 120, shapes::star(60, 60, 45, 18, 5)));
    CHECK(sig.peak_count == 5);
  }

  TEST_CASE("peak counting rules") {
    Signature flat;
    flat.samples.fill(10.0);
    flat.mean_radius = 10.0;
    CHECK(count_signature_peaks(flat) == 0);

    Signature bumps = flat;
    for (int d = 0; d < 360; ++d) bumps.samples[d] = 10.0 + 3.0 * std::cos(3 * d * std::numbers::pi / 180.0);
    CHECK(count_signature_peaks(bumps) == 3);

    // A bump that wraps through 0 degrees counts once.
    Signature wrap = flat;
    for (int d = -20; d <= 20; ++d) wrap.samples[(d + 360) % 360] = 14.0;
    CHECK(count_signature_peaks(wrap) == 1);

    // Ripples below 5% of the mean radius are ignored.
    Signature small = flat;
    for (int d = 0; d < 360; ++d) small.samples[d] = 10.0 + 0.2 * std::cos(6 * d * std::numbers::pi / 180.0);
    CHECK(count_signature_peaks(small) == 0);
  }

  TEST_CASE("non-star region still yields a full signature") {
    BinaryMask u = shapes::rect(100, 100, 10, 10, 89, 29);
    for (int y = 30; y < 90; ++y)
      for (int x = 10; x < 90; ++x)
        if (x < 30 || x >= 70) u.at(x, y) = 1;
    const Signature sig = signature_of(u);
    for (double r : sig.samples) {
      CHECK(std::isfinite(r));
      CHECK(r >= 0.0);
    }
  }

  TEST_CASE("peak count is scale invariant") {
    for (double s : {1.0, 2.0}) {
      CHECK(signature_of(shapes::polygon(260, 260, shapes::star(130, 130, 40 * s, 16 * s, 5))).peak_count == 5);
      CHECK(signature_of(shapes::rect(260, 260, 100, 100, 100 + static_cast<int>(40 * s), 100 + static_cast<int>(40 * s))).peak_count == 4);
    }
  }
}
