#include <doctest.h>

#include <filesystem>
#include <map>

#include "oracles.hpp"
#include "shapes.hpp"
#include "skinshape/components.hpp"
#include "skinshape/error.hpp"
#include "skinshape/morphology.hpp"
#include "skinshape/rng.hpp"
#include "skinshape/skin.hpp"
#include "skinshape/table.hpp"

using namespace skinshape;

namespace {

BinaryMask random_mask(int w, int h, double density, Rng& rng) {
  BinaryMask m(w, h);
  for (auto& b : m.bits) b = rng.uniform() < density;
  return m;
}

SkinMask as_skin(const BinaryMask& m) {
  SkinMask s;
  s.bits = m;
  s.prob.assign(m.bits.size(), 0.25);
  return s;
}

}  // namespace

TEST_SUITE("skin-model") {
  TEST_CASE("histogram training quantizes by channel * bins / 256") {
    const Rgb skin[] = {{224, 160, 128}};
    const Rgb other[] = {{32, 64, 32}};
    const SkinHistogramModel m = train_skin_histogram(skin, other, 32);
    const std::size_t sk = (28 * 32 + 20) * 32 + 16;
    const std::size_t ns = (4 * 32 + 8) * 32 + 4;
    CHECK(m.cell_index(skin[0]) == sk);
    CHECK(m.cell_index(other[0]) == ns);
    CHECK(m.skin_counts()[sk] == 1);
    CHECK(m.nonskin_counts()[ns] == 1);
    CHECK(m.skin_total() == 1);
    CHECK(m.nonskin_total() == 1);
  }

  TEST_CASE("identical streams give likelihood ratio one") {
    Rng rng(5);
    std::vector<Rgb> px(300);
    for (auto& p : px) p = {static_cast<std::uint8_t>(rng.below(256)), static_cast<std::uint8_t>(rng.below(256)), 7};
    const SkinHistogramModel m = train_skin_histogram(px, px, 16);
    for (int i = 0; i < 50; ++i) {
      const Rgb c{static_cast<std::uint8_t>(rng.below(256)), static_cast<std::uint8_t>(rng.below(256)),
                  static_cast<std::uint8_t>(rng.below(256))};
      CHECK(m.likelihood_ratio(c) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("bad training input is rejected") {
    const Rgb one[] = {{1, 2, 3}};
    CHECK_THROWS_AS(train_skin_histogram(one, {}, 32), Error);
    CHECK_THROWS_AS(train_skin_histogram({}, one, 32), Error);
    CHECK_THROWS_AS(train_skin_histogram(one, one, 20), Error);
    CHECK_NOTHROW(train_skin_histogram(one, one, 64));
  }

  TEST_CASE("posterior with add-one smoothing") {
    const std::size_t n = 32 * 32 * 32;
    std::vector<std::uint32_t> sk(n), ns(n);
    sk[10] = 9;
    sk[11] = 1;
    ns[12] = 10;
    const SkinHistogramModel m(32, sk, ns);
    const Rgb in_10{0, 0, 10 * 8};
    REQUIRE(m.cell_index(in_10) == 10);
    CHECK(m.posterior(in_10) == doctest::Approx(10.0 / 11.0).epsilon(1e-12));
    // Cell 11 has one skin and zero non-skin counts: (1+1) vs (0+1).
    CHECK(m.posterior(Rgb{0, 0, 11 * 8}) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    // Untouched cell: both smoothed likelihoods equal.
    CHECK(m.posterior(Rgb{255, 255, 255}) == doctest::Approx(0.5));
  }

  TEST_CASE("probability map stays strictly inside (0, 1)") {
    Rng rng(8);
    std::vector<Rgb> a(2000), b(100);
    for (auto& p : a) p = {200, static_cast<std::uint8_t>(rng.below(256)), 100};
    for (auto& p : b) p = {10, 10, static_cast<std::uint8_t>(rng.below(256))};
    const SkinHistogramModel m = train_skin_histogram(a, b);
    RasterImage img(32, 32);
    for (auto& p : img.pixels()) p = a[rng.below(a.size())];
    img.at(0, 0) = b[0];
    const ProbabilityMap pm = skin_probability_map(img, m);
    REQUIRE(pm.values.size() == 32u * 32u);
    for (double v : pm.values) {
      CHECK(v > 0.0);
      CHECK(v < 1.0);
    }
  }

  TEST_CASE("threshold_mask") {
    ProbabilityMap pm{3, 1, {0.4, 0.5, 0.6}};
    const SkinMask s = threshold_mask(pm, 0.5);
    CHECK(s.bits.bits == std::vector<std::uint8_t>{0, 1, 1});
    CHECK(s.prob == pm.values);
    ProbabilityMap high{4, 4, std::vector<double>(16, 0.9)};
    CHECK(threshold_mask(high, 0.5).bits.count() == 16);
    ProbabilityMap low{4, 4, std::vector<double>(16, 0.01)};
    CHECK(threshold_mask(low, 0.0).bits.count() == 16);
    CHECK_THROWS_AS(threshold_mask(low, 1.5), Error);
    CHECK_THROWS_AS(threshold_mask(low, -0.1), Error);
  }

  TEST_CASE("binary histogram interchange") {
    const Rgb skin[] = {{224, 160, 128}, {200, 140, 110}};
    const Rgb other[] = {{32, 64, 32}};
    const SkinHistogramModel m = train_skin_histogram(skin, other, 16);
    const auto p = std::filesystem::temp_directory_path() / "skinshape_hist.bin";
    write_skin_histogram(m, p);
    const std::string bytes = read_file(p);
    CHECK(bytes.size() == 16 + 2 * 4 * 16 * 16 * 16);
    CHECK(bytes.substr(0, 4) == "SKHM");
    CHECK(static_cast<unsigned char>(bytes[4]) == 16);
    CHECK(static_cast<unsigned char>(bytes[8]) == 2);
    CHECK(read_skin_histogram(p) == m);
    write_file(p, bytes.substr(0, 40));
    CHECK_THROWS_AS(read_skin_histogram(p), Error);
  }
}

TEST_SUITE("morphology") {
  TEST_CASE("disk radius") {
    CHECK(disk_radius(300, 450, 75) == 10);
    CHECK(disk_radius(800, 700, 100) == 15);
    CHECK(disk_radius(8, 8, 100) == 1);
    CHECK(disk_radius(125, 0, 100) == 1);  // 1.25
    CHECK(disk_radius(150, 0, 100) == 2);  // 1.5 rounds up
  }

  TEST_CASE("disk radius is monotone") {
    int prev = 0;
    for (int s = 16; s < 3000; s += 7) {
      const int r = disk_radius(s / 2, s - s / 2, 75);
      CHECK(r >= prev);
      prev = r;
    }
    int last = 1000;
    for (double c = 10; c < 400; c += 3.5) {
      const int r = disk_radius(640, 480, c);
      CHECK(r <= last);
      last = r;
    }
  }

  TEST_CASE("empty mask stays empty") {
    const BinaryMask z(30, 20);
    CHECK(morph_open(z, 3) == z);
    CHECK(morph_close(z, 3) == z);
    CHECK(refine(as_skin(z), {}, 30, 20).bits == z);
  }

  TEST_CASE("opening removes an isolated pixel") {
    BinaryMask m(15, 15);
    m.at(7, 7) = 1;
    CHECK(morph_open(m, 2).count() == 0);
  }

  TEST_CASE("closing fills a hole") {
    BinaryMask m = shapes::rect(30, 30, 5, 5, 24, 24);
    m.at(14, 14) = 0;
    const BinaryMask c = morph_close(m, 2);
    CHECK(c.at(14, 14) == 1);
    CHECK(c == oracle::close(m, 2));
    CHECK(c == shapes::rect(30, 30, 5, 5, 24, 24));
  }

  TEST_CASE("erode and dilate match the structuring-element oracle") {
    Rng rng(21);
    for (int t = 0; t < 40; ++t) {
      const int w = rng.range(1, 25), h = rng.range(1, 25), r = rng.range(1, 4);
      const BinaryMask m = random_mask(w, h, rng.uniform(0.2, 0.9), rng);
      CHECK(erode(m, r) == oracle::erode(m, r));
      CHECK(dilate(m, r) == oracle::dilate(m, r));
      CHECK(morph_open(m, r) == oracle::open(m, r));
      CHECK(morph_close(m, r) == oracle::close(m, r));
    }
  }

  TEST_CASE("border pixels erode away") {
    const BinaryMask full(10, 10, 1);
    const BinaryMask e = erode(full, 1);
    CHECK(e.at(0, 5) == 0);
    CHECK(e.at(5, 5) == 1);
    CHECK(e.count() == 64);
  }

  TEST_CASE("skin mask overloads keep prob") {
    const SkinMask s = as_skin(shapes::disk(40, 40, 20, 20, 10));
    const SkinMask o = morph_open(s, 2);
    CHECK(o.prob == s.prob);
    CHECK(morph_close(s, 2).prob == s.prob);
  }

  TEST_CASE("refine removes salt noise and fills pinholes") {
    Rng rng(3);
    const int w = 120, h = 90;
    const BinaryMask blob = shapes::disk(w, h, 60, 45, 30);
    BinaryMask noisy = blob;
    for (auto& b : noisy.bits)
      if (rng.uniform() < 0.01) b = !b;
    const MorphologyConfig cfg;
    const int ro = disk_radius(w, h, cfg.c_open), rc = disk_radius(w, h, cfg.c_close);
    const SkinMask r = refine(as_skin(noisy), cfg, w, h);
    CHECK(r.bits == morph_close(morph_open(noisy, ro), rc));
    // Specks outside are gone; isolated pinholes inside are filled.
    int noisy_holes = 0, refined_holes = 0;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const double d = std::hypot(x - 60.0, y - 45.0);
        if (d > 33) CHECK(r.bits.at(x, y) == 0);
        if (d < 27) {
          noisy_holes += !noisy.at(x, y);
          refined_holes += !r.bits.at(x, y);
        }
      }
    CHECK(refined_holes < noisy_holes / 2);
    BinaryMask pin = blob;
    pin.at(60, 45) = 0;
    pin.at(50, 40) = 0;
    CHECK(refine(as_skin(pin), cfg, w, h).bits.at(60, 45) == 1);
    CHECK(refine(as_skin(pin), cfg, w, h).bits.at(50, 40) == 1);
  }

  TEST_CASE("large clean disk changes only in a thin band") {
    const int w = 200, h = 200;
    const BinaryMask d = shapes::disk(w, h, 100, 100, 70);
    const SkinMask r = refine(as_skin(d), {}, w, h);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        if (r.bits.at(x, y) == d.at(x, y)) continue;
        CHECK(std::fabs(std::hypot(x - 100.0, y - 100.0) - 70.0) <= 1.5);
      }
  }

  TEST_CASE("open and close laws on random grids") {
    Rng rng(99);
    for (int t = 0; t < 30; ++t) {
      const int r = rng.range(1, 3);
      const BinaryMask m = random_mask(rng.range(5, 30), rng.range(5, 30), rng.uniform(0.3, 0.8), rng);
      const BinaryMask o = morph_open(m, r), c = morph_close(m, r);
      CHECK(morph_open(o, r) == o);
      CHECK(morph_close(c, r) == c);
      CHECK(oracle::subset(o, m));
      CHECK(oracle::subset(m, c));
    }
  }
}

TEST_SUITE("components") {
  TEST_CASE("two disjoint squares") {
    BinaryMask m = shapes::rect(12, 6, 0, 0, 2, 2);
    for (int y = 0; y < 3; ++y)
      for (int x = 6; x < 9; ++x) m.at(x, y) = 1;
    const RegionSet rs = label_components(m);
    REQUIRE(rs.regions.size() == 2);
    CHECK(rs.regions[0].area == 9);
    CHECK(rs.regions[1].area == 9);
    CHECK(rs.regions[0].id == 1);
    CHECK(rs.regions[0].perimeter == 8);
    CHECK(rs.regions[0].cx == doctest::Approx(1.0));
    CHECK(rs.regions[1].bbox == BoundingBox{6, 0, 8, 2});
  }

  TEST_CASE("corner contact joins regions") {
    BinaryMask m(6, 6);
    for (int y = 0; y < 2; ++y)
      for (int x = 0; x < 2; ++x) {
        m.at(x, y) = 1;
        m.at(x + 2, y + 2) = 1;
      }
    CHECK(label_components(m).regions.size() == 1);
  }

  TEST_CASE("checkerboard is one region") {
    BinaryMask m(4, 4);
    for (int y = 0; y < 4; ++y)
      for (int x = 0; x < 4; ++x) m.at(x, y) = (x + y) % 2;
    const RegionSet rs = label_components(m);
    REQUIRE(rs.regions.size() == 1);
    CHECK(rs.regions[0].area == 8);
    CHECK(rs.regions[0].perimeter == 8);
  }

  TEST_CASE("largest component") {
    BinaryMask m(40, 10);
    // Areas 40 (id 1), 90 (id 2), 7 (id 3) in raster order of first pixels.
    for (int i = 0; i < 40; ++i) m.at(i % 8, i / 8) = 1;
    for (int i = 0; i < 90; ++i) m.at(10 + i % 10, i / 10) = 1;
    for (int i = 0; i < 7; ++i) m.at(25 + i, 0) = 1;
    const RegionSet rs = label_components(m);
    REQUIRE(rs.regions.size() == 3);
    CHECK(rs.region(*largest_component(rs)).area == 90);
    CHECK(rs.regions[0].area == 90);
    CHECK(rs.regions[2].area == 7);

    BinaryMask tie(30, 5);
    for (int i = 0; i < 50; ++i) {
      tie.at(i % 10, i / 10) = 1;
      tie.at(15 + i % 10, i / 10) = 1;
    }
    const RegionSet t = label_components(tie);
    CHECK(*largest_component(t) == 1);
    CHECK_FALSE(largest_component(label_components(BinaryMask(5, 5))).has_value());
    CHECK_THROWS_AS(t.region(7), Error);
  }

  TEST_CASE("labels partition the mask like the union-find oracle") {
    Rng rng(12);
    for (int t = 0; t < 25; ++t) {
      const BinaryMask m = random_mask(rng.range(1, 40), rng.range(1, 40), rng.uniform(0.1, 0.7), rng);
      const RegionSet rs = label_components(m);
      int count = 0;
      const auto roots = oracle::components(m, count);
      REQUIRE(rs.regions.size() == static_cast<std::size_t>(count));
      CHECK(rs.total_area() == m.count());
      // Labels and oracle roots must be in one-to-one correspondence.
      std::map<int, int> to_root, to_label;
      for (std::size_t i = 0; i < m.bits.size(); ++i) {
        CHECK((rs.labels[i] != 0) == (m.bits[i] != 0));
        if (!m.bits[i]) continue;
        CHECK(to_root.try_emplace(rs.labels[i], roots[i]).first->second == roots[i]);
        CHECK(to_label.try_emplace(roots[i], rs.labels[i]).first->second == rs.labels[i]);
      }
      for (std::size_t k = 1; k < rs.regions.size(); ++k) CHECK(rs.regions[k - 1].area >= rs.regions[k].area);
      for (const Region& r : rs.regions) {
        CHECK(r.pixels.size() == r.area);
        for (const Point& p : r.pixels) CHECK(rs.label(p.x, p.y) == r.id);
        std::size_t perim = 0;
        for (const Point& p : r.pixels) {
          const bool inner = m.get(p.x - 1, p.y) && m.get(p.x + 1, p.y) && m.get(p.x, p.y - 1) && m.get(p.x, p.y + 1);
          perim += !inner;
        }
        CHECK(r.perimeter == perim);
      }
    }
  }

  TEST_CASE("rectangle perimeter pixels") {
    const RegionSet rs = label_components(shapes::rect(20, 20, 2, 3, 12, 9));
    CHECK(rs.regions[0].perimeter == 2 * 11 + 2 * 7 - 4);
  }
}
