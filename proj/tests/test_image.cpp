#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "skinshape/error.hpp"
#include "skinshape/image.hpp"
#include "skinshape/rng.hpp"

using namespace skinshape;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "skinshape_test_image";
  fs::create_directories(dir);
  return dir / name;
}

void write_mat(const cv::Mat& m, const fs::path& p) { REQUIRE(cv::imwrite(p.string(), m)); }

RasterImage noise_image(int w, int h, std::uint64_t seed) {
  Rng rng(seed);
  RasterImage img(w, h);
  for (auto& p : img.pixels()) {
    p = {static_cast<std::uint8_t>(rng.below(256)), static_cast<std::uint8_t>(rng.below(256)),
         static_cast<std::uint8_t>(rng.below(256))};
  }
  return img;
}

}  // namespace

TEST_SUITE("imageio") {
  TEST_CASE("png round trip keeps size and pixels") {
    const RasterImage img = noise_image(640, 480, 3);
    const auto p = scratch("photo.png");
    save_png(img, p);
    const RasterImage back = load_image(p);
    CHECK(back.width() == 640);
    CHECK(back.height() == 480);
    CHECK(back == img);
  }

  TEST_CASE("1x1 image is too small") {
    write_mat(cv::Mat(1, 1, CV_8UC3, cv::Scalar(1, 2, 3)), scratch("tiny.png"));
    CHECK_THROWS_WITH_AS(load_image(scratch("tiny.png")), "image too small", ImageError);
    write_mat(cv::Mat(8, 7, CV_8UC3, cv::Scalar(1, 2, 3)), scratch("narrow.png"));
    CHECK_THROWS_AS(load_image(scratch("narrow.png")), ImageError);
  }

  TEST_CASE("grayscale replicates to rgb") {
    write_mat(cv::Mat(10, 12, CV_8UC1, cv::Scalar(200)), scratch("gray.png"));
    const RasterImage img = load_image(scratch("gray.png"));
    CHECK(img.width() == 12);
    CHECK(img.at(5, 5) == Rgb{200, 200, 200});
  }

  TEST_CASE("alpha is dropped and channels come back as rgb") {
    // OpenCV stores BGRA.
    write_mat(cv::Mat(9, 9, CV_8UC4, cv::Scalar(10, 20, 30, 40)), scratch("alpha.png"));
    CHECK(load_image(scratch("alpha.png")).at(0, 0) == Rgb{30, 20, 10});
  }

  TEST_CASE("bmp and jpeg decode") {
    write_mat(cv::Mat(16, 20, CV_8UC3, cv::Scalar(0, 0, 255)), scratch("red.bmp"));
    CHECK(load_image(scratch("red.bmp")).at(3, 3) == Rgb{255, 0, 0});
    write_mat(cv::Mat(16, 20, CV_8UC3, cv::Scalar(128, 128, 128)), scratch("grey.jpg"));
    const Rgb c = load_image(scratch("grey.jpg")).at(8, 8);
    CHECK(std::abs(c.r - 128) <= 2);
  }

  TEST_CASE("16-bit png is reduced to 8 bits") {
    write_mat(cv::Mat(10, 10, CV_16UC3, cv::Scalar(65535, 0, 32896)), scratch("deep.png"));
    CHECK(load_image(scratch("deep.png")).at(1, 1) == Rgb{128, 0, 255});
  }

  TEST_CASE("unsupported and corrupt inputs are rejected") {
    const std::uint8_t gif[] = {'G', 'I', 'F', '8', '9', 'a', 0, 0, 0, 0};
    CHECK_THROWS_AS(decode_image(gif), ImageError);
    std::vector<std::uint8_t> png = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a, 0, 0, 0};
    CHECK_THROWS_AS(decode_image(png), ImageError);
    CHECK_THROWS_AS(load_image(scratch("missing.png")), ImageError);
  }

  TEST_CASE("downsample sizes") {
    CHECK(downsample(RasterImage(1024, 512), 256).width() == 256);
    CHECK(downsample(RasterImage(1024, 512), 256).height() == 128);
    const RasterImage small = noise_image(200, 100, 1);
    CHECK(downsample(small, 256) == small);
    const RasterImage r = downsample(RasterImage(1000, 600), 256);
    CHECK(r.width() == 256);
    CHECK(r.height() == 154);
    const RasterImage tall = downsample(RasterImage(300, 1000), 256);
    CHECK(tall.height() == 256);
    CHECK(tall.width() == 77);  // 76.8
  }

  TEST_CASE("downsample is idempotent and never grows") {
    for (int i = 0; i < 10; ++i) {
      Rng rng(i);
      const int w = rng.range(8, 700), h = rng.range(8, 700);
      const RasterImage img = noise_image(w, h, i);
      const RasterImage once = downsample(img, 128);
      CHECK(once.width() <= w);
      CHECK(once.height() <= h);
      CHECK(std::max(once.width(), once.height()) <= 128);
      CHECK(downsample(once, 128) == once);
    }
  }

  TEST_CASE("downsample of a flat image stays flat") {
    const RasterImage img(600, 400, Rgb{10, 200, 90});
    const RasterImage d = downsample(img, 256);
    CHECK(std::all_of(d.pixels().begin(), d.pixels().end(), [](Rgb c) { return c == Rgb{10, 200, 90}; }));
  }

  TEST_CASE("count_colors") {
    CHECK(count_colors(RasterImage(9, 9, Rgb{5, 6, 7})) == 1);
    RasterImage bw(8, 8, Rgb{0, 0, 0});
    bw.at(3, 3) = {255, 255, 255};
    CHECK(count_colors(bw) == 2);
    RasterImage near(8, 8, Rgb{16, 16, 16});
    near.at(0, 0) = {17, 17, 17};
    CHECK(count_colors(near) == 1);
  }

  TEST_CASE("count_colors ignores pixel order") {
    RasterImage img = noise_image(40, 30, 9);
    const auto before = count_colors(img);
    std::vector<Rgb> px(img.pixels().begin(), img.pixels().end());
    Rng rng(4);
    rng.shuffle(px);
    CHECK(count_colors(RasterImage(40, 30, px)) == before);
  }

  TEST_CASE("grayscale uses luma weights") {
    RasterImage img(8, 8, Rgb{100, 50, 200});
    const auto g = to_grayscale(img);
    CHECK(g[0] == doctest::Approx(0.299 * 100 + 0.587 * 50 + 0.114 * 200));
  }

  TEST_CASE("raster constructor checks the pixel count") {
    CHECK_THROWS_AS(RasterImage(3, 3, std::vector<Rgb>(8)), ImageError);
  }
}
