#include "skinshape/image.hpp"

#include <algorithm>
#include <array>
#include <bitset>
#include <cmath>
#include <fstream>
#include <iterator>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "skinshape/error.hpp"

namespace skinshape {

RasterImage::RasterImage(int width, int height, Rgb fill)
    : width_(width), height_(height), pixels_(static_cast<std::size_t>(width) * height, fill) {
  if (width <= 0 || height <= 0) throw ImageError("image dimensions must be positive");
}

RasterImage::RasterImage(int width, int height, std::vector<Rgb> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width <= 0 || height <= 0) throw ImageError("image dimensions must be positive");
  if (pixels_.size() != static_cast<std::size_t>(width) * height) {
    throw ImageError("pixel count does not match width x height");
  }
}

namespace {

enum class Format { Png, Jpeg, Bmp, Unknown };

Format sniff(std::span<const std::uint8_t> bytes) {
  static constexpr std::array<std::uint8_t, 8> png = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  if (bytes.size() >= png.size() && std::equal(png.begin(), png.end(), bytes.begin())) {
    return Format::Png;
  }
  if (bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF) {
    return Format::Jpeg;
  }
  if (bytes.size() >= 2 && bytes[0] == 'B' && bytes[1] == 'M') return Format::Bmp;
  return Format::Unknown;
}

}  // namespace

RasterImage decode_image(std::span<const std::uint8_t> bytes) {
  if (sniff(bytes) == Format::Unknown) throw ImageError("unsupported image format");

  const cv::Mat buffer(1, static_cast<int>(bytes.size()), CV_8UC1,
                       const_cast<std::uint8_t*>(bytes.data()));
  cv::Mat decoded = cv::imdecode(buffer, cv::IMREAD_UNCHANGED);
  if (decoded.empty()) throw ImageError("corrupt image data");

  if (decoded.depth() == CV_16U) {
    decoded.convertTo(decoded, CV_8U, 1.0 / 257.0);
  } else if (decoded.depth() != CV_8U) {
    throw ImageError("unsupported sample depth");
  }
  if (decoded.cols < kMinImageSide || decoded.rows < kMinImageSide) {
    throw ImageError("image too small");
  }

  const int channels = decoded.channels();
  if (channels != 1 && channels != 3 && channels != 4) throw ImageError("unsupported channel layout");

  RasterImage image(decoded.cols, decoded.rows);
  for (int y = 0; y < decoded.rows; ++y) {
    const std::uint8_t* row = decoded.ptr<std::uint8_t>(y);
    for (int x = 0; x < decoded.cols; ++x) {
      const std::uint8_t* px = row + static_cast<std::ptrdiff_t>(x) * channels;
      // OpenCV stores color samples as BGR(A).
      image.at(x, y) = channels == 1 ? Rgb{px[0], px[0], px[0]} : Rgb{px[2], px[1], px[0]};
    }
  }
  return image;
}

RasterImage load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageError("cannot read image file: " + path.string());
  const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                        std::istreambuf_iterator<char>()};
  if (bytes.empty()) throw ImageError("empty image file: " + path.string());
  return decode_image(bytes);
}

void save_png(const RasterImage& image, const std::filesystem::path& path) {
  cv::Mat mat(image.height(), image.width(), CV_8UC3);
  for (int y = 0; y < image.height(); ++y) {
    auto* row = mat.ptr<std::uint8_t>(y);
    for (int x = 0; x < image.width(); ++x) {
      const Rgb& p = image.at(x, y);
      row[3 * x + 0] = p.b;
      row[3 * x + 1] = p.g;
      row[3 * x + 2] = p.r;
    }
  }
  std::vector<std::uint8_t> encoded;
  if (!cv::imencode(".png", mat, encoded, {cv::IMWRITE_PNG_COMPRESSION, 1})) {
    throw ImageError("PNG encoding failed");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ImageError("cannot write image file: " + path.string());
  out.write(reinterpret_cast<const char*>(encoded.data()), static_cast<std::streamsize>(encoded.size()));
  if (!out) throw ImageError("write failed: " + path.string());
}

RasterImage downsample(const RasterImage& image, int max_side) {
  if (max_side < kMinImageSide) throw ImageError("max_side must be at least 8");
  const int w = image.width();
  const int h = image.height();
  const int longer = std::max(w, h);
  if (longer <= max_side) return image;

  // Round-half-up of shorter * max_side / longer, in integers.
  const auto scaled = [&](int side) {
    const long long num = 2LL * side * max_side + longer;
    return std::max(1, static_cast<int>(num / (2LL * longer)));
  };
  const int out_w = w >= h ? max_side : scaled(w);
  const int out_h = h > w ? max_side : scaled(h);

  const double sx = static_cast<double>(w) / out_w;
  const double sy = static_cast<double>(h) / out_h;
  RasterImage out(out_w, out_h);
  for (int y = 0; y < out_h; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(h - 1));
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, h - 1);
    const double ty = fy - y0;
    for (int x = 0; x < out_w; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(w - 1));
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, w - 1);
      const double tx = fx - x0;
      const Rgb& a = image.at(x0, y0);
      const Rgb& b = image.at(x1, y0);
      const Rgb& c = image.at(x0, y1);
      const Rgb& d = image.at(x1, y1);
      const auto mix = [&](std::uint8_t Rgb::*ch) {
        const double top = (1 - tx) * (a.*ch) + tx * (b.*ch);
        const double bottom = (1 - tx) * (c.*ch) + tx * (d.*ch);
        const double v = (1 - ty) * top + ty * bottom;
        return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
      };
      out.at(x, y) = Rgb{mix(&Rgb::r), mix(&Rgb::g), mix(&Rgb::b)};
    }
  }
  return out;
}

std::size_t count_colors(const RasterImage& image) {
  std::bitset<4096> seen;
  for (const Rgb& p : image.pixels()) {
    seen.set((static_cast<std::size_t>(p.r >> 4) << 8) | (static_cast<std::size_t>(p.g >> 4) << 4) |
             static_cast<std::size_t>(p.b >> 4));
  }
  return seen.count();
}

std::vector<double> to_grayscale(const RasterImage& image) {
  std::vector<double> gray(image.size());
  auto px = image.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    gray[i] = 0.299 * px[i].r + 0.587 * px[i].g + 0.114 * px[i].b;
  }
  return gray;
}

}  // namespace skinshape
