#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace skinshape {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr int kMinImageSide = 8;
inline constexpr int kDefaultMaxSide = 256;

/// Decoded 8-bit RGB raster, row-major.
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int width, int height, Rgb fill = {});
  RasterImage(int width, int height, std::vector<Rgb> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return pixels_.size(); }
  bool empty() const { return pixels_.empty(); }

  Rgb& at(int x, int y) { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  const Rgb& at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }

  std::span<const Rgb> pixels() const { return pixels_; }
  std::span<Rgb> pixels() { return pixels_; }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Rgb> pixels_;
};

/// Decodes PNG, JPEG or BMP. Alpha is dropped and gray is replicated to RGB.
/// Throws ImageError for unreadable, unsupported, corrupt or sub-8x8 input.
RasterImage load_image(const std::filesystem::path& path);
RasterImage decode_image(std::span<const std::uint8_t> bytes);

void save_png(const RasterImage& image, const std::filesystem::path& path);

/// Bilinear down-sampling so the longer side equals max_side. Images already
/// within bounds are returned unchanged.
RasterImage downsample(const RasterImage& image, int max_side = kDefaultMaxSide);

/// Distinct colors after quantizing each channel to its top 4 bits.
std::size_t count_colors(const RasterImage& image);

/// Luma (ITU-R 601 weights), row-major.
std::vector<double> to_grayscale(const RasterImage& image);

}  // namespace skinshape
