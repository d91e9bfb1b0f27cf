#include "skinshape/skin.hpp"

#include <array>
#include <bit>
#include <fstream>
#include <limits>
#include <numeric>

#include "skinshape/error.hpp"

namespace skinshape {

namespace {

bool valid_bins(int bins) { return bins == 16 || bins == 32 || bins == 64; }

int bins_shift(int bins) { return 8 - std::countr_zero(static_cast<unsigned>(bins)); }

std::size_t quantized_index(Rgb c, int bins, int shift) {
  const auto b = static_cast<std::size_t>(bins);
  return ((static_cast<std::size_t>(c.r >> shift) * b) + static_cast<std::size_t>(c.g >> shift)) * b +
         static_cast<std::size_t>(c.b >> shift);
}

std::uint32_t checked_total(std::span<const std::uint32_t> counts) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total > std::numeric_limits<std::uint32_t>::max()) throw Error("histogram total overflows 32 bits");
  return static_cast<std::uint32_t>(total);
}

}  // namespace

SkinHistogramModel::SkinHistogramModel(int bins, std::vector<std::uint32_t> skin_counts,
                                       std::vector<std::uint32_t> nonskin_counts)
    : bins_(bins), skin_counts_(std::move(skin_counts)), nonskin_counts_(std::move(nonskin_counts)) {
  if (!valid_bins(bins)) throw Error("histogram bins must be 16, 32 or 64");
  const std::size_t cells = static_cast<std::size_t>(bins) * bins * bins;
  if (skin_counts_.size() != cells || nonskin_counts_.size() != cells) {
    throw Error("histogram cell count does not match bins^3");
  }
  shift_ = bins_shift(bins);
  skin_total_ = checked_total(skin_counts_);
  nonskin_total_ = checked_total(nonskin_counts_);
  if (skin_total_ == 0 || nonskin_total_ == 0) throw Error("both histograms need at least one sample");

  const double skin_norm = static_cast<double>(skin_total_) + static_cast<double>(cells);
  const double nonskin_norm = static_cast<double>(nonskin_total_) + static_cast<double>(cells);
  posterior_.resize(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    const double ls = (skin_counts_[i] + 1.0) / skin_norm;
    const double ln = (nonskin_counts_[i] + 1.0) / nonskin_norm;
    posterior_[i] = ls / (ls + ln);
  }
}

std::size_t SkinHistogramModel::cell_index(Rgb c) const { return quantized_index(c, bins_, shift_); }

double SkinHistogramModel::likelihood_ratio(Rgb c) const {
  const double p = posterior(c);
  return p / (1.0 - p);
}

SkinHistogramAccumulator::SkinHistogramAccumulator(int bins) : bins_(bins) {
  if (!valid_bins(bins)) throw Error("histogram bins must be 16, 32 or 64");
  shift_ = bins_shift(bins);
  const std::size_t cells = static_cast<std::size_t>(bins) * bins * bins;
  skin_.assign(cells, 0);
  nonskin_.assign(cells, 0);
}

void SkinHistogramAccumulator::add_skin(Rgb c) {
  ++skin_[quantized_index(c, bins_, shift_)];
  ++skin_total_;
}

void SkinHistogramAccumulator::add_nonskin(Rgb c) {
  ++nonskin_[quantized_index(c, bins_, shift_)];
  ++nonskin_total_;
}

void SkinHistogramAccumulator::add_labeled(const RasterImage& image, const BinaryMask& truth) {
  if (truth.width != image.width() || truth.height != image.height()) {
    throw Error("ground-truth mask size does not match image");
  }
  auto px = image.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (truth.bits[i]) {
      add_skin(px[i]);
    } else {
      add_nonskin(px[i]);
    }
  }
}

SkinHistogramModel SkinHistogramAccumulator::build() const {
  if (skin_total_ == 0) throw Error("skin pixel stream is empty");
  if (nonskin_total_ == 0) throw Error("non-skin pixel stream is empty");
  return SkinHistogramModel(bins_, skin_, nonskin_);
}

SkinHistogramModel train_skin_histogram(std::span<const Rgb> skin_pixels,
                                        std::span<const Rgb> nonskin_pixels, int bins) {
  SkinHistogramAccumulator acc(bins);
  for (Rgb c : skin_pixels) acc.add_skin(c);
  for (Rgb c : nonskin_pixels) acc.add_nonskin(c);
  return acc.build();
}

ProbabilityMap skin_probability_map(const RasterImage& image, const SkinHistogramModel& model) {
  ProbabilityMap map{image.width(), image.height(), std::vector<double>(image.size())};
  auto px = image.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) map.values[i] = model.posterior(px[i]);
  return map;
}

SkinMask threshold_mask(const ProbabilityMap& prob, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw Error("threshold must lie in [0, 1]");
  SkinMask mask{BinaryMask(prob.width, prob.height), prob.values};
  for (std::size_t i = 0; i < prob.values.size(); ++i) {
    mask.bits.bits[i] = prob.values[i] >= theta ? 1 : 0;
  }
  return mask;
}

namespace {

constexpr std::array<char, 4> kMagic = {'S', 'K', 'H', 'M'};

void put_u32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                                 static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
  out.write(b.data(), 4);
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) throw Error("truncated skin histogram file");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

void write_skin_histogram(const SkinHistogramModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write skin histogram: " + path.string());
  out.write(kMagic.data(), 4);
  put_u32(out, static_cast<std::uint32_t>(model.bins()));
  put_u32(out, model.skin_total());
  put_u32(out, model.nonskin_total());
  for (auto c : model.skin_counts()) put_u32(out, c);
  for (auto c : model.nonskin_counts()) put_u32(out, c);
  if (!out) throw Error("write failed: " + path.string());
}

SkinHistogramModel read_skin_histogram(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read skin histogram: " + path.string());
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), 4) || magic != kMagic) throw Error("not a skin histogram file");
  const auto bins = static_cast<int>(get_u32(in));
  if (!valid_bins(bins)) throw Error("skin histogram has invalid bin count");
  const std::uint32_t skin_total = get_u32(in);
  const std::uint32_t nonskin_total = get_u32(in);
  const std::size_t cells = static_cast<std::size_t>(bins) * bins * bins;
  std::vector<std::uint32_t> skin(cells), nonskin(cells);
  for (auto& c : skin) c = get_u32(in);
  for (auto& c : nonskin) c = get_u32(in);
  SkinHistogramModel model(bins, std::move(skin), std::move(nonskin));
  if (model.skin_total() != skin_total || model.nonskin_total() != nonskin_total) {
    throw Error("skin histogram totals do not match cell sums");
  }
  return model;
}

}  // namespace skinshape
