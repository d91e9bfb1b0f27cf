#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "skinshape/image.hpp"
#include "skinshape/mask.hpp"
#include "skinshape/rng.hpp"
#include "skinshape/skin.hpp"
#include "skinshape/table.hpp"

namespace skinshape {

inline constexpr int kSynthWidth = 320;
inline constexpr int kSynthHeight = 240;

/// Figure is the positive class; the rest are negatives.
enum class SynthKind { Figure, Portrait, Sand, Flower, Scene };

std::string to_string(SynthKind kind);

struct SynthImage {
  RasterImage image;
  /// Pixels painted with a skin tone.
  BinaryMask truth;
  SynthKind kind = SynthKind::Figure;
};

/// Skin tones have R > G > B in fixed ratios; background tones keep blue or
/// green at or above red, so the two palettes never share a color cell.
Rgb skin_tone(Rng& rng);
Rgb background_tone(Rng& rng);

/// Renders one 320x240 image.
/// - Figure: torso, head and 4-6 limb capsules, one lobed skin region.
/// - Portrait: one smooth skin ellipse.
/// - Sand: wavy skin-toned bands under a sky.
/// - Flower: skin-toned petals around a dark center.
/// - Scene: background shapes only.
SynthImage synth_image(SynthKind kind, std::uint64_t seed);

/// Negatives cycle Portrait, Sand, Flower, Scene in pairs so each kind
/// lands in both splits.
SynthKind negative_kind(std::size_t index);

/// Non-skin samples added per color cell on top of the rendered backgrounds.
inline constexpr int kBackgroundSweep = 16;

/// Histogram trained on the truth masks of rendered images of every kind,
/// plus a uniform non-skin sweep of the color cube.
SkinHistogramModel synthetic_skin_model(std::uint64_t seed = 20240601, int images_per_kind = 6,
                                        int bins = kDefaultSkinBins);

/// Writes n positives and n negatives as PNGs under dir/images plus
/// dir/manifest.csv. Every 1/test_fraction-th image of a class is tagged test.
CorpusManifest write_synthetic_corpus(const std::filesystem::path& dir, std::size_t per_class,
                                      std::uint64_t seed, double test_fraction = 0.5);

}  // namespace skinshape
