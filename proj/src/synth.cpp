#include "skinshape/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

#include "skinshape/crossval.hpp"
#include "skinshape/error.hpp"

namespace skinshape {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint8_t clamp_byte(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

struct Canvas {
  RasterImage image{kSynthWidth, kSynthHeight};
  BinaryMask truth{kSynthWidth, kSynthHeight};
  Rng& rng;
  double noise = 5.0;

  // Paints every pixel where inside(x, y) holds; shade(x, y) scales the tone.
  void paint(const std::function<bool(double, double)>& inside, Rgb tone, bool skin,
             const std::function<double(double, double)>& shade = {}) {
    for (int y = 0; y < kSynthHeight; ++y) {
      for (int x = 0; x < kSynthWidth; ++x) {
        const double px = x + 0.5, py = y + 0.5;
        if (!inside(px, py)) continue;
        const double s = shade ? shade(px, py) : 1.0;
        image.at(x, y) = {clamp_byte(tone.r * s + rng.normal(0.0, noise)),
                          clamp_byte(tone.g * s + rng.normal(0.0, noise)),
                          clamp_byte(tone.b * s + rng.normal(0.0, noise))};
        truth.at(x, y) = skin ? 1 : 0;
      }
    }
  }
};

std::function<bool(double, double)> ellipse(double cx, double cy, double a, double b, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return [=](double x, double y) {
    const double dx = x - cx, dy = y - cy;
    const double u = (dx * c + dy * s) / a, v = (-dx * s + dy * c) / b;
    return u * u + v * v <= 1.0;
  };
}

std::function<bool(double, double)> capsule(double x0, double y0, double x1, double y1, double r) {
  return [=](double x, double y) {
    const double vx = x1 - x0, vy = y1 - y0;
    const double t = std::clamp(((x - x0) * vx + (y - y0) * vy) / (vx * vx + vy * vy), 0.0, 1.0);
    const double dx = x - (x0 + t * vx), dy = y - (y0 + t * vy);
    return dx * dx + dy * dy <= r * r;
  };
}

// Soft directional lighting, +-10%.
std::function<double(double, double)> lighting(Rng& rng) {
  const double a = rng.uniform(0.0, 2.0 * kPi);
  const double gx = std::cos(a) * 0.1 / kSynthWidth, gy = std::sin(a) * 0.1 / kSynthHeight;
  return [=](double x, double y) { return 1.0 + gx * (x - kSynthWidth / 2.0) + gy * (y - kSynthHeight / 2.0); };
}

void background(Canvas& c) {
  const Rgb top = background_tone(c.rng);
  const Rgb bottom = background_tone(c.rng);
  for (int y = 0; y < kSynthHeight; ++y) {
    const double t = static_cast<double>(y) / (kSynthHeight - 1);
    for (int x = 0; x < kSynthWidth; ++x) {
      c.image.at(x, y) = {clamp_byte(top.r + t * (bottom.r - top.r) + c.rng.normal(0.0, c.noise)),
                          clamp_byte(top.g + t * (bottom.g - top.g) + c.rng.normal(0.0, c.noise)),
                          clamp_byte(top.b + t * (bottom.b - top.b) + c.rng.normal(0.0, c.noise))};
    }
  }
}

void clutter(Canvas& c, int count) {
  for (int i = 0; i < count; ++i) {
    const double cx = c.rng.uniform(0, kSynthWidth), cy = c.rng.uniform(0, kSynthHeight);
    const double a = c.rng.uniform(10, 50), b = c.rng.uniform(10, 50);
    if (c.rng.uniform() < 0.5) {
      c.paint(ellipse(cx, cy, a, b, c.rng.uniform(0, kPi)), background_tone(c.rng), false);
    } else {
      c.paint([=](double x, double y) { return std::fabs(x - cx) <= a && std::fabs(y - cy) <= b; },
              background_tone(c.rng), false);
    }
  }
}

void figure(Canvas& c) {
  const Rgb tone = skin_tone(c.rng);
  const auto shade = lighting(c.rng);
  const double cx = kSynthWidth / 2.0 + c.rng.uniform(-30, 30);
  const double cy = kSynthHeight / 2.0 + c.rng.uniform(-15, 15);
  const double tilt = c.rng.uniform(-0.35, 0.35);
  const double ta = c.rng.uniform(34, 46), tb = c.rng.uniform(50, 64);
  // Body frame: u across the torso, v down it.
  const auto at = [&](double u, double v) {
    return std::pair{cx + u * std::cos(tilt) - v * std::sin(tilt), cy + u * std::sin(tilt) + v * std::cos(tilt)};
  };
  std::vector<std::function<bool(double, double)>> parts;
  parts.push_back(ellipse(cx, cy, ta, tb, tilt));
  const double head = c.rng.uniform(20, 27);
  const auto [hx, hy] = at(0, -tb - head + 6);
  parts.push_back(ellipse(hx, hy, head, head * 1.15, tilt));

  const int limbs = c.rng.range(4, 6);
  // Arms leave the shoulders, legs the hips; extra limbs go to the sides.
  const double anchors[6][3] = {{-0.8, -0.6, -2.3}, {0.8, -0.6, -0.85}, {-0.45, 0.8, 1.85},
                                {0.45, 0.8, 1.3},   {-0.9, 0.1, 3.0},   {0.9, 0.1, 0.15}};
  for (int i = 0; i < limbs; ++i) {
    const auto [su, sv] = std::pair{anchors[i][0] * ta, anchors[i][1] * tb};
    const auto [x0, y0] = at(su, sv);
    const double dir = anchors[i][2] + tilt + c.rng.uniform(-0.3, 0.3);
    const double len = c.rng.uniform(70, 110);
    const double r = c.rng.uniform(11, 15);
    parts.push_back(capsule(x0, y0, x0 + len * std::cos(dir), y0 + len * std::sin(dir), r));
  }
  c.paint([&](double x, double y) { return std::any_of(parts.begin(), parts.end(), [&](auto& p) { return p(x, y); }); },
          tone, true, shade);
}

void portrait(Canvas& c) {
  const double a = c.rng.uniform(34, 52);
  const double b = a * c.rng.uniform(1.2, 1.45);
  const double cx = kSynthWidth / 2.0 + c.rng.uniform(-50, 50);
  const double cy = kSynthHeight / 2.0 + c.rng.uniform(-20, 20);
  const double tilt = c.rng.uniform(-0.25, 0.25);
  // Shoulders in clothing below the face.
  c.paint(ellipse(cx, cy + b + 50, a * 2.2, 60, 0), background_tone(c.rng), false);
  c.paint(ellipse(cx, cy, a, b, tilt), skin_tone(c.rng), true, lighting(c.rng));
}

void sand(Canvas& c) {
  const Rgb tone = skin_tone(c.rng);
  const Rgb shadow = background_tone(c.rng);
  const double horizon = c.rng.uniform(50, 90);
  const double period = c.rng.uniform(40, 52);
  const double duty = c.rng.uniform(0.5, 0.58);
  const double amp = c.rng.uniform(1, 4);
  const double wave = c.rng.uniform(40, 90);
  const double phase = c.rng.uniform(0, 2 * kPi);
  const double slope = c.rng.uniform(-0.15, 0.15);
  const auto ridge = [=](double x, double y) {
    const double t = (y - horizon + slope * x + amp * std::sin(x / wave * 2 * kPi + phase)) / period;
    return t - std::floor(t);
  };
  c.paint([=](double x, double y) { return y > horizon && ridge(x, y) < duty; }, tone, true, lighting(c.rng));
  c.paint([=](double x, double y) { return y > horizon && ridge(x, y) >= duty; }, shadow, false);
}

void flower(Canvas& c) {
  const Rgb tone = skin_tone(c.rng);
  const double scale = c.rng.uniform(0.8, 1.05);
  const double cx = kSynthWidth / 2.0 + c.rng.uniform(-60, 60);
  const double cy = kSynthHeight / 2.0 + c.rng.uniform(-30, 30);
  const int petals = c.rng.range(4, 6);
  const double turn = c.rng.uniform(0, 2 * kPi);
  const double a = 26 * scale, b = 13 * scale, dist = 50 * scale;
  std::vector<std::function<bool(double, double)>> parts;
  for (int i = 0; i < petals; ++i) {
    const double ang = turn + 2 * kPi * i / petals;
    parts.push_back(ellipse(cx + dist * std::cos(ang), cy + dist * std::sin(ang), a, b, ang));
  }
  c.paint([&](double x, double y) { return std::any_of(parts.begin(), parts.end(), [&](auto& p) { return p(x, y); }); },
          tone, true, lighting(c.rng));
  c.paint(ellipse(cx, cy, 27 * scale, 27 * scale, 0), {90, 40, 100}, false);
}

}  // namespace

std::string to_string(SynthKind kind) {
  switch (kind) {
    case SynthKind::Figure:
      return "figure";
    case SynthKind::Portrait:
      return "portrait";
    case SynthKind::Sand:
      return "sand";
    case SynthKind::Flower:
      return "flower";
    case SynthKind::Scene:
      break;
  }
  return "scene";
}

Rgb skin_tone(Rng& rng) {
  const double r = rng.uniform(170, 235);
  const double g = r * rng.uniform(0.64, 0.76);
  const double b = g * rng.uniform(0.72, 0.86);
  return {clamp_byte(r), clamp_byte(g), clamp_byte(b)};
}

Rgb background_tone(Rng& rng) {
  switch (rng.below(5)) {
    case 0:  // blue
      return {clamp_byte(rng.uniform(40, 100)), clamp_byte(rng.uniform(70, 140)), clamp_byte(rng.uniform(150, 220))};
    case 1:  // green
      return {clamp_byte(rng.uniform(40, 100)), clamp_byte(rng.uniform(120, 190)), clamp_byte(rng.uniform(40, 100))};
    case 2: {  // cool grey
      const double g = rng.uniform(25, 215);
      return {clamp_byte(g), clamp_byte(g + 4), clamp_byte(g + rng.uniform(12, 24))};
    }
    case 3:  // teal
      return {clamp_byte(rng.uniform(30, 80)), clamp_byte(rng.uniform(120, 170)), clamp_byte(rng.uniform(130, 180))};
    default:  // purple
      return {clamp_byte(rng.uniform(90, 140)), clamp_byte(rng.uniform(40, 80)), clamp_byte(rng.uniform(150, 200))};
  }
}

SynthImage synth_image(SynthKind kind, std::uint64_t seed) {
  Rng rng(seed);
  Canvas c{.rng = rng};
  background(c);
  clutter(c, rng.range(kind == SynthKind::Scene ? 4 : 1, kind == SynthKind::Scene ? 9 : 3));
  switch (kind) {
    case SynthKind::Figure:
      figure(c);
      break;
    case SynthKind::Portrait:
      portrait(c);
      break;
    case SynthKind::Sand:
      sand(c);
      break;
    case SynthKind::Flower:
      flower(c);
      break;
    case SynthKind::Scene:
      break;
  }
  return {std::move(c.image), std::move(c.truth), kind};
}

SynthKind negative_kind(std::size_t index) {
  constexpr SynthKind order[] = {SynthKind::Portrait, SynthKind::Sand, SynthKind::Flower, SynthKind::Scene};
  return order[(index / 2) % 4];
}

SkinHistogramModel synthetic_skin_model(std::uint64_t seed, int images_per_kind, int bins) {
  SkinHistogramAccumulator acc(bins);
  constexpr SynthKind kinds[] = {SynthKind::Figure, SynthKind::Portrait, SynthKind::Sand, SynthKind::Flower,
                                 SynthKind::Scene};
  std::uint64_t stream = 0;
  for (int i = 0; i < images_per_kind; ++i) {
    for (SynthKind k : kinds) {
      const SynthImage s = synth_image(k, derive_seed(seed, stream++));
      acc.add_labeled(s.image, s.truth);
    }
  }
  // The renders only show a narrow background palette. Every other color
  // cell would sit at posterior 0.5 and pass the threshold, so the whole cube
  // is swept as non-skin.
  const int step = 256 / bins;
  for (int r = step / 2; r < 256; r += step) {
    for (int g = step / 2; g < 256; g += step) {
      for (int b = step / 2; b < 256; b += step) {
        const Rgb c{static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g), static_cast<std::uint8_t>(b)};
        for (int k = 0; k < kBackgroundSweep; ++k) acc.add_nonskin(c);
      }
    }
  }
  return acc.build();
}

CorpusManifest write_synthetic_corpus(const std::filesystem::path& dir, std::size_t per_class,
                                      std::uint64_t seed, double test_fraction) {
  if (!(test_fraction >= 0.0 && test_fraction <= 1.0)) throw Error("test fraction must lie in [0, 1]");
  std::error_code ec;
  std::filesystem::create_directories(dir / "images", ec);
  if (ec) throw Error("cannot create " + (dir / "images").string() + ": " + ec.message());

  CorpusManifest m;
  m.base = dir;
  for (std::size_t i = 0; i < per_class; ++i) {
    const bool test = std::floor((i + 1) * test_fraction) > std::floor(i * test_fraction);
    for (int positive = 1; positive >= 0; --positive) {
      const SynthKind kind = positive ? SynthKind::Figure : negative_kind(i);
      const SynthImage s = synth_image(kind, derive_seed(seed, 2 * i + (positive ? 0 : 1)));
      char name[64];
      std::snprintf(name, sizeof name, "images/%s_%05zu_%s.png", positive ? "pos" : "neg", i,
                    to_string(kind).c_str());
      save_png(s.image, dir / name);
      m.entries.push_back({name, positive ? Label::Positive : Label::Negative, test ? "test" : "train"});
    }
  }
  write_manifest(m, dir / "manifest.csv");
  return m;
}

}  // namespace skinshape
