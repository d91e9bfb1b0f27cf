#include "skinshape/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "skinshape/error.hpp"

namespace skinshape {

void FusionParams::validate() const {
  if (!(mu1 >= 0.0 && mu1 <= 1.0) || !(mu2 >= 0.0 && mu2 <= 1.0)) {
    throw Error("fusion weights must lie in [0, 1]");
  }
  if (!std::isfinite(mu12)) throw Error("coalition weight must be finite");
}

double fuse(double h1, double h2, const FusionParams& p) {
  const double v = (p.mu12 - (p.mu2 + p.mu1)) * h1 + p.mu1 * h1 + p.mu2 * h2;
  return std::clamp(v, 0.0, 1.0);
}

EvalResult evaluate(std::span<const ScoredLabel> scores, double threshold) {
  if (scores.empty()) throw Error("nothing to evaluate");
  EvalResult r;
  r.threshold = threshold;
  for (const ScoredLabel& s : scores) {
    const bool predicted = s.score > threshold;
    if (s.label == 1) {
      predicted ? ++r.tp : ++r.fn;
    } else {
      predicted ? ++r.fp : ++r.tn;
    }
  }
  if (r.tp + r.fn > 0) r.tp_rate = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn);
  if (r.fp + r.tn > 0) r.fp_rate = static_cast<double>(r.fp) / static_cast<double>(r.fp + r.tn);
  return r;
}

MuSearchResult grid_search_mu(std::span<const FusionSample> samples, double step, double threshold) {
  if (!(step > 0.0 && step <= 1.0)) throw Error("sweep step must lie in (0, 1]");
  bool pos = false, neg = false;
  for (const FusionSample& s : samples) (s.label == 1 ? pos : neg) = true;
  if (!pos || !neg) throw Error("mu search needs both classes");

  const auto count = static_cast<int>(std::lround(1.0 / step));
  MuSearchResult result;
  std::vector<ScoredLabel> fused(samples.size());
  std::int64_t npos = 0, nneg = 0;
  for (const FusionSample& s : samples) (s.label == 1 ? npos : nneg)++;
  int best = -1;
  // Objective scaled by npos * nneg; exact, so equal rates really tie.
  std::int64_t best_num = 0;
  for (int i = 0; i <= count; ++i) {
    const double mu1 = static_cast<double>(i) / count;
    const FusionParams p{mu1, 1.0 - mu1, 1.0};
    for (std::size_t k = 0; k < samples.size(); ++k) {
      fused[k] = {fuse(samples[k].h1, samples[k].h2, p), samples[k].label};
    }
    const EvalResult e = evaluate(fused, threshold);
    result.surface.push_back({mu1, *e.tp_rate, *e.fp_rate, *e.tp_rate - *e.fp_rate});
    const auto num = static_cast<std::int64_t>(e.tp) * nneg - static_cast<std::int64_t>(e.fp) * npos;
    // Distance from the midpoint in grid units keeps the tie rule exact.
    if (best < 0 || num > best_num ||
        (num == best_num && std::abs(2 * i - count) < std::abs(2 * best - count))) {
      best = i;
      best_num = num;
    }
  }
  const double mu1 = result.surface[static_cast<std::size_t>(best)].mu1;
  result.best = {mu1, 1.0 - mu1, 1.0};
  return result;
}

}  // namespace skinshape
