#include "skinshape/crossval.hpp"

#include <map>

#include "skinshape/error.hpp"
#include "skinshape/rng.hpp"

namespace skinshape {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

void check(std::size_t n, int folds) {
  if (folds < 2) throw Error("cross-validation needs at least 2 folds");
  if (n < static_cast<std::size_t>(folds)) throw Error("fewer samples than folds");
}

}  // namespace

std::vector<int> kfold_split(std::size_t n, int folds, std::uint64_t seed) {
  check(n, folds);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);
  std::vector<int> assignment(n);
  for (std::size_t i = 0; i < n; ++i) assignment[order[i]] = static_cast<int>(i % folds);
  return assignment;
}

std::vector<int> kfold_split(std::span<const int> labels, int folds, std::uint64_t seed) {
  check(labels.size(), folds);
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  Rng rng(seed);
  std::vector<int> assignment(labels.size());
  std::size_t cursor = 0;
  for (auto& [label, members] : by_class) {
    rng.shuffle(members);
    for (std::size_t idx : members) assignment[idx] = static_cast<int>(cursor++ % folds);
  }
  return assignment;
}

std::vector<std::size_t> fold_members(std::span<const int> assignment, int fold) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> fold_complement(std::span<const int> assignment, int fold) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] != fold) out.push_back(i);
  }
  return out;
}

}  // namespace skinshape

namespace skinshape {

TrainReport cross_validate(const Matrix& x, std::span<const double> y, std::span<const int> labels,
                           int folds, int epochs, std::uint64_t seed, const TrainingRun& run) {
  if (epochs < 1) throw Error("training needs at least one epoch");
  const std::size_t n = x.rows();
  const auto assignment = labels.empty() ? kfold_split(n, folds, derive_seed(seed, 0))
                                         : kfold_split(labels, folds, derive_seed(seed, 0));
  TrainReport report;
  report.seed = seed;
  const auto e_count = static_cast<std::size_t>(epochs);
  // oof[e][i]: validation score of sample i after epoch e+1 of its fold's run.
  std::vector<std::vector<double>> oof(e_count, std::vector<double>(n, 0.0));

  for (int f = 0; f < folds; ++f) {
    const auto train_idx = fold_complement(assignment, f);
    const auto val_idx = fold_members(assignment, f);
    const Matrix x_train = x.select_rows(train_idx);
    std::vector<double> y_train(train_idx.size());
    for (std::size_t i = 0; i < train_idx.size(); ++i) y_train[i] = y[train_idx[i]];

    std::vector<double> curve;
    run(x_train, y_train, epochs, derive_seed(seed, static_cast<std::uint64_t>(f) + 1),
        [&](double loss, const Predictor& predict) {
          if (curve.size() >= e_count) return;
          const std::size_t e = curve.size();
          curve.push_back(loss);
          for (std::size_t idx : val_idx) oof[e][idx] = predict(x.row(idx));
        });
    if (curve.empty()) throw Error("training run reported no epochs");
    for (std::size_t e = curve.size(); e < e_count; ++e) {
      for (std::size_t idx : val_idx) oof[e][idx] = oof[curve.size() - 1][idx];
      curve.push_back(curve.back());
    }
    report.fold_train_loss.push_back(std::move(curve));
  }

  report.validation_loss.assign(e_count, 0.0);
  for (std::size_t e = 0; e < e_count; ++e) {
    double total = 0.0;
    for (int f = 0; f < folds; ++f) {
      const auto val_idx = fold_members(assignment, f);
      double sse = 0.0;
      for (std::size_t idx : val_idx) sse += (oof[e][idx] - y[idx]) * (oof[e][idx] - y[idx]);
      total += sse / static_cast<double>(val_idx.size());
    }
    report.validation_loss[e] = total / folds;
  }
  std::size_t best = 0;
  for (std::size_t e = 1; e < e_count; ++e) {
    if (report.validation_loss[e] < report.validation_loss[best]) best = e;
  }
  report.selected_epoch = static_cast<int>(best) + 1;
  report.oof_scores = oof[best];

  for (int f = 0; f < folds; ++f) {
    const auto val_idx = fold_members(assignment, f);
    FoldMetrics m;
    m.size = val_idx.size();
    double sse = 0.0;
    std::size_t tp = 0, pos = 0, fp = 0, neg = 0;
    for (std::size_t idx : val_idx) {
      const double s = oof[best][idx];
      sse += (s - y[idx]) * (s - y[idx]);
      if (!labels.empty()) {
        if (labels[idx] == 1) {
          ++pos;
          tp += s > 0.5;
        } else {
          ++neg;
          fp += s > 0.5;
        }
      }
    }
    m.validation_loss = sse / static_cast<double>(val_idx.size());
    m.tp_rate = pos ? static_cast<double>(tp) / pos : 0.0;
    m.fp_rate = neg ? static_cast<double>(fp) / neg : 0.0;
    report.folds.push_back(m);
  }
  return report;
}

}  // namespace skinshape
