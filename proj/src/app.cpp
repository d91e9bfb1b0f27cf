#include "skinshape/app.hpp"

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

#include "skinshape/error.hpp"
#include "skinshape/synth.hpp"

namespace skinshape {

PipelineConfig GlobalOptions::pipeline(const PipelineConfig& base) const {
  PipelineConfig cfg = base;
  if (max_side) cfg.max_side = *max_side;
  if (theta) cfg.theta = *theta;
  if (c_open) cfg.morphology.c_open = *c_open;
  if (c_close) cfg.morphology.c_close = *c_close;
  if (cfg.max_side < kMinImageSide) throw Error("max side must be at least 8");
  if (!(cfg.theta >= 0.0 && cfg.theta <= 1.0)) throw Error("theta must lie in [0, 1]");
  if (!(cfg.morphology.c_open > 0.0 && cfg.morphology.c_close > 0.0)) throw Error("c must be positive");
  return cfg;
}

std::optional<std::filesystem::path> model_path(const std::optional<std::filesystem::path>& flag) {
  if (flag) return flag;
  if (const char* env = std::getenv("SKINSHAPE_MODEL"); env && *env) return std::filesystem::path(env);
  return std::nullopt;
}

TrainedModel default_skin_container() {
  TrainedModel m;
  m.skin = synthetic_skin_model();
  m.feature_names = feature_names();
  return m;
}

ExtractResult extract_features(const CorpusManifest& manifest, const SkinHistogramModel& skin,
                               const PipelineConfig& cfg, const std::string& split, unsigned jobs) {
  std::vector<const ManifestEntry*> todo;
  for (const auto& e : manifest.entries) {
    if (split.empty() || e.split == split) todo.push_back(&e);
  }
  struct Outcome {
    std::optional<ImageAnalysis> analysis;
    std::string error;
  };
  const auto outcomes = parallel_map<Outcome>(todo.size(), jobs, [&](std::size_t i) {
    Outcome o;
    try {
      ImageAnalysis a = analyze_image(load_image(manifest.resolve(*todo[i])), skin, cfg);
      // Only the features travel back; the rasters are dropped here.
      ImageAnalysis slim;
      slim.largest = a.largest;
      slim.features = a.features;
      o.analysis = std::move(slim);
    } catch (const std::exception& ex) {
      o.error = ex.what();
    }
    return o;
  });

  ExtractResult r;
  r.attempted = todo.size();
  r.table.names = feature_names();
  for (std::size_t i = 0; i < todo.size(); ++i) {
    if (!outcomes[i].analysis) {
      r.failures.emplace_back(todo[i]->path, outcomes[i].error);
      continue;
    }
    const auto& a = *outcomes[i].analysis;
    r.table.append(todo[i]->path, todo[i]->label, a.no_skin(), a.features.values);
  }
  return r;
}

TrainOutcome train_model(const FeatureTable& table, const TrainedModel& skin, const TrainSettings& settings,
                         std::string dataset_hash) {
  if (table.names.size() != kFeatureDimension) throw DimensionMismatch(kFeatureDimension, table.names.size());
  if (table.names != feature_names()) throw Error("feature columns do not match the feature spec");

  std::vector<std::size_t> rows;
  std::vector<int> labels;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table.labels[i] == Label::Unlabeled) continue;
    rows.push_back(i);
    labels.push_back(table.labels[i] == Label::Positive ? 1 : 0);
  }
  require_binary_labels(labels);
  const Matrix x = table.values.select_rows(rows);

  TrainOutcome out;
  MlpConfig mc;
  mc.epochs = settings.mlp_epochs;
  mc.folds = settings.folds;
  mc.seed = derive_seed(settings.seed, 1);
  auto [mlp, mlp_report] = mlp_train(x, labels, mc);

  AnfisConfig ac;
  ac.epochs = settings.nf_epochs;
  ac.folds = settings.folds;
  ac.seed = derive_seed(settings.seed, 2);
  auto [nf, nf_report] = anfis_train(x, labels, ac);

  SofmConfig sc;
  sc.epochs = settings.sofm_epochs;
  sc.seed = derive_seed(settings.seed, 3);
  SofmClassifier sofm = sofm_classify_train(x, labels, sc);

  // No-skin rows score 0 at inference, so they do in the sweep too.
  std::vector<FusionSample> samples(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const bool blank = table.no_skin[rows[i]] != 0;
    samples[i] = {blank ? 0.0 : mlp_report.oof_scores[i], blank ? 0.0 : nf_report.oof_scores[i], labels[i]};
  }
  out.mu_search = grid_search_mu(samples);

  TrainedModel& m = out.model;
  m.skin = skin.skin;
  m.pipeline = skin.pipeline;
  m.feature_names = table.names;
  m.mlp = std::move(mlp);
  m.nf = std::move(nf);
  m.sofm = std::move(sofm);
  m.fusion = settings.fusion.value_or(out.mu_search.best);
  m.provenance = {settings.seed, std::move(dataset_hash), build_timestamp()};
  m.validate();
  out.mlp_report = std::move(mlp_report);
  out.nf_report = std::move(nf_report);
  return out;
}

const EvalResult& EvaluationSummary::row(const std::string& name) const {
  for (const auto& r : rows) {
    if (r.name == name) return r.result;
  }
  throw Error("no evaluation row " + name);
}

EvaluationSummary evaluate_table(const TrainedModel& model, const FeatureTable& table, double threshold) {
  EvaluationSummary s;
  std::vector<ScoredLabel> mlp, nf, sofm, fused;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table.labels[i] == Label::Unlabeled) {
      ++s.unlabeled;
      continue;
    }
    const int y = table.labels[i] == Label::Positive ? 1 : 0;
    const ImageScores sc = score_features(model, table.values.row(i), table.no_skin[i] != 0);
    mlp.push_back({sc.mlp, y});
    nf.push_back({sc.nf, y});
    sofm.push_back({sc.sofm, y});
    fused.push_back({sc.fused, y});
  }
  if (fused.empty()) throw Error("no labeled images to evaluate");
  s.rows.push_back({"mlp", evaluate(mlp, threshold)});
  s.rows.push_back({"nf", evaluate(nf, threshold)});
  if (model.sofm) s.rows.push_back({"sofm", evaluate(sofm, threshold)});
  s.rows.push_back({"fused", evaluate(fused, threshold)});
  return s;
}

void write_curve_csv(const TrainReport& report, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "epoch,train_loss,validation_loss\n";
  const std::size_t n = std::max(report.train_loss.size(), report.validation_loss.size());
  for (std::size_t e = 0; e < n; ++e) {
    out << e + 1 << ','
        << (e < report.train_loss.size() ? format_double(report.train_loss[e]) : "") << ','
        << (e < report.validation_loss.size() ? format_double(report.validation_loss[e]) : "") << '\n';
  }
  write_file(path, out.str());
}

void write_sweep_csv(const MuSearchResult& sweep, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "mu1,tp_rate,fp_rate,objective\n";
  for (const auto& p : sweep.surface) {
    out << format_double(p.mu1) << ',' << format_double(p.tp_rate) << ',' << format_double(p.fp_rate) << ','
        << format_double(p.objective) << '\n';
  }
  write_file(path, out.str());
}

void write_evaluation_csv(const EvaluationSummary& summary, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "classifier,tp,fn,fp,tn,tp_rate,fp_rate,accuracy,youden\n";
  for (const auto& [name, r] : summary.rows) {
    out << name << ',' << r.tp << ',' << r.fn << ',' << r.fp << ',' << r.tn << ','
        << (r.tp_rate ? format_double(*r.tp_rate) : "") << ',' << (r.fp_rate ? format_double(*r.fp_rate) : "")
        << ',' << format_double(r.accuracy()) << ',' << format_double(r.youden()) << '\n';
  }
  write_file(path, out.str());
}

void print_evaluation(const EvaluationSummary& summary, std::ostream& out) {
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %8s %8s %9s %8s\n", "classifier", "tp_rate", "fp_rate", "accuracy",
                "youden");
  out << line;
  const auto pct = [](const std::optional<double>& v) { return v ? *v : std::nan(""); };
  for (const auto& [name, r] : summary.rows) {
    std::snprintf(line, sizeof line, "%-10s %8.4f %8.4f %9.4f %8.4f\n", name.c_str(), pct(r.tp_rate),
                  pct(r.fp_rate), r.accuracy(), r.youden());
    out << line;
  }
}

void write_planes_csv(const SofmGrid& grid, const std::vector<std::string>& names,
                      const std::filesystem::path& path) {
  const auto planes = weight_planes(grid);
  std::ostringstream out;
  out << "feature,row,col,weight\n";
  for (std::size_t f = 0; f < planes.size(); ++f) {
    for (std::size_t r = 0; r < planes[f].rows(); ++r) {
      for (std::size_t c = 0; c < planes[f].cols(); ++c) {
        out << (f < names.size() ? names[f] : std::to_string(f)) << ',' << r << ',' << c << ','
            << format_double(planes[f](r, c)) << '\n';
      }
    }
  }
  write_file(path, out.str());
}

void write_selection_csvs(const SelectionReport& report, const SofmGrid& grid,
                          const std::vector<std::string>& names, const std::filesystem::path& dir) {
  std::ostringstream corr;
  corr << "feature";
  for (const auto& n : names) corr << ',' << n;
  corr << '\n';
  for (std::size_t r = 0; r < report.correlation.rows(); ++r) {
    corr << names[r];
    for (std::size_t c = 0; c < report.correlation.cols(); ++c) corr << ',' << format_double(report.correlation(r, c));
    corr << '\n';
  }
  write_file(dir / "correlations.csv", corr.str());

  std::ostringstream dec;
  dec << "feature,decision,reason,partner,rho,plane_variance\n";
  std::vector<const DroppedFeature*> why(names.size(), nullptr);
  for (const auto& d : report.dropped) why[d.index] = &d;
  for (std::size_t i = 0; i < names.size(); ++i) {
    dec << names[i] << ',';
    if (const DroppedFeature* d = why[i]) {
      dec << "drop," << to_string(d->reason) << ',';
      if (d->reason == DropReason::Correlated) dec << names[d->partner] << ',' << format_double(d->rho);
      else dec << ',';
    } else {
      dec << "keep,,,";
    }
    dec << ',' << format_double(report.plane_variance[i]) << '\n';
  }
  write_file(dir / "decisions.csv", dec.str());
  write_planes_csv(grid, names, dir / "planes.csv");
}

std::string build_timestamp() {
  const char* env = std::getenv("SOURCE_DATE_EPOCH");
  if (!env || !*env) return {};
  char* end = nullptr;
  const long long secs = std::strtoll(env, &end, 10);
  if (*end != '\0' || secs < 0) return {};
  const std::time_t t = static_cast<std::time_t>(secs);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace skinshape
