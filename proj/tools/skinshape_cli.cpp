// skinshape: skin-region shape classifier command line.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "skinshape/app.hpp"
#include "skinshape/boundary.hpp"
#include "skinshape/error.hpp"
#include "skinshape/synth.hpp"

namespace fs = std::filesystem;
using namespace skinshape;

namespace {

TrainedModel load_required(const std::optional<fs::path>& flag) {
  const auto path = model_path(flag);
  if (!path) throw Error("no model given (use --model or SKINSHAPE_MODEL)");
  return load_model(*path);
}

TrainedModel load_skin(const std::optional<fs::path>& flag) {
  const auto path = model_path(flag);
  return path ? load_model(*path) : default_skin_container();
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
}

std::optional<FusionParams> fusion_override(const GlobalOptions& g) {
  if (!g.mu1 && !g.mu2 && !g.mu12) return std::nullopt;
  FusionParams p;
  if (g.mu1) p.mu1 = *g.mu1;
  if (g.mu2) p.mu2 = *g.mu2;
  else if (g.mu1) p.mu2 = 1.0 - *g.mu1;
  if (g.mu12) p.mu12 = *g.mu12;
  p.validate();
  return p;
}

void apply_fusion(TrainedModel& m, const GlobalOptions& g) {
  if (auto p = fusion_override(g)) m.fusion = *p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Skin-region shape classifier"};
  app.require_subcommand(1);
  GlobalOptions g;
  std::optional<fs::path> model_flag;

  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--max-side", g.max_side, "Working resolution (longer side)");
  app.add_option("--theta", g.theta, "Skin posterior threshold");
  app.add_option("--c-open", g.c_open, "Opening radius divisor");
  app.add_option("--c-close", g.c_close, "Closing radius divisor");
  app.add_option("--folds", g.folds, "Cross-validation folds")->capture_default_str();
  app.add_option("--mu1", g.mu1, "Fusion weight of the MLP");
  app.add_option("--mu2", g.mu2, "Fusion weight of the NF classifier");
  app.add_option("--mu12", g.mu12, "Fusion weight of the pair");
  app.add_option("--threshold", g.threshold, "Decision threshold")->capture_default_str();
  app.add_option("--jobs", g.jobs, "Worker threads (0 = all cores)");
  app.add_option("--model", model_flag, "Model file (default $SKINSHAPE_MODEL)");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic labeled corpus");
  fs::path synth_out;
  std::size_t per_class = 200;
  double test_fraction = 0.5;
  synth->add_option("out", synth_out, "Output directory")->required();
  synth->add_option("-n,--n", per_class, "Images per class")->capture_default_str();
  synth->add_option("--test-fraction", test_fraction, "Share tagged test")->capture_default_str();

  auto* train_skin = app.add_subcommand("train-skin", "Train the skin color histogram");
  fs::path skin_out;
  std::optional<fs::path> pairs, export_bin;
  int bins = kDefaultSkinBins;
  int synth_images = 6;
  train_skin->add_option("-o,--out", skin_out, "Output model")->required();
  train_skin->add_option("--pairs", pairs, "CSV of image,mask pairs (mask nonzero = skin)");
  train_skin->add_option("--bins", bins, "Bins per channel (16, 32, 64)")->capture_default_str();
  train_skin->add_option("--synthetic-images", synth_images, "Rendered images per kind")->capture_default_str();
  train_skin->add_option("--export", export_bin, "Also write the flat binary histogram");

  auto* extract = app.add_subcommand("extract", "Extract feature vectors from a manifest");
  fs::path extract_manifest, extract_out;
  std::string extract_split;
  extract->add_option("manifest", extract_manifest, "Manifest CSV")->required();
  extract->add_option("-o,--out", extract_out, "Feature CSV")->required();
  extract->add_option("--split", extract_split, "Only rows with this split tag");

  auto* select = app.add_subcommand("select", "SOFM and correlation feature selection report");
  fs::path select_in, select_out;
  double rho_max = kDefaultRhoMax, var_min = kDefaultVarMin;
  select->add_option("features", select_in, "Feature CSV")->required();
  select->add_option("-o,--out", select_out, "Report directory")->required();
  select->add_option("--rho-max", rho_max)->capture_default_str();
  select->add_option("--var-min", var_min)->capture_default_str();

  auto* train = app.add_subcommand("train", "Train the classifiers and fusion weights");
  fs::path train_in, train_out;
  std::optional<fs::path> report_dir;
  TrainSettings ts;
  train->add_option("features", train_in, "Feature CSV")->required();
  train->add_option("-o,--out", train_out, "Output model")->required();
  train->add_option("--reports", report_dir, "Directory for curve and sweep CSVs (default: next to the model)");
  train->add_option("--mlp-epochs", ts.mlp_epochs)->capture_default_str();
  train->add_option("--nf-epochs", ts.nf_epochs)->capture_default_str();
  train->add_option("--sofm-epochs", ts.sofm_epochs)->capture_default_str();

  auto* classify = app.add_subcommand("classify", "Score images");
  std::vector<fs::path> images;
  classify->add_option("images", images, "Image files")->required();

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Evaluate on a labeled manifest");
  fs::path eval_manifest;
  std::string eval_split;
  std::optional<fs::path> eval_report;
  evaluate_cmd->add_option("manifest", eval_manifest, "Manifest CSV")->required();
  evaluate_cmd->add_option("--split", eval_split, "Only rows with this split tag");
  evaluate_cmd->add_option("--report", eval_report, "Write the table as CSV");

  auto* inspect = app.add_subcommand("inspect", "Dump boundary, reconstruction, signature and planes");
  fs::path inspect_image, inspect_out;
  std::size_t terms = 10;
  inspect->add_option("image", inspect_image, "Image file")->required();
  inspect->add_option("-o,--out", inspect_out, "Output directory")->required();
  inspect->add_option("--terms", terms, "Reconstruction terms m")->capture_default_str();

  app.fallthrough();
  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      if (per_class == 0) std::cerr << "warning: n = 0, writing an empty manifest\n";
      const auto m = write_synthetic_corpus(synth_out, per_class, g.seed, test_fraction);
      std::cout << "wrote " << m.entries.size() << " images to " << synth_out.string() << "\n";
      return 0;
    }

    if (*train_skin) {
      TrainedModel m;
      if (pairs) {
        SkinHistogramAccumulator acc(bins);
        const std::string text = read_file(*pairs);
        std::size_t start = 0, line_no = 0;
        while (start < text.size()) {
          std::size_t end = text.find('\n', start);
          if (end == std::string::npos) end = text.size();
          std::string line = text.substr(start, end - start);
          start = end + 1;
          if (!line.empty() && line.back() == '\r') line.pop_back();
          if (line.empty() || line_no++ == 0) continue;
          const auto f = split_csv_line(line);
          if (f.size() < 2) throw Error("pairs line needs image,mask: " + line);
          const fs::path base = pairs->parent_path();
          const auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };
          const RasterImage img = load_image(resolve(f[0]));
          const RasterImage mask = load_image(resolve(f[1]));
          if (mask.width() != img.width() || mask.height() != img.height()) throw Error("mask size differs: " + f[1]);
          BinaryMask truth(img.width(), img.height());
          for (std::size_t i = 0; i < truth.bits.size(); ++i) {
            const Rgb c = mask.pixels()[i];
            truth.bits[i] = (c.r | c.g | c.b) ? 1 : 0;
          }
          acc.add_labeled(img, truth);
        }
        m.skin = acc.build();
      } else {
        m.skin = synthetic_skin_model(g.seed, synth_images, bins);
      }
      m.pipeline = g.pipeline(m.pipeline);
      m.feature_names = feature_names();
      m.provenance = {g.seed, {}, build_timestamp()};
      save_model(m, skin_out);
      if (export_bin) write_skin_histogram(m.skin, *export_bin);
      std::cout << "skin histogram: " << m.skin.skin_total() << " skin / " << m.skin.nonskin_total()
                << " non-skin pixels\n";
      return 0;
    }

    if (*extract) {
      const TrainedModel skin = load_skin(model_flag);
      const auto manifest = read_manifest(extract_manifest);
      const auto r = extract_features(manifest, skin.skin, g.pipeline(skin.pipeline), extract_split, g.worker_count());
      for (const auto& [path, why] : r.failures) std::cerr << "failed: " << path << ": " << why << "\n";
      write_feature_table(r.table, extract_out);
      std::cout << "extracted " << r.table.size() << " of " << r.attempted << " images\n";
      if (r.over_tolerance()) {
        std::cerr << "error: " << r.failures.size() << " failures exceed the 1% tolerance\n";
        return 2;
      }
      return 0;
    }

    if (*select) {
      const FeatureTable t = read_feature_table(select_in);
      const Matrix z = Standardizer::fit(t.values).apply(t.values);
      SofmConfig sc;
      sc.seed = g.seed;
      const SofmGrid grid = train_sofm(z, sc);
      const SelectionReport rep = select_features(grid, correlation_matrix(t.values).rho, rho_max, var_min);
      ensure_dir(select_out);
      write_selection_csvs(rep, grid, t.names, select_out);
      std::cout << "kept " << rep.kept.size() << " of " << t.names.size() << " features\n";
      return 0;
    }

    if (*train) {
      const std::string bytes = read_file(train_in);
      const FeatureTable t = read_feature_table(train_in);
      TrainedModel skin = load_skin(model_flag);
      skin.pipeline = g.pipeline(skin.pipeline);
      ts.seed = g.seed;
      ts.folds = g.folds;
      ts.fusion = fusion_override(g);
      const TrainOutcome o = train_model(t, skin, ts, hex64(fnv1a(bytes)));
      save_model(o.model, train_out);
      const fs::path dir = report_dir ? *report_dir : train_out.parent_path();
      if (!dir.empty()) ensure_dir(dir);
      write_curve_csv(o.mlp_report, dir / "mlp_curve.csv");
      write_curve_csv(o.nf_report, dir / "nf_curve.csv");
      write_sweep_csv(o.mu_search, dir / "mu_sweep.csv");
      std::printf("mlp epoch %d, nf epoch %d, mu1 %.2f mu2 %.2f\n", o.mlp_report.selected_epoch,
                  o.nf_report.selected_epoch, o.model.fusion.mu1, o.model.fusion.mu2);
      return 0;
    }

    if (*classify) {
      TrainedModel m = load_required(model_flag);
      m.pipeline = g.pipeline(m.pipeline);
      apply_fusion(m, g);
      struct Line {
        std::optional<ImageScores> scores;
        std::string error;
      };
      const auto lines = parallel_map<Line>(images.size(), g.worker_count(), [&](std::size_t i) {
        Line l;
        try {
          l.scores = score_image(m, load_image(images[i]));
        } catch (const std::exception& e) {
          l.error = e.what();
        }
        return l;
      });
      int status = 0;
      for (std::size_t i = 0; i < images.size(); ++i) {
        if (!lines[i].scores) {
          std::printf("%s\terror\t%s\n", images[i].string().c_str(), lines[i].error.c_str());
          status = 1;
          continue;
        }
        const double s = lines[i].scores->fused;
        std::printf("%s\t%.3f\t%s\n", images[i].string().c_str(), s, s > g.threshold ? "positive" : "negative");
      }
      return status;
    }

    if (*evaluate_cmd) {
      TrainedModel m = load_required(model_flag);
      m.pipeline = g.pipeline(m.pipeline);
      apply_fusion(m, g);
      const auto manifest = read_manifest(eval_manifest);
      const auto r = extract_features(manifest, m.skin, m.pipeline, eval_split, g.worker_count());
      for (const auto& [path, why] : r.failures) std::cerr << "failed: " << path << ": " << why << "\n";
      if (r.attempted == 0) throw Error("manifest has no entries to evaluate");
      const EvaluationSummary s = evaluate_table(m, r.table, g.threshold);
      if (s.unlabeled) std::cerr << "warning: skipped " << s.unlabeled << " unlabeled entries\n";
      print_evaluation(s, std::cout);
      if (eval_report) write_evaluation_csv(s, *eval_report);
      return r.failures.empty() ? 0 : 1;
    }

    if (*inspect) {
      const TrainedModel m = load_skin(model_flag);
      const ImageAnalysis a = analyze_image(load_image(inspect_image), m.skin, g.pipeline(m.pipeline));
      ensure_dir(inspect_out);
      if (m.sofm) write_planes_csv(m.sofm->grid, m.feature_names, inspect_out / "planes.csv");
      if (!a.boundary || !a.descriptors || !a.signature) {
        std::cerr << (a.no_skin() ? "no skin region found\n" : "degenerate boundary\n");
        return 1;
      }
      std::string text = "index,x,y\n";
      for (std::size_t k = 0; k < a.boundary->size(); ++k) {
        text += std::to_string(k) + ',' + std::to_string(a.boundary->points[k].x) + ',' +
                std::to_string(a.boundary->points[k].y) + '\n';
      }
      write_file(inspect_out / "boundary.csv", text);
      const auto rec = reconstruct_boundary(*a.descriptors, std::min(terms, a.descriptors->size()));
      text = "index,x,y\n";
      for (std::size_t k = 0; k < rec.size(); ++k) {
        text += std::to_string(k) + ',' + format_double(rec[k].real()) + ',' + format_double(rec[k].imag()) + '\n';
      }
      write_file(inspect_out / "reconstruction.csv", text);
      text = "theta,r\n";
      for (int d = 0; d < kSignatureBins; ++d) {
        text += std::to_string(d) + ',' + format_double(a.signature->samples[static_cast<std::size_t>(d)]) + '\n';
      }
      write_file(inspect_out / "signature.csv", text);
      std::cout << "boundary points " << a.boundary->size() << ", peaks " << a.signature->peak_count << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
