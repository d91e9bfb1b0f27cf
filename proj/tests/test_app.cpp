#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "skinshape/app.hpp"
#include "skinshape/error.hpp"
#include "skinshape/image.hpp"
#include "skinshape/synth.hpp"
#include "tempdir.hpp"

using namespace skinshape;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string output;
};

// Runs the CLI with stdout and stderr merged.
Run cli(const std::string& args, const std::string& env = {}) {
  TempDir scratch("cli-out");
  const fs::path log = scratch / "log.txt";
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" + SKINSHAPE_CLI + "\" --jobs 1 " + args + " > \"" +
                          log.string() + "\" 2>&1";
  const int raw = std::system(cmd.c_str());
  Run r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.output = fs::exists(log) ? read_file(log) : "";
  return r;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

// Figure positives against skin-free scenes.
CorpusManifest toy_corpus(const fs::path& dir, std::size_t per_class) {
  fs::create_directories(dir / "images");
  CorpusManifest m;
  m.base = dir;
  for (std::size_t i = 0; i < per_class; ++i) {
    for (const bool pos : {true, false}) {
      const auto img = synth_image(pos ? SynthKind::Figure : SynthKind::Scene, 500 + 2 * i + pos);
      const std::string rel = std::string("images/") + (pos ? "pos_" : "neg_") + std::to_string(i) + ".png";
      save_png(img.image, dir / rel);
      m.entries.push_back({rel, pos ? Label::Positive : Label::Negative, "train"});
    }
  }
  write_manifest(m, dir / "manifest.csv");
  return m;
}

}  // namespace

TEST_SUITE("app") {
  TEST_CASE("synth is reproducible and labels both classes") {
    TempDir a("synth-a"), b("synth-b");
    const auto ma = write_synthetic_corpus(a.path(), 6, 7);
    write_synthetic_corpus(b.path(), 6, 7);
    REQUIRE(ma.entries.size() == 12);
    CHECK(read_file(a / "manifest.csv") == read_file(b / "manifest.csv"));
    std::size_t pos = 0, test = 0;
    for (const auto& e : ma.entries) {
      CHECK(read_file(a.path() / e.path) == read_file(b.path() / e.path));
      pos += e.label == Label::Positive;
      test += e.split == "test";
    }
    CHECK(pos == 6);
    CHECK(test == 6);
    const RasterImage img = load_image(a.path() / ma.entries.front().path);
    CHECK(img.width() == kSynthWidth);
    CHECK(img.height() == kSynthHeight);
  }

  TEST_CASE("synth with n = 0 writes an empty manifest and warns") {
    TempDir dir("synth-empty");
    const Run r = cli("synth " + q(dir / "c") + " -n 0");
    CHECK(r.status == 0);
    CHECK(r.output.find("warning") != std::string::npos);
    CHECK(read_manifest(dir / "c/manifest.csv").entries.empty());
  }

  TEST_CASE("extract emits one row per image with a sentinel for skin-free input") {
    TempDir dir("extract");
    CorpusManifest m = toy_corpus(dir.path(), 5);
    save_png(RasterImage(120, 90, Rgb{30, 60, 200}), dir / "images/blue.png");
    m.entries.push_back({"images/blue.png", Label::Negative, "train"});
    write_manifest(m, dir / "manifest.csv");

    const Run r = cli("extract " + q(dir / "manifest.csv") + " -o " + q(dir / "f.csv"));
    REQUIRE(r.status == 0);
    const FeatureTable t = read_feature_table(dir / "f.csv");
    CHECK(t.size() == 11);
    CHECK(t.names.size() == kFeatureDimension);
    const std::string text = read_file(dir / "f.csv");
    const std::string header = text.substr(0, text.find('\n'));
    CHECK(static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')) + 1 == kFeatureDimension + 3);
    CHECK(t.paths.back() == "images/blue.png");
    CHECK(t.no_skin.back() == 1);
    for (double v : t.values.row(t.size() - 1)) CHECK(v == 0.0);
    for (std::size_t i = 0; i < 10; i += 2) CHECK(t.no_skin[i] == 0);

    const Run again = cli("extract " + q(dir / "manifest.csv") + " -o " + q(dir / "g.csv"));
    CHECK(again.status == 0);
    CHECK(read_file(dir / "f.csv") == read_file(dir / "g.csv"));

    const Run split = cli("extract " + q(dir / "manifest.csv") + " --split test -o " + q(dir / "h.csv"));
    CHECK(split.status == 0);
    CHECK(read_feature_table(dir / "h.csv").size() == 0);
  }

  TEST_CASE("extract fails past the 1% tolerance") {
    TempDir dir("extract-missing");
    CorpusManifest m = toy_corpus(dir.path(), 2);
    m.entries.push_back({"images/nope.png", Label::Positive, "train"});
    write_manifest(m, dir / "manifest.csv");
    const Run r = cli("extract " + q(dir / "manifest.csv") + " -o " + q(dir / "f.csv"));
    CHECK(r.status == 2);
    CHECK(r.output.find("nope.png") != std::string::npos);

    ExtractResult big;
    big.attempted = 200;
    big.failures.resize(2);
    CHECK_FALSE(big.over_tolerance());
    big.failures.resize(3);
    CHECK(big.over_tolerance());
  }

  TEST_CASE("train, classify and evaluate on a separable toy corpus") {
    TempDir dir("pipeline");
    toy_corpus(dir.path(), 10);
    REQUIRE(cli("extract " + q(dir / "manifest.csv") + " -o " + q(dir / "f.csv")).status == 0);
    const Run tr = cli("--seed 4 train " + q(dir / "f.csv") + " -o " + q(dir / "model.json") +
                       " --mlp-epochs 60 --nf-epochs 10 --sofm-epochs 10");
    REQUIRE(tr.status == 0);
    for (const char* f : {"model.json", "mlp_curve.csv", "nf_curve.csv", "mu_sweep.csv"}) CHECK(fs::exists(dir / f));
    CHECK(count_lines(read_file(dir / "mu_sweep.csv")) == 102);

    const Run ev = cli("--model " + q(dir / "model.json") + " evaluate " + q(dir / "manifest.csv") + " --report " +
                       q(dir / "eval.csv"));
    REQUIRE(ev.status == 0);
    const std::string csv = read_file(dir / "eval.csv");
    const auto at = csv.find("\nfused,");
    REQUIRE(at != std::string::npos);
    std::istringstream row(csv.substr(at + 1));
    std::string line;
    std::getline(row, line);
    const auto f = split_csv_line(line);
    REQUIRE(f.size() == 9);
    CHECK(f[5] == "1");  // tp_rate
    CHECK(f[6] == "0");  // fp_rate

    save_png(RasterImage(80, 60, Rgb{20, 120, 60}), dir / "green.png");
    const Run cl = cli("classify " + q(dir / "green.png") + " " + q(dir / "images/pos_0.png"),
                       "SKINSHAPE_MODEL=" + q(dir / "model.json"));
    CHECK(cl.status == 0);
    CHECK(cl.output.find((dir / "green.png").string() + "\t0.000\tnegative\n") != std::string::npos);
    CHECK(cl.output.find((dir / "images/pos_0.png").string() + "\t") != std::string::npos);
    CHECK(cl.output.find("\tpositive\n") != std::string::npos);

    // Nothing exceeds a threshold of 1.
    const Run half = cli("--mu1 0.5 --mu2 0.5 --threshold 1 classify " + q(dir / "images/pos_0.png"),
                         "SKINSHAPE_MODEL=" + q(dir / "model.json"));
    CHECK(half.output.find("\tnegative\n") != std::string::npos);

    const Run bad = cli("--model " + q(dir / "model.json") + " classify " + q(dir / "missing.png"));
    CHECK(bad.status == 1);
    CHECK(bad.output.find("\terror\t") != std::string::npos);
  }

  TEST_CASE("evaluate skips unlabeled entries and rejects empty manifests") {
    TempDir dir("evaluate");
    CorpusManifest m = toy_corpus(dir.path(), 6);
    const TrainedModel skin = default_skin_container();
    const ExtractResult r = extract_features(m, skin.skin, skin.pipeline, "", 1);
    TrainSettings s;
    s.mlp_epochs = 40;
    s.nf_epochs = 5;
    s.sofm_epochs = 5;
    save_model(train_model(r.table, skin, s).model, dir / "model.json");

    m.entries[0].label = Label::Unlabeled;
    write_manifest(m, dir / "partial.csv");
    const Run ev = cli("--model " + q(dir / "model.json") + " evaluate " + q(dir / "partial.csv"));
    CHECK(ev.status == 0);
    CHECK(ev.output.find("skipped 1 unlabeled") != std::string::npos);

    write_manifest(CorpusManifest{}, dir / "empty.csv");
    const Run empty = cli("--model " + q(dir / "model.json") + " evaluate " + q(dir / "empty.csv"));
    CHECK(empty.status == 1);
    CHECK(empty.output.find("error") != std::string::npos);

    FeatureTable none;
    none.names = feature_names();
    CHECK_THROWS_AS(evaluate_table(load_model(dir / "model.json"), none, 0.5), Error);
  }

  TEST_CASE("single-class features cannot be trained from the command line") {
    TempDir dir("one-class");
    CorpusManifest m = toy_corpus(dir.path(), 3);
    for (auto& e : m.entries) e.label = Label::Positive;
    write_manifest(m, dir / "manifest.csv");
    REQUIRE(cli("extract " + q(dir / "manifest.csv") + " -o " + q(dir / "f.csv")).status == 0);
    const Run tr = cli("train " + q(dir / "f.csv") + " -o " + q(dir / "model.json"));
    CHECK(tr.status == 1);
    CHECK(tr.output.find("degenerate labels") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "model.json"));
  }

  TEST_CASE("commands needing a model say so") {
    TempDir dir("no-model");
    const Run r = cli("classify " + q(dir / "x.png"), "env -u SKINSHAPE_MODEL");
    CHECK(r.status != 0);
    CHECK(r.output.find("model") != std::string::npos);
  }

  TEST_CASE("shipped default skin histogram matches the generator") {
    const fs::path shipped = fs::path(SKINSHAPE_SOURCE_DIR) / "data/default_skin.bin";
    REQUIRE(fs::exists(shipped));
    CHECK(read_skin_histogram(shipped) == synthetic_skin_model());
  }

  TEST_CASE("default skin model rejects colors never seen as skin") {
    const SkinHistogramModel m = default_skin_container().skin;
    const int step = 256 / m.bins();
    std::size_t unseen = 0;
    for (int r = 0; r < 256; r += step)
      for (int g = 0; g < 256; g += step)
        for (int b = 0; b < 256; b += step) {
          const Rgb c{static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g), static_cast<std::uint8_t>(b)};
          if (m.skin_counts()[m.cell_index(c)] != 0) continue;
          ++unseen;
          CHECK(m.posterior(c) < 0.5);
        }
    CHECK(unseen > m.cell_count() / 2);
    Rng rng(3);
    std::size_t hits = 0;
    for (int i = 0; i < 500; ++i) hits += m.posterior(skin_tone(rng)) >= 0.5;
    CHECK(hits >= 490);
  }
}
