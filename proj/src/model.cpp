#include "skinshape/model.hpp"

#include <json.hpp>

#include "skinshape/error.hpp"
#include "skinshape/table.hpp"

namespace skinshape {

using json = nlohmann::ordered_json;

namespace {

json standardizer_json(const Standardizer& s) { return {{"mean", s.mean}, {"scale", s.scale}}; }

Standardizer standardizer_from(const json& j) {
  return {j.at("mean").get<std::vector<double>>(), j.at("scale").get<std::vector<double>>()};
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

Matrix matrix_from(const json& j, std::size_t cols) {
  Matrix m;
  for (const auto& row : j) {
    const auto v = row.get<std::vector<double>>();
    if (v.size() != cols) throw DimensionMismatch(cols, v.size());
    m.append_row(v);
  }
  return m;
}

void check_dimension(std::size_t d, std::size_t got) {
  if (got != d) throw DimensionMismatch(d, got);
}

}  // namespace

void TrainedModel::validate() const {
  const std::size_t d = dimension();
  if (mlp) {
    check_dimension(d, mlp->dimension());
    check_dimension(d, mlp->network.inputs());
  }
  if (nf) {
    check_dimension(d, nf->dimension());
    for (const auto& r : nf->rules) {
      check_dimension(d, r.center.size());
      check_dimension(d, r.width.size());
      check_dimension(d + 1, r.coefficients.size());
    }
  }
  if (sofm) {
    check_dimension(d, sofm->dimension());
    check_dimension(d, sofm->grid.dimension());
  }
  fusion.validate();
}

std::string serialize_model(const TrainedModel& model) {
  model.validate();
  json j;
  j["format"] = "skinshape-model";
  j["version"] = model.version;
  j["provenance"] = {{"seed", model.provenance.seed},
                     {"dataset_hash", model.provenance.dataset_hash},
                     {"timestamp", model.provenance.timestamp}};
  j["pipeline"] = {{"max_side", model.pipeline.max_side},
                   {"theta", model.pipeline.theta},
                   {"c_open", model.pipeline.morphology.c_open},
                   {"c_close", model.pipeline.morphology.c_close}};

  // Sparse cells: [index, skin count, non-skin count].
  json cells = json::array();
  const auto sk = model.skin.skin_counts();
  const auto ns = model.skin.nonskin_counts();
  for (std::size_t i = 0; i < sk.size(); ++i) {
    if (sk[i] || ns[i]) cells.push_back(json::array({i, sk[i], ns[i]}));
  }
  j["skin"] = {{"bins", model.skin.bins()}, {"cells", cells}};
  j["features"] = {{"dimension", model.dimension()}, {"names", model.feature_names}};

  if (model.mlp) {
    j["mlp"] = {{"standardizer", standardizer_json(model.mlp->standardizer)},
                {"hidden", model.mlp->network.hidden()},
                {"params", model.mlp->network.params()}};
  }
  if (model.nf) {
    json rules = json::array();
    for (const auto& r : model.nf->rules) {
      rules.push_back({{"center", r.center}, {"width", r.width}, {"coefficients", r.coefficients}});
    }
    j["nf"] = {{"standardizer", standardizer_json(model.nf->standardizer)}, {"rules", rules}};
  }
  if (model.sofm) {
    j["sofm"] = {{"standardizer", standardizer_json(model.sofm->standardizer)},
                 {"rows", model.sofm->grid.rows()},
                 {"cols", model.sofm->grid.cols()},
                 {"weights", matrix_json(model.sofm->grid.weights())},
                 {"labels", model.sofm->neuron_labels}};
  }
  j["fusion"] = {{"mu1", model.fusion.mu1}, {"mu2", model.fusion.mu2}, {"mu12", model.fusion.mu12}};
  return j.dump(1) + "\n";
}

TrainedModel parse_model(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("model is not valid JSON: ") + e.what());
  }
  try {
    if (j.value("format", "") != "skinshape-model") throw Error("not a skinshape model");
    TrainedModel m;
    m.version = j.at("version").get<int>();
    if (m.version != kModelFormatVersion) {
      throw Error("unsupported model version " + std::to_string(m.version));
    }
    const auto& p = j.at("provenance");
    m.provenance = {p.at("seed").get<std::uint64_t>(), p.at("dataset_hash").get<std::string>(),
                    p.at("timestamp").get<std::string>()};
    const auto& pl = j.at("pipeline");
    m.pipeline.max_side = pl.at("max_side").get<int>();
    m.pipeline.theta = pl.at("theta").get<double>();
    m.pipeline.morphology = {pl.at("c_open").get<double>(), pl.at("c_close").get<double>()};

    const int bins = j.at("skin").at("bins").get<int>();
    const std::size_t n = static_cast<std::size_t>(bins) * bins * bins;
    std::vector<std::uint32_t> sk(n), ns(n);
    for (const auto& c : j.at("skin").at("cells")) {
      const auto i = c.at(0).get<std::size_t>();
      if (i >= n) throw Error("skin cell index out of range");
      sk[i] = c.at(1).get<std::uint32_t>();
      ns[i] = c.at(2).get<std::uint32_t>();
    }
    m.skin = SkinHistogramModel(bins, std::move(sk), std::move(ns));

    m.feature_names = j.at("features").at("names").get<std::vector<std::string>>();
    check_dimension(j.at("features").at("dimension").get<std::size_t>(), m.feature_names.size());
    const std::size_t d = m.dimension();

    if (j.contains("mlp")) {
      const auto& x = j.at("mlp");
      MlpModel mlp;
      mlp.standardizer = standardizer_from(x.at("standardizer"));
      mlp.network = MlpNetwork(d, x.at("hidden").get<std::size_t>(), x.at("params").get<std::vector<double>>());
      m.mlp = std::move(mlp);
    }
    if (j.contains("nf")) {
      const auto& x = j.at("nf");
      NfModel nf;
      nf.standardizer = standardizer_from(x.at("standardizer"));
      for (const auto& r : x.at("rules")) {
        nf.rules.push_back({r.at("center").get<std::vector<double>>(), r.at("width").get<std::vector<double>>(),
                            r.at("coefficients").get<std::vector<double>>()});
      }
      m.nf = std::move(nf);
    }
    if (j.contains("sofm")) {
      const auto& x = j.at("sofm");
      SofmClassifier s;
      s.standardizer = standardizer_from(x.at("standardizer"));
      s.grid = SofmGrid(x.at("rows").get<int>(), x.at("cols").get<int>(), matrix_from(x.at("weights"), d), true);
      s.neuron_labels = x.at("labels").get<std::vector<int>>();
      if (s.neuron_labels.size() != s.grid.neurons()) throw Error("sofm label count mismatch");
      m.sofm = std::move(s);
    }
    const auto& f = j.at("fusion");
    m.fusion = {f.at("mu1").get<double>(), f.at("mu2").get<double>(), f.at("mu12").get<double>()};
    m.validate();
    return m;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed model: ") + e.what());
  }
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  write_file(path, serialize_model(model));
}

TrainedModel load_model(const std::filesystem::path& path) { return parse_model(read_file(path)); }

ImageScores score_features(const TrainedModel& model, std::span<const double> features, bool no_skin) {
  if (!model.has_classifiers()) throw Error("model has no trained classifiers");
  if (features.size() != model.dimension()) throw DimensionMismatch(model.dimension(), features.size());
  ImageScores s;
  s.no_skin = no_skin;
  if (no_skin) return s;
  s.mlp = mlp_predict(*model.mlp, features);
  s.nf = nf_predict(*model.nf, features);
  if (model.sofm) s.sofm = sofm_predict(*model.sofm, features);
  s.fused = fuse(s.mlp, s.nf, model.fusion);
  return s;
}

ImageScores score_image(const TrainedModel& model, const RasterImage& image) {
  if (model.feature_names != feature_names()) throw Error("model feature spec does not match this build");
  const ImageAnalysis a = analyze_image(image, model.skin, model.pipeline);
  return score_features(model, a.features.values, a.no_skin());
}

}  // namespace skinshape
