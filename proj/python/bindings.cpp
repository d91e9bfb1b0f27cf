#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "skinshape/app.hpp"
#include "skinshape/error.hpp"
#include "skinshape/fourier.hpp"
#include "skinshape/fusion.hpp"
#include "skinshape/model.hpp"
#include "skinshape/morphology.hpp"
#include "skinshape/synth.hpp"

namespace py = pybind11;
using namespace skinshape;

namespace {

using MaskArray = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

BinaryMask to_mask(const MaskArray& a) {
  if (a.ndim() != 2) throw py::value_error("mask must be 2-D");
  BinaryMask m(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
  const auto* p = a.data();
  for (std::size_t i = 0; i < m.bits.size(); ++i) m.bits[i] = p[i] ? 1 : 0;
  return m;
}

MaskArray to_array(const BinaryMask& m) {
  MaskArray out({m.height, m.width});
  std::copy(m.bits.begin(), m.bits.end(), out.mutable_data());
  return out;
}

DescriptorSet descriptors_of(std::vector<Complex> coefficients) { return DescriptorSet{std::move(coefficients)}; }

py::dict scores_dict(const ImageScores& s) {
  py::dict d;
  d["no_skin"] = s.no_skin;
  d["mlp"] = s.mlp;
  d["nf"] = s.nf;
  d["sofm"] = s.sofm;
  d["fused"] = s.fused;
  return d;
}

std::vector<ScoredLabel> scored(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) throw DimensionMismatch(scores.size(), labels.size());
  std::vector<ScoredLabel> s(scores.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = {scores[i], labels[i]};
  return s;
}

}  // namespace

PYBIND11_MODULE(_skinshape, m) {
  m.doc() = "Skin detection and shape descriptors for image classification";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ImageError>(m, "ImageError", error.ptr());
  py::register_exception<DegenerateBoundary>(m, "DegenerateBoundary", error.ptr());
  py::register_exception<DegenerateContour>(m, "DegenerateContour", error.ptr());
  py::register_exception<DegenerateLabels>(m, "DegenerateLabels", error.ptr());
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", error.ptr());

  m.attr("FEATURE_DIMENSION") = kFeatureDimension;
  m.def("feature_names", &feature_names);
  m.def("disk_radius", &disk_radius, py::arg("width"), py::arg("height"), py::arg("c"));

  m.def("erode", [](const MaskArray& a, int r) { return to_array(erode(to_mask(a), r)); });
  m.def("dilate", [](const MaskArray& a, int r) { return to_array(dilate(to_mask(a), r)); });
  m.def("morph_open", [](const MaskArray& a, int r) { return to_array(morph_open(to_mask(a), r)); });
  m.def("morph_close", [](const MaskArray& a, int r) { return to_array(morph_close(to_mask(a), r)); });

  m.def("fourier_descriptors",
        [](const std::vector<Complex>& s) { return fourier_descriptors(s).coefficients; },
        "Unnormalized DFT coefficients of a closed contour given as complex points.");
  m.def("normalize_descriptors",
        [](std::vector<Complex> a) {
          const auto d = normalize_descriptors(descriptors_of(std::move(a)));
          return std::vector<double>(d.begin(), d.end());
        });
  m.def("reconstruct_boundary",
        [](std::vector<Complex> a, std::size_t keep) { return reconstruct_boundary(descriptors_of(std::move(a)), keep); },
        py::arg("coefficients"), py::arg("m"));

  py::class_<FusionParams>(m, "FusionParams")
      .def(py::init([](double mu1, double mu2, double mu12) { return FusionParams{mu1, mu2, mu12}; }),
           py::arg("mu1") = 0.47, py::arg("mu2") = 0.53, py::arg("mu12") = 1.0)
      .def_readwrite("mu1", &FusionParams::mu1)
      .def_readwrite("mu2", &FusionParams::mu2)
      .def_readwrite("mu12", &FusionParams::mu12)
      .def("__repr__", [](const FusionParams& p) {
        return "FusionParams(mu1=" + std::to_string(p.mu1) + ", mu2=" + std::to_string(p.mu2) +
               ", mu12=" + std::to_string(p.mu12) + ")";
      });
  m.def("fuse", [](double h1, double h2, const FusionParams& p) { return fuse(h1, h2, p); }, py::arg("h1"),
        py::arg("h2"), py::arg("params") = FusionParams{});

  m.def(
      "evaluate",
      [](const std::vector<double>& scores, const std::vector<int>& labels, double threshold) {
        const EvalResult r = evaluate(scored(scores, labels), threshold);
        py::dict d;
        d["tp"] = r.tp;
        d["fn"] = r.fn;
        d["fp"] = r.fp;
        d["tn"] = r.tn;
        d["tp_rate"] = r.tp_rate;
        d["fp_rate"] = r.fp_rate;
        d["accuracy"] = r.accuracy();
        d["youden"] = r.youden();
        return d;
      },
      py::arg("scores"), py::arg("labels"), py::arg("threshold") = kDecisionThreshold);

  m.def(
      "grid_search_mu",
      [](const std::vector<double>& h1, const std::vector<double>& h2, const std::vector<int>& labels, double step) {
        if (h1.size() != labels.size()) throw DimensionMismatch(labels.size(), h1.size());
        if (h2.size() != labels.size()) throw DimensionMismatch(labels.size(), h2.size());
        std::vector<FusionSample> s(labels.size());
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = {h1[i], h2[i], labels[i]};
        const MuSearchResult r = grid_search_mu(s, step);
        std::vector<std::tuple<double, double, double, double>> surface;
        for (const auto& p : r.surface) surface.emplace_back(p.mu1, p.tp_rate, p.fp_rate, p.objective);
        return py::make_tuple(r.best, surface);
      },
      py::arg("h1"), py::arg("h2"), py::arg("labels"), py::arg("step") = 0.01,
      "Returns (best FusionParams, [(mu1, tp_rate, fp_rate, objective), ...]).");

  py::class_<TrainedModel>(m, "Model")
      .def_static("load", &load_model, py::arg("path"))
      .def_static("default_skin", &default_skin_container, "Skin-only container with the built-in histogram.")
      .def_property_readonly("feature_names", [](const TrainedModel& t) { return t.feature_names; })
      .def_property_readonly("has_classifiers", &TrainedModel::has_classifiers)
      .def_readwrite("fusion", &TrainedModel::fusion)
      .def("save", [](const TrainedModel& t, const std::filesystem::path& p) { save_model(t, p); })
      .def("to_json", &serialize_model)
      .def(
          "features",
          [](const TrainedModel& t, const std::filesystem::path& image) {
            const ImageAnalysis a = analyze_image(load_image(image), t.skin, t.pipeline);
            py::dict d;
            for (std::size_t i = 0; i < t.feature_names.size(); ++i) d[py::str(t.feature_names[i])] = a.features.values[i];
            return py::make_tuple(d, a.no_skin());
          },
          py::arg("image"), "Returns (feature dict, no_skin) for an image file.")
      .def(
          "score_image",
          [](const TrainedModel& t, const std::filesystem::path& image) {
            return scores_dict(score_image(t, load_image(image)));
          },
          py::arg("image"))
      .def(
          "score_features",
          [](const TrainedModel& t, const std::vector<double>& row, bool no_skin) {
            return scores_dict(score_features(t, row, no_skin));
          },
          py::arg("features"), py::arg("no_skin") = false);

  m.def(
      "write_synthetic_corpus",
      [](const std::filesystem::path& dir, std::size_t per_class, std::uint64_t seed, double test_fraction) {
        const CorpusManifest c = write_synthetic_corpus(dir, per_class, seed, test_fraction);
        std::vector<std::tuple<std::string, std::string, std::string>> rows;
        for (const auto& e : c.entries) rows.emplace_back(e.path, to_string(e.label), e.split);
        return rows;
      },
      py::arg("dir"), py::arg("per_class"), py::arg("seed") = 1, py::arg("test_fraction") = 0.5,
      "Writes the corpus and returns manifest rows (path, label, split).");
}
