// Copyright 2026 The plumescreen Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "plumescreen/cli.hpp"
#include "plumescreen/error.hpp"
#include "plumescreen/feature_table.hpp"
#include "plumescreen/features.hpp"
#include "plumescreen/learners.hpp"
#include "plumescreen/metrics.hpp"
#include "plumescreen/pack.hpp"
#include "plumescreen/shap.hpp"
#include "plumescreen/synthgen.hpp"
#include "plumescreen/validation.hpp"

namespace py = pybind11;
namespace ps = plumescreen;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using IntArray = py::array_t<int, py::array::c_style | py::array::forcecast>;

ps::Matrix to_matrix(const DoubleArray& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-D array");
  ps::Matrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
  const auto r = a.unchecked<2>();
  for (py::ssize_t i = 0; i < a.shape(0); ++i) {
    for (py::ssize_t j = 0; j < a.shape(1); ++j) m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = r(i, j);
  }
  return m;
}

std::vector<double> to_vector(const DoubleArray& a) {
  if (a.ndim() != 1) throw py::value_error("expected a 1-D array");
  return {a.data(), a.data() + a.size()};
}

std::vector<int> to_labels(const IntArray& a) {
  if (a.ndim() != 1) throw py::value_error("expected a 1-D label array");
  return {a.data(), a.data() + a.size()};
}

DoubleArray from_vector(const std::vector<double>& v) {
  DoubleArray out(std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size())});
  auto w = out.mutable_unchecked<1>();
  for (std::size_t i = 0; i < v.size(); ++i) w(static_cast<py::ssize_t>(i)) = v[i];
  return out;
}

DoubleArray from_matrix(const ps::Matrix& m) {
  DoubleArray out({static_cast<py::ssize_t>(m.rows()), static_cast<py::ssize_t>(m.cols())});
  auto w = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) w(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(j)) = m(i, j);
  }
  return out;
}

py::dict table_dict(const ps::FeatureTable& t) {
  py::dict d;
  d["ids"] = t.ids;
  std::vector<std::string> labels;
  for (ps::Label l : t.labels) labels.emplace_back(ps::label_name(l));
  d["labels"] = labels;
  d["names"] = t.names;
  d["X"] = from_matrix(t.X);
  return d;
}

py::dict patch_dict(const ps::ScenePatch& p) {
  py::dict d;
  d["id"] = p.id();
  d["label"] = std::string(ps::label_name(p.label()));
  d["pixel_area_km2"] = p.pixel_area_km2();
  py::array_t<float> data({ps::kChannelCount, ps::kSide, ps::kSide});
  std::copy(p.raw().begin(), p.raw().end(), data.mutable_data());
  d["data"] = data;
  py::array_t<bool> valid({ps::kSide, ps::kSide});
  for (int i = 0; i < ps::kPixels; ++i) valid.mutable_data()[i] = p.valid().test(i);
  d["valid"] = valid;
  d["meta"] = p.meta();
  return d;
}

ps::Hyperparams params_from(ps::ModelKind kind, const std::string& params_json) {
  return ps::hyperparams_from_json(kind, nlohmann::json::parse(params_json.empty() ? "{}" : params_json));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "plumescreen core bindings";
  m.attr("__version__") = ps::tool_version();

  py::register_exception<ps::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ps::DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<ps::TrainingError>(m, "TrainingError", PyExc_RuntimeError);

  m.def("feature_names", &ps::feature_names);
  m.def("channel_names", [] {
    std::vector<std::string> out;
    for (ps::ChannelId c : ps::all_channels()) out.emplace_back(ps::channel_name(c));
    return out;
  });

  m.def(
      "generate_pack",
      [](const std::string& path, std::uint64_t seed, std::size_t n, double plume_fraction,
         const std::string& scenario) {
        ps::GenConfig cfg;
        cfg.seed = seed;
        cfg.n_scenes = n;
        cfg.plume_fraction = plume_fraction;
        auto j = cfg.to_json();
        j["scenario"] = scenario;
        cfg = ps::GenConfig::from_json(j);
        cfg.validate();
        py::gil_scoped_release release;
        ps::write_pack(ps::generate(cfg), path);
      },
      py::arg("path"), py::arg("seed"), py::arg("n"), py::arg("plume_fraction") = 0.5,
      py::arg("scenario") = "physical", "Generate a synthetic pack and write it to path.");

  m.def(
      "read_pack", [](const std::string& path) {
        py::list out;
        for (const auto& p : ps::read_pack(path)) out.append(patch_dict(p));
        return out;
      },
      py::arg("path"));

  m.def(
      "extract_features",
      [](const std::string& pack_path) {
        ps::FeatureTable table;
        {
          py::gil_scoped_release release;
          table = ps::extract_all(ps::read_pack(pack_path)).table;
        }
        return table_dict(table);
      },
      py::arg("pack_path"), "Features of every patch in a pack: dict(ids, labels, names, X).");

  m.def("read_feature_csv", [](const std::string& path) { return table_dict(ps::read_feature_csv(path)); });

  m.def(
      "average_precision",
      [](const DoubleArray& s, const IntArray& y) { return ps::average_precision(to_vector(s), to_labels(y)); },
      py::arg("scores"), py::arg("labels"));
  m.def(
      "roc_auc", [](const DoubleArray& s, const IntArray& y) { return ps::roc_auc(to_vector(s), to_labels(y)); },
      py::arg("scores"), py::arg("labels"));
  m.def(
      "balanced_accuracy",
      [](const DoubleArray& s, const IntArray& y, double threshold) {
        return ps::balanced_accuracy(to_vector(s), to_labels(y), threshold);
      },
      py::arg("scores"), py::arg("labels"), py::arg("threshold"));

  m.def(
      "stratified_kfold",
      [](const IntArray& y, int k, std::uint64_t seed) { return ps::stratified_kfold(to_labels(y), k, seed); },
      py::arg("labels"), py::arg("k"), py::arg("seed"));

  m.def(
      "_cross_validate",
      [](const DoubleArray& X, const IntArray& y, const std::string& kind, const std::string& params, int k,
         std::uint64_t seed) {
        const ps::Matrix m = to_matrix(X);
        const auto labels = to_labels(y);
        const auto hp = params_from(ps::model_kind_from_name(kind), params);
        ps::CvResult cv;
        {
          py::gil_scoped_release release;
          cv = ps::cross_validate(m, labels, hp, k, seed);
        }
        py::dict d;
        auto metrics = [](const ps::Metrics& mm) {
          py::dict r;
          r["ap"] = mm.ap;
          r["roc_auc"] = mm.roc_auc;
          r["balanced_accuracy"] = mm.balanced_accuracy;
          return r;
        };
        d["mean"] = metrics(cv.summary.mean);
        d["std"] = metrics(cv.summary.std);
        py::list folds;
        for (const auto& f : cv.folds) folds.append(metrics(f.metrics));
        d["folds"] = folds;
        return d;
      });

  py::class_<ps::TrainedModel>(m, "Model")
      .def_static(
          "_train",
          [](const DoubleArray& X, const IntArray& y, const std::string& kind, const std::string& params,
             std::uint64_t seed, std::vector<std::string> names) {
            const ps::Matrix m = to_matrix(X);
            const auto labels = to_labels(y);
            const auto hp = params_from(ps::model_kind_from_name(kind), params);
            py::gil_scoped_release release;
            return ps::train(m, labels, hp, seed, std::move(names));
          })
      .def_static("load", [](const std::string& path) { return ps::load_model(path); }, py::arg("path"))
      .def_static("from_json", [](const std::string& text) { return ps::model_from_json(nlohmann::json::parse(text)); })
      .def("save", [](const ps::TrainedModel& self, const std::string& path) { ps::save_model(self, path); })
      .def("to_json", [](const ps::TrainedModel& self) { return ps::model_to_json(self).dump(); })
      .def_property_readonly("kind", [](const ps::TrainedModel& self) { return std::string(ps::model_kind_name(self.kind)); })
      .def_readonly("feature_names", &ps::TrainedModel::feature_names)
      .def_property_readonly("hyperparams", [](const ps::TrainedModel& self) { return ps::to_json(self.hyperparams).dump(); })
      .def_property_readonly("n_trees", [](const ps::TrainedModel& self) { return self.trees.size(); })
      .def_property_readonly("default_threshold", &ps::TrainedModel::default_threshold)
      .def("score",
           [](const ps::TrainedModel& self, const DoubleArray& X) {
             return from_vector(self.score(to_matrix(X)));
           })
      .def("raw_output",
           [](const ps::TrainedModel& self, const DoubleArray& X) {
             const ps::Matrix m = to_matrix(X);
             std::vector<double> out(m.rows());
             for (std::size_t i = 0; i < m.rows(); ++i) out[i] = self.raw_output(m.row(i));
             return from_vector(out);
           })
      .def(
          "shap",
          [](const ps::TrainedModel& self, const DoubleArray& X) {
            const ps::Matrix m = to_matrix(X);
            std::vector<ps::Attribution> att;
            {
              py::gil_scoped_release release;
              att = ps::explain_all(self, m);
            }
            ps::Matrix phi(att.size(), self.n_features());
            std::vector<double> base(att.size());
            for (std::size_t i = 0; i < att.size(); ++i) {
              std::copy(att[i].phi.begin(), att[i].phi.end(), phi.row(i).begin());
              base[i] = att[i].base_value;
            }
            return py::make_tuple(from_matrix(phi), from_vector(base));
          },
          "TreeSHAP values (n, d) and base values (n,).");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = ps::run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
