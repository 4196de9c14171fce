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

#include <cmath>
#include <fstream>

#include "plumescreen/error.hpp"
#include "plumescreen/feature_table.hpp"
#include "plumescreen/learners.hpp"

namespace plumescreen {
namespace {

using nlohmann::json;

int get_int(const json& v, const std::string& key) {
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d == std::floor(d) && std::abs(d) < 1e9) return static_cast<int>(d);
  }
  throw ConfigError("hyperparameter '" + key + "' must be an integer");
}

double get_double(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("hyperparameter '" + key + "' must be a number");
  return v.get<double>();
}

std::string get_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError("hyperparameter '" + key + "' must be a string");
  return v.get<std::string>();
}

json max_features_json(const MaxFeatures& mf) {
  switch (mf.rule) {
    case MaxFeatures::Rule::kSqrt: return "sqrt";
    case MaxFeatures::Rule::kLog2: return "log2";
    case MaxFeatures::Rule::kFraction: return mf.fraction;
  }
  return "sqrt";
}

std::string_view kernel_name(Kernel k) {
  switch (k) {
    case Kernel::kRbf: return "rbf";
    case Kernel::kLinear: return "linear";
    case Kernel::kPoly: return "poly";
  }
  return "rbf";
}

Kernel kernel_from_name(const std::string& name) {
  if (name == "rbf") return Kernel::kRbf;
  if (name == "linear") return Kernel::kLinear;
  if (name == "poly") return Kernel::kPoly;
  throw ConfigError("unknown kernel '" + name + "'");
}

std::vector<double> vector_of(const json& j, const char* what) {
  try {
    return j.get<std::vector<double>>();
  } catch (const json::exception&) {
    throw DataError(std::string("model file: '") + what + "' must be an array of numbers");
  }
}

}  // namespace

std::string_view model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kForest: return "forest";
    case ModelKind::kBoosted: return "boosted";
    case ModelKind::kSvc: return "svc";
  }
  return "forest";
}

ModelKind model_kind_from_name(std::string_view name) {
  if (name == "forest" || name == "rf") return ModelKind::kForest;
  if (name == "boosted" || name == "xgb") return ModelKind::kBoosted;
  if (name == "svc" || name == "svm") return ModelKind::kSvc;
  throw ConfigError("unknown model kind '" + std::string(name) + "' (expected forest, boosted or svc)");
}

ModelKind kind_of(const Hyperparams& hp) {
  return std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ForestParams>) return ModelKind::kForest;
        else if constexpr (std::is_same_v<T, BoostedParams>) return ModelKind::kBoosted;
        else return ModelKind::kSvc;
      },
      hp);
}

Hyperparams default_hyperparams(ModelKind kind) {
  switch (kind) {
    case ModelKind::kForest: return ForestParams{};
    case ModelKind::kBoosted: return BoostedParams{};
    case ModelKind::kSvc: return SvcParams{};
  }
  return ForestParams{};
}

nlohmann::json to_json(const Hyperparams& hp) {
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ForestParams>) {
          return {{"n_estimators", p.n_estimators},
                  {"criterion", p.criterion == Criterion::kGini ? "gini" : "entropy"},
                  {"min_samples_split", p.min_samples_split},
                  {"max_features", max_features_json(p.max_features)},
                  {"max_depth", p.max_depth ? json(*p.max_depth) : json(nullptr)},
                  {"max_samples", p.max_samples},
                  {"min_samples_leaf", p.min_samples_leaf},
                  {"bootstrap", p.bootstrap}};
        } else if constexpr (std::is_same_v<T, BoostedParams>) {
          return {{"n_estimators", p.n_estimators},     {"learning_rate", p.learning_rate},
                  {"gamma", p.gamma},                   {"max_depth", p.max_depth},
                  {"min_child_weight", p.min_child_weight}, {"subsample", p.subsample},
                  {"colsample_bytree", p.colsample_bytree}, {"reg_alpha", p.reg_alpha},
                  {"reg_lambda", p.reg_lambda}};
        } else {
          return {{"C", p.C},           {"kernel", std::string(kernel_name(p.kernel))},
                  {"gamma", p.gamma},   {"degree", p.degree},
                  {"tol", p.tol},       {"max_iter", p.max_iter}};
        }
      },
      hp);
}

Hyperparams hyperparams_from_json(ModelKind kind, const nlohmann::json& j) {
  if (!j.is_null() && !j.is_object()) throw ConfigError("hyperparameters must be a JSON object");
  const json obj = j.is_null() ? json::object() : j;
  switch (kind) {
    case ModelKind::kForest: {
      ForestParams p;
      for (const auto& [key, v] : obj.items()) {
        if (key == "n_estimators") p.n_estimators = get_int(v, key);
        else if (key == "criterion") {
          const auto name = get_string(v, key);
          if (name == "gini") p.criterion = Criterion::kGini;
          else if (name == "entropy") p.criterion = Criterion::kEntropy;
          else throw ConfigError("unknown criterion '" + name + "'");
        } else if (key == "min_samples_split") p.min_samples_split = get_int(v, key);
        else if (key == "max_features") {
          if (v.is_string()) {
            const auto name = v.get<std::string>();
            if (name == "sqrt") p.max_features = {MaxFeatures::Rule::kSqrt, 1.0};
            else if (name == "log2") p.max_features = {MaxFeatures::Rule::kLog2, 1.0};
            else throw ConfigError("unknown max_features '" + name + "'");
          } else {
            p.max_features = {MaxFeatures::Rule::kFraction, get_double(v, key)};
          }
        } else if (key == "max_depth") {
          if (v.is_null()) p.max_depth.reset();
          else p.max_depth = get_int(v, key);
        } else if (key == "max_samples") p.max_samples = get_double(v, key);
        else if (key == "min_samples_leaf") p.min_samples_leaf = get_int(v, key);
        else if (key == "bootstrap") {
          if (!v.is_boolean()) throw ConfigError("hyperparameter 'bootstrap' must be a boolean");
          p.bootstrap = v.get<bool>();
        } else throw ConfigError("unknown forest hyperparameter '" + key + "'");
      }
      p.validate();
      return p;
    }
    case ModelKind::kBoosted: {
      BoostedParams p;
      for (const auto& [key, v] : obj.items()) {
        if (key == "n_estimators") p.n_estimators = get_int(v, key);
        else if (key == "learning_rate") p.learning_rate = get_double(v, key);
        else if (key == "gamma") p.gamma = get_double(v, key);
        else if (key == "max_depth") p.max_depth = get_int(v, key);
        else if (key == "min_child_weight") p.min_child_weight = get_double(v, key);
        else if (key == "subsample") p.subsample = get_double(v, key);
        else if (key == "colsample_bytree") p.colsample_bytree = get_double(v, key);
        else if (key == "reg_alpha") p.reg_alpha = get_double(v, key);
        else if (key == "reg_lambda") p.reg_lambda = get_double(v, key);
        else throw ConfigError("unknown boosted hyperparameter '" + key + "'");
      }
      p.validate();
      return p;
    }
    case ModelKind::kSvc: {
      SvcParams p;
      for (const auto& [key, v] : obj.items()) {
        if (key == "C") p.C = get_double(v, key);
        else if (key == "kernel") p.kernel = kernel_from_name(get_string(v, key));
        else if (key == "gamma") p.gamma = get_double(v, key);
        else if (key == "degree") p.degree = get_int(v, key);
        else if (key == "tol") p.tol = get_double(v, key);
        else if (key == "max_iter") p.max_iter = get_int(v, key);
        else throw ConfigError("unknown svc hyperparameter '" + key + "'");
      }
      p.validate();
      return p;
    }
  }
  throw ConfigError("unknown model kind");
}

void check_training_data(const Matrix& X, std::span<const int> y) {
  if (X.rows() < 2) throw DataError("training needs at least 2 rows");
  if (X.cols() == 0) throw DataError("training needs at least 1 feature");
  if (y.size() != X.rows()) throw DataError("label count does not match row count");
  bool has_pos = false;
  bool has_neg = false;
  for (int label : y) {
    if (label != 0 && label != 1) throw DataError("labels must be 0 or 1");
    has_pos = has_pos || label == 1;
    has_neg = has_neg || label == 0;
  }
  if (!has_pos || !has_neg) throw DataError("training data must contain both classes");
  for (std::size_t r = 0; r < X.rows(); ++r) {
    for (double v : X.row(r)) {
      if (!std::isfinite(v)) throw DataError("non-finite feature value in row " + std::to_string(r));
    }
  }
}

std::vector<std::string> resolve_feature_names(std::vector<std::string> names, std::size_t cols) {
  if (names.empty()) {
    for (std::size_t c = 0; c < cols; ++c) names.push_back("f" + std::to_string(c));
  }
  if (names.size() != cols) throw DataError("feature name count does not match column count");
  return names;
}

TrainedModel train(const Matrix& X, std::span<const int> y, const Hyperparams& hp, std::uint64_t seed,
                   std::vector<std::string> feature_names) {
  return std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ForestParams>) return train_forest(X, y, p, seed, std::move(feature_names));
        else if constexpr (std::is_same_v<T, BoostedParams>) return train_boosted(X, y, p, seed, std::move(feature_names));
        else return train_svc(X, y, p, seed, std::move(feature_names));
      },
      hp);
}

double TrainedModel::raw_output(std::span<const double> x) const {
  if (x.size() != n_features()) {
    throw DataError("model expects " + std::to_string(n_features()) + " features, got " + std::to_string(x.size()));
  }
  switch (kind) {
    case ModelKind::kForest: {
      double sum = 0.0;
      for (const Tree& t : trees) sum += t.predict(x);
      return sum / static_cast<double>(trees.size());
    }
    case ModelKind::kBoosted: {
      double margin = base_score;
      for (const Tree& t : trees) margin += t.predict(x);
      return margin;
    }
    case ModelKind::kSvc: return svm->decision(x);
  }
  return 0.0;
}

double TrainedModel::score(std::span<const double> x) const {
  const double raw = raw_output(x);
  if (kind == ModelKind::kBoosted) return 1.0 / (1.0 + std::exp(-raw));
  return raw;
}

std::vector<double> TrainedModel::score(const Matrix& X) const {
  if (X.cols() != n_features()) {
    throw DataError("model expects " + std::to_string(n_features()) + " features, got " + std::to_string(X.cols()));
  }
  std::vector<double> out(X.rows());
  for (std::size_t r = 0; r < X.rows(); ++r) out[r] = score(X.row(r));
  return out;
}

nlohmann::json model_to_json(const TrainedModel& model) {
  json j = {
      {"format", "plumescreen-model"},
      {"version", kModelFormatVersion},
      {"kind", std::string(model_kind_name(model.kind))},
      {"feature_names", model.feature_names},
      {"hyperparams", to_json(model.hyperparams)},
      {"seed", model.seed},
  };
  if (model.kind == ModelKind::kSvc) {
    const SvmModel& s = *model.svm;
    json svs = json::array();
    for (std::size_t i = 0; i < s.support_vectors.rows(); ++i) {
      svs.push_back(std::vector<double>(s.support_vectors.row(i).begin(), s.support_vectors.row(i).end()));
    }
    j["svm"] = {{"kernel", std::string(kernel_name(s.kernel))},
                {"gamma", s.gamma},
                {"degree", s.degree},
                {"support_vectors", svs},
                {"dual_coefs", s.dual_coefs},
                {"bias", s.bias},
                {"iterations", s.iterations},
                {"scaler", {{"mean", s.scaler_mean}, {"scale", s.scaler_scale}}}};
  } else {
    if (model.kind == ModelKind::kBoosted) j["base_score"] = model.base_score;
    json trees = json::array();
    for (const Tree& t : model.trees) {
      json nodes = json::array();
      for (const TreeNode& n : t.nodes) {
        nodes.push_back({{"feature", n.feature},
                         {"threshold", n.threshold},
                         {"left", n.left},
                         {"right", n.right},
                         {"value", n.value},
                         {"n_samples", n.n_samples},
                         {"gain", n.gain}});
      }
      trees.push_back({{"nodes", nodes}});
    }
    j["trees"] = trees;
  }
  return j;
}

TrainedModel model_from_json(const nlohmann::json& j) {
  TrainedModel m;
  try {
    if (j.value("format", "") != "plumescreen-model") throw DataError("model file: missing format tag");
    if (j.at("version").get<int>() < 1) throw DataError("model file: bad version");
    m.kind = model_kind_from_name(j.at("kind").get<std::string>());
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    m.hyperparams = hyperparams_from_json(m.kind, j.at("hyperparams"));
    m.seed = j.at("seed").get<std::uint64_t>();
    if (m.kind == ModelKind::kSvc) {
      const json& s = j.at("svm");
      SvmModel svm;
      svm.kernel = kernel_from_name(s.at("kernel").get<std::string>());
      svm.gamma = s.at("gamma").get<double>();
      svm.degree = s.at("degree").get<int>();
      svm.bias = s.at("bias").get<double>();
      svm.iterations = s.value("iterations", std::int64_t{0});
      svm.dual_coefs = vector_of(s.at("dual_coefs"), "dual_coefs");
      svm.scaler_mean = vector_of(s.at("scaler").at("mean"), "scaler.mean");
      svm.scaler_scale = vector_of(s.at("scaler").at("scale"), "scaler.scale");
      const std::size_t d = m.feature_names.size();
      svm.support_vectors = Matrix(0, d);
      for (const json& sv : s.at("support_vectors")) {
        const auto row = vector_of(sv, "support_vectors");
        if (row.size() != d) throw DataError("model file: support vector has wrong dimension");
        svm.support_vectors.append_row(row);
      }
      if (svm.dual_coefs.size() != svm.support_vectors.rows() || svm.scaler_mean.size() != d ||
          svm.scaler_scale.size() != d) {
        throw DataError("model file: inconsistent svm dimensions");
      }
      m.svm = std::move(svm);
    } else {
      if (m.kind == ModelKind::kBoosted) m.base_score = j.at("base_score").get<double>();
      for (const json& jt : j.at("trees")) {
        Tree t;
        for (const json& jn : jt.at("nodes")) {
          TreeNode n;
          n.feature = jn.at("feature").get<int>();
          n.threshold = jn.at("threshold").get<double>();
          n.left = jn.at("left").get<int>();
          n.right = jn.at("right").get<int>();
          n.value = jn.at("value").get<double>();
          n.n_samples = jn.at("n_samples").get<double>();
          n.gain = jn.value("gain", 0.0);
          t.nodes.push_back(n);
        }
        const int count = static_cast<int>(t.nodes.size());
        if (count == 0) throw DataError("model file: empty tree");
        for (int i = 0; i < count; ++i) {
          const TreeNode& n = t.nodes[static_cast<std::size_t>(i)];
          if (n.is_leaf()) continue;
          if (n.feature >= static_cast<int>(m.feature_names.size()) || n.left <= i || n.right <= i ||
              n.left >= count || n.right >= count) {
            throw DataError("model file: corrupt tree node " + std::to_string(i));
          }
        }
        m.trees.push_back(std::move(t));
      }
      if (m.trees.empty() && m.kind == ModelKind::kForest) throw DataError("model file: forest without trees");
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model file: ") + e.what());
  } catch (const ConfigError& e) {
    throw DataError(std::string("model file: ") + e.what());
  }
  return m;
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  write_text_file(path, model_to_json(model).dump(1) + "\n");
}

TrainedModel load_model(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw DataError("model file " + path.string() + " is not valid JSON: " + e.what());
  }
  return model_from_json(j);
}

}  // namespace plumescreen
