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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "plumescreen/matrix.hpp"
#include "plumescreen/tree.hpp"

namespace plumescreen {

enum class ModelKind { kForest, kBoosted, kSvc };

std::string_view model_kind_name(ModelKind kind);
ModelKind model_kind_from_name(std::string_view name);

enum class Criterion { kGini, kEntropy };

/// Candidate features per split: sqrt(d), log2(d), or fraction * d.
struct MaxFeatures {
  enum class Rule { kSqrt, kLog2, kFraction } rule = Rule::kSqrt;
  double fraction = 1.0;

  int resolve(int n_features) const;
};

/// Random forest. Defaults are the best-found configuration of the
/// reference study.
struct ForestParams {
  int n_estimators = 500;
  Criterion criterion = Criterion::kEntropy;
  int min_samples_split = 8;
  MaxFeatures max_features{};
  std::optional<int> max_depth;  ///< nullopt = unlimited
  double max_samples = 0.9206;
  int min_samples_leaf = 5;
  /// With bootstrap off every tree sees the full training set once.
  bool bootstrap = true;

  void validate() const;
};

/// Second-order gradient boosting on logistic loss.
struct BoostedParams {
  int n_estimators = 800;
  double learning_rate = 0.026;
  double gamma = 0.046;
  int max_depth = 6;
  double min_child_weight = 1.0;
  double subsample = 0.940;
  double colsample_bytree = 0.732;
  double reg_alpha = 4.467e-8;
  double reg_lambda = 0.347;

  void validate() const;
};

enum class Kernel { kRbf, kLinear, kPoly };

/// Soft-margin kernel SVM solved by SMO.
struct SvcParams {
  double C = 10.564;
  Kernel kernel = Kernel::kRbf;
  double gamma = 0.0027;
  int degree = 4;
  double tol = 1e-3;            ///< KKT violation tolerance
  std::int64_t max_iter = -1;   ///< -1 = max(10^7, 100 n)

  void validate() const;
};

using Hyperparams = std::variant<ForestParams, BoostedParams, SvcParams>;

ModelKind kind_of(const Hyperparams& hp);

nlohmann::json to_json(const Hyperparams& hp);
/// Missing keys take the defaults above; unknown keys throw ConfigError.
Hyperparams hyperparams_from_json(ModelKind kind, const nlohmann::json& j);
Hyperparams default_hyperparams(ModelKind kind);

/// Fitted kernel machine over standardised features.
struct SvmModel {
  Kernel kernel = Kernel::kRbf;
  double gamma = 0.0;
  int degree = 3;
  Matrix support_vectors;          ///< standardised coordinates
  std::vector<double> dual_coefs;  ///< alpha_i * y_i, y in {-1, +1}
  double bias = 0.0;
  std::vector<double> scaler_mean;
  std::vector<double> scaler_scale;
  std::int64_t iterations = 0;

  double kernel_value(std::span<const double> a, std::span<const double> b) const;
  double decision(std::span<const double> x) const;  ///< x in raw units
};

class TrainedModel {
 public:
  ModelKind kind = ModelKind::kForest;
  std::vector<std::string> feature_names;
  Hyperparams hyperparams;
  std::uint64_t seed = 0;
  std::vector<Tree> trees;   ///< forest / boosted
  double base_score = 0.0;   ///< boosted initial margin (log-odds)
  std::optional<SvmModel> svm;

  std::size_t n_features() const { return feature_names.size(); }

  /// Forest: mean leaf positive fraction. Boosted: margin before the
  /// sigmoid. SVC: decision value.
  double raw_output(std::span<const double> x) const;
  /// Ranking score, higher = more plume-like. Forest: raw output. Boosted:
  /// sigmoid of the margin. SVC: decision value.
  double score(std::span<const double> x) const;
  std::vector<double> score(const Matrix& X) const;
  /// Hard-label threshold matching the score scale: 0 for SVC, 0.5 otherwise.
  double default_threshold() const { return kind == ModelKind::kSvc ? 0.0 : 0.5; }
};

/// Common input checks: at least 2 rows, labels in {0,1} with both present,
/// finite features. Throws DataError.
void check_training_data(const Matrix& X, std::span<const int> y);

/// Names f0..f{cols-1} when \`names\` is empty; otherwise checks the count.
std::vector<std::string> resolve_feature_names(std::vector<std::string> names, std::size_t cols);

TrainedModel train_forest(const Matrix& X, std::span<const int> y, const ForestParams& hp, std::uint64_t seed,
                          std::vector<std::string> feature_names = {});
TrainedModel train_boosted(const Matrix& X, std::span<const int> y, const BoostedParams& hp, std::uint64_t seed,
                           std::vector<std::string> feature_names = {});
TrainedModel train_svc(const Matrix& X, std::span<const int> y, const SvcParams& hp, std::uint64_t seed,
                       std::vector<std::string> feature_names = {});
TrainedModel train(const Matrix& X, std::span<const int> y, const Hyperparams& hp, std::uint64_t seed,
                   std::vector<std::string> feature_names = {});

inline constexpr int kModelFormatVersion = 1;

nlohmann::json model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const nlohmann::json& j);
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace plumescreen
