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
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "plumescreen/learners.hpp"
#include "plumescreen/matrix.hpp"
#include "plumescreen/rng.hpp"
#include "plumescreen/validation.hpp"

namespace plumescreen {

struct Dimension {
  enum class Type { kCategorical, kUniform, kLogUniform };

  std::string name;
  Type type = Type::kUniform;
  std::vector<nlohmann::json> values;  ///< categorical choices
  double low = 0.0;
  double high = 1.0;

  nlohmann::json sample(Rng& rng) const;
  bool contains(const nlohmann::json& value) const;
};

/// Named dimensions, kept in name order.
/// JSON: {"name": {"type": "categorical", "values": [...]}} or
/// {"name": {"type": "uniform" | "loguniform", "low": a, "high": b}}.
struct SearchSpace {
  std::vector<Dimension> dims;

  static SearchSpace from_json(const nlohmann::json& j);
  static SearchSpace load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
  /// Draws one value per dimension, in name order.
  nlohmann::json sample(Rng& rng) const;
  bool contains(const nlohmann::json& params) const;
};

/// Built-in search spaces for each model family.
SearchSpace default_search_space(ModelKind kind);

inline constexpr int kDefaultTrials = 60;

struct TrialResult {
  int trial = 0;
  nlohmann::json params;  ///< sampled values only
  bool failed = false;
  std::string error;
  CvResult cv;
};

struct SearchResult {
  std::vector<TrialResult> trials;
  int best_trial = -1;
  Hyperparams best;
};

/// Trial t samples from Rng(seed, t); every trial is cross-validated on the
/// same folds. The best trial maximises mean AP, earliest trial on ties.
/// Trials that fail to train are recorded and skipped; throws
/// TrainingError when all fail.
SearchResult random_search(const SearchSpace& space, ModelKind kind, int n_trials, const Matrix& X,
                           std::span<const int> y, int k, std::uint64_t seed,
                           const std::vector<std::string>& feature_names = {});

/// Columns: trial, fold, ap, roc_auc, balanced_accuracy, params. Failed
/// trials get one row with fold "failed" and empty metrics.
std::string format_trial_log(const SearchResult& result);

/// Two-sided one-sample Kolmogorov-Smirnov statistic against U(0, 1).
double ks_uniform_statistic(std::vector<double> samples);

}  // namespace plumescreen
