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

#include "plumescreen/search.hpp"

#include <algorithm>
#include <cmath>

#include "plumescreen/error.hpp"
#include "plumescreen/feature_table.hpp"
#include "plumescreen/parallel.hpp"

namespace plumescreen {
namespace {

using nlohmann::json;

constexpr const char* kForestSpace = R"({
  "n_estimators": {"type": "categorical", "values": [100, 200, 500, 800]},
  "criterion": {"type": "categorical", "values": ["gini", "entropy"]},
  "min_samples_split": {"type": "categorical", "values": [2, 4, 6, 8, 10]},
  "max_features": {"type": "categorical", "values": ["sqrt", "log2", 0.4, 0.6, 0.8]},
  "max_depth": {"type": "categorical", "values": [null, 5, 10, 20, 30]},
  "max_samples": {"type": "uniform", "low": 0.5, "high": 1.0},
  "min_samples_leaf": {"type": "categorical", "values": [1, 2, 5, 10]}
})";

constexpr const char* kBoostedSpace = R"({
  "n_estimators": {"type": "categorical", "values": [100, 200, 400, 800, 1200]},
  "learning_rate": {"type": "loguniform", "low": 0.001, "high": 0.3},
  "gamma": {"type": "loguniform", "low": 0.001, "high": 1.0},
  "max_depth": {"type": "categorical", "values": [3, 4, 5, 6, 7, 9]},
  "min_child_weight": {"type": "categorical", "values": [1, 2, 4, 6, 8, 10, 12]},
  "subsample": {"type": "uniform", "low": 0.6, "high": 1.0},
  "colsample_bytree": {"type": "uniform", "low": 0.6, "high": 1.0},
  "reg_alpha": {"type": "loguniform", "low": 1e-8, "high": 10.0},
  "reg_lambda": {"type": "loguniform", "low": 0.01, "high": 100.0}
})";

constexpr const char* kSvcSpace = R"({
  "C": {"type": "loguniform", "low": 0.001, "high": 1000.0},
  "kernel": {"type": "categorical", "values": ["rbf", "linear", "poly"]},
  "gamma": {"type": "loguniform", "low": 0.0001, "high": 1.0},
  "degree": {"type": "categorical", "values": [2, 3, 4]}
})";

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  return out + "\"";
}

}  // namespace

json Dimension::sample(Rng& rng) const {
  switch (type) {
    case Type::kCategorical: return values[rng.index(values.size())];
    case Type::kUniform: return std::clamp(rng.uniform(low, high), low, high);
    case Type::kLogUniform:
      return std::clamp(std::exp(rng.uniform(std::log(low), std::log(high))), low, high);
  }
  return nullptr;
}

bool Dimension::contains(const json& value) const {
  if (type == Type::kCategorical) return std::find(values.begin(), values.end(), value) != values.end();
  if (!value.is_number()) return false;
  const double v = value.get<double>();
  return v >= low && v <= high;
}

SearchSpace SearchSpace::from_json(const json& j) {
  if (!j.is_object() || j.empty()) throw ConfigError("search space must be a non-empty JSON object");
  SearchSpace space;
  for (const auto& [name, dim_json] : j.items()) {
    Dimension d;
    d.name = name;
    try {
      const std::string type = dim_json.at("type").get<std::string>();
      if (type == "categorical") {
        d.type = Dimension::Type::kCategorical;
        for (const json& v : dim_json.at("values")) d.values.push_back(v);
        if (d.values.empty()) throw ConfigError("dimension '" + name + "' has no values");
      } else if (type == "uniform" || type == "loguniform") {
        d.type = type == "uniform" ? Dimension::Type::kUniform : Dimension::Type::kLogUniform;
        d.low = dim_json.at("low").get<double>();
        d.high = dim_json.at("high").get<double>();
        if (!(d.low < d.high)) throw ConfigError("dimension '" + name + "' needs low < high");
        if (d.type == Dimension::Type::kLogUniform && !(d.low > 0.0)) {
          throw ConfigError("dimension '" + name + "' is log-uniform and needs low > 0");
        }
      } else {
        throw ConfigError("dimension '" + name + "' has unknown type '" + type + "'");
      }
    } catch (const json::exception& e) {
      throw ConfigError("dimension '" + name + "': " + e.what());
    }
    space.dims.push_back(std::move(d));
  }
  return space;
}

SearchSpace SearchSpace::load(const std::filesystem::path& path) {
  try {
    return from_json(json::parse(read_text_file(path)));
  } catch (const json::parse_error& e) {
    throw ConfigError("search space " + path.string() + " is not valid JSON: " + e.what());
  }
}

json SearchSpace::to_json() const {
  json j = json::object();
  for (const Dimension& d : dims) {
    switch (d.type) {
      case Dimension::Type::kCategorical: j[d.name] = {{"type", "categorical"}, {"values", d.values}}; break;
      case Dimension::Type::kUniform: j[d.name] = {{"type", "uniform"}, {"low", d.low}, {"high", d.high}}; break;
      case Dimension::Type::kLogUniform:
        j[d.name] = {{"type", "loguniform"}, {"low", d.low}, {"high", d.high}};
        break;
    }
  }
  return j;
}

json SearchSpace::sample(Rng& rng) const {
  json out = json::object();
  for (const Dimension& d : dims) out[d.name] = d.sample(rng);
  return out;
}

bool SearchSpace::contains(const json& params) const {
  for (const Dimension& d : dims) {
    if (!params.contains(d.name) || !d.contains(params.at(d.name))) return false;
  }
  return true;
}

SearchSpace default_search_space(ModelKind kind) {
  switch (kind) {
    case ModelKind::kForest: return SearchSpace::from_json(json::parse(kForestSpace));
    case ModelKind::kBoosted: return SearchSpace::from_json(json::parse(kBoostedSpace));
    case ModelKind::kSvc: return SearchSpace::from_json(json::parse(kSvcSpace));
  }
  throw ConfigError("unknown model kind");
}

SearchResult random_search(const SearchSpace& space, ModelKind kind, int n_trials, const Matrix& X,
                           std::span<const int> y, int k, std::uint64_t seed,
                           const std::vector<std::string>& feature_names) {
  if (n_trials < 1) throw ConfigError("n_trials must be at least 1");
  check_training_data(X, y);
  stratified_kfold(y, k, seed);  // fail early on classes smaller than k

  SearchResult result;
  result.trials.resize(static_cast<std::size_t>(n_trials));
  for (int t = 0; t < n_trials; ++t) {
    Rng rng(seed, static_cast<std::uint64_t>(t));
    result.trials[static_cast<std::size_t>(t)].trial = t;
    result.trials[static_cast<std::size_t>(t)].params = space.sample(rng);
  }
  parallel_for(result.trials.size(), [&](std::size_t t) {
    TrialResult& trial = result.trials[t];
    try {
      const Hyperparams hp = hyperparams_from_json(kind, trial.params);
      trial.cv = cross_validate(X, y, hp, k, seed, feature_names);
    } catch (const ConfigError& e) {
      trial.failed = true;
      trial.error = e.what();
    } catch (const TrainingError& e) {
      trial.failed = true;
      trial.error = e.what();
    }
  });

  double best_ap = -1.0;
  for (const TrialResult& trial : result.trials) {
    if (!trial.failed && trial.cv.summary.mean.ap > best_ap) {
      best_ap = trial.cv.summary.mean.ap;
      result.best_trial = trial.trial;
    }
  }
  if (result.best_trial < 0) throw TrainingError("random search: all " + std::to_string(n_trials) + " trials failed");
  result.best = hyperparams_from_json(kind, result.trials[static_cast<std::size_t>(result.best_trial)].params);
  return result;
}

std::string format_trial_log(const SearchResult& result) {
  std::string out = "trial,fold,ap,roc_auc,balanced_accuracy,params\n";
  for (const TrialResult& trial : result.trials) {
    const std::string params = csv_quote(trial.params.dump());
    if (trial.failed) {
      out += std::to_string(trial.trial) + ",failed,,,," + params + "\n";
      continue;
    }
    for (const FoldResult& f : trial.cv.folds) {
      out += std::to_string(trial.trial) + "," + std::to_string(f.fold) + "," + format_double(f.metrics.ap) + "," +
             format_double(f.metrics.roc_auc) + "," + format_double(f.metrics.balanced_accuracy) + "," + params +
             "\n";
    }
  }
  return out;
}

double ks_uniform_statistic(std::vector<double> samples) {
  if (samples.empty()) throw DataError("KS statistic of an empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = std::clamp(samples[i], 0.0, 1.0);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace plumescreen
