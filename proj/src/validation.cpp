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

#include "plumescreen/validation.hpp"

#include <algorithm>
#include <cmath>

#include "plumescreen/error.hpp"
#include "plumescreen/parallel.hpp"
#include "plumescreen/rng.hpp"

namespace plumescreen {

std::vector<std::vector<std::size_t>> stratified_kfold(std::span<const int> y, int k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("k must be at least 2");
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 0 && y[i] != 1) throw DataError("labels must be 0 or 1");
    by_class[y[i]].push_back(i);
  }
  for (int c = 0; c < 2; ++c) {
    if (by_class[c].size() < static_cast<std::size_t>(k)) {
      throw DataError("class " + std::to_string(c) + " has " + std::to_string(by_class[c].size()) +
                      " samples, fewer than k = " + std::to_string(k));
    }
  }
  std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
  std::size_t slot = 0;
  for (int c = 0; c < 2; ++c) {
    Rng rng(seed, static_cast<std::uint64_t>(c));
    rng.shuffle(by_class[c].begin(), by_class[c].end());
    for (std::size_t idx : by_class[c]) {
      folds[slot % folds.size()].push_back(idx);
      ++slot;
    }
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

std::vector<std::size_t> complement(std::span<const std::size_t> test, std::size_t n) {
  std::vector<bool> held(n, false);
  for (std::size_t i : test) held[i] = true;
  std::vector<std::size_t> out;
  out.reserve(n - test.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (!held[i]) out.push_back(i);
  }
  return out;
}

MetricSummary summarize_folds(std::span<const FoldResult> folds) {
  if (folds.empty()) throw DataError("no folds to summarize");
  const double n = static_cast<double>(folds.size());
  auto mean_std = [&](auto field) {
    double mean = 0.0;
    for (const auto& f : folds) mean += field(f.metrics);
    mean /= n;
    double ss = 0.0;
    for (const auto& f : folds) ss += (field(f.metrics) - mean) * (field(f.metrics) - mean);
    return std::pair{mean, std::sqrt(ss / n)};
  };
  MetricSummary s;
  std::tie(s.mean.ap, s.std.ap) = mean_std([](const Metrics& m) { return m.ap; });
  std::tie(s.mean.roc_auc, s.std.roc_auc) = mean_std([](const Metrics& m) { return m.roc_auc; });
  std::tie(s.mean.balanced_accuracy, s.std.balanced_accuracy) =
      mean_std([](const Metrics& m) { return m.balanced_accuracy; });
  return s;
}

CvResult cross_validate(const Matrix& X, std::span<const int> y, const Hyperparams& hp, int k, std::uint64_t seed,
                        const std::vector<std::string>& feature_names) {
  check_training_data(X, y);
  const auto folds = stratified_kfold(y, k, seed);
  CvResult result;
  result.folds.resize(folds.size());
  parallel_for(folds.size(), [&](std::size_t f) {
    const auto train_idx = complement(folds[f], y.size());
    const Matrix X_train = X.select_rows(train_idx);
    const Matrix X_test = X.select_rows(folds[f]);
    std::vector<int> y_train, y_test;
    for (std::size_t i : train_idx) y_train.push_back(y[i]);
    for (std::size_t i : folds[f]) y_test.push_back(y[i]);
    const TrainedModel model = train(X_train, y_train, hp, stream_seed(seed, f + 1), feature_names);
    const auto scores = model.score(X_test);
    result.folds[f] = {static_cast<int>(f), train_idx.size(), folds[f].size(),
                       compute_metrics(scores, y_test, model.default_threshold())};
  });
  result.summary = summarize_folds(result.folds);
  return result;
}

}  // namespace plumescreen
