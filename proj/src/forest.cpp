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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "plumescreen/error.hpp"
#include "plumescreen/learners.hpp"
#include "plumescreen/parallel.hpp"
#include "plumescreen/rng.hpp"

namespace plumescreen {
namespace {

double impurity(Criterion criterion, double positives, double total) {
  if (total <= 0.0) return 0.0;
  const double p = positives / total;
  const double q = 1.0 - p;
  if (criterion == Criterion::kGini) return 1.0 - p * p - q * q;
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (q > 0.0) h -= q * std::log2(q);
  return h;
}

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

class ForestTreeBuilder {
 public:
  ForestTreeBuilder(const Matrix& X, std::span<const int> y, const ForestParams& hp, Rng& rng)
      : X_(X), y_(y), hp_(hp), rng_(rng), mtry_(hp.max_features.resolve(static_cast<int>(X.cols()))) {}

  Tree build(std::vector<std::size_t> rows) {
    Tree tree;
    struct Pending {
      int node;
      std::vector<std::size_t> rows;
      int depth;
    };
    std::vector<Pending> stack;
    tree.nodes.emplace_back();
    stack.push_back({0, std::move(rows), 0});
    while (!stack.empty()) {
      Pending job = std::move(stack.back());
      stack.pop_back();
      const double total = static_cast<double>(job.rows.size());
      double positives = 0.0;
      for (std::size_t r : job.rows) positives += y_[r];
      TreeNode& node = tree.nodes[static_cast<std::size_t>(job.node)];
      node.n_samples = total;
      node.value = positives / total;

      const bool depth_limited = hp_.max_depth && job.depth >= *hp_.max_depth;
      const bool pure = positives == 0.0 || positives == total;
      if (depth_limited || pure || job.rows.size() < static_cast<std::size_t>(hp_.min_samples_split) ||
          job.rows.size() < 2 * static_cast<std::size_t>(hp_.min_samples_leaf)) {
        continue;
      }
      const Split split = best_split(job.rows, positives);
      if (split.feature < 0) continue;

      std::vector<std::size_t> left_rows;
      std::vector<std::size_t> right_rows;
      for (std::size_t r : job.rows) {
        (X_(r, static_cast<std::size_t>(split.feature)) <= split.threshold ? left_rows : right_rows).push_back(r);
      }
      const int left = static_cast<int>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      TreeNode& parent = tree.nodes[static_cast<std::size_t>(job.node)];
      parent.feature = split.feature;
      parent.threshold = split.threshold;
      parent.gain = split.gain;
      parent.left = left;
      parent.right = left + 1;
      // Right first so the left subtree is expanded first.
      stack.push_back({left + 1, std::move(right_rows), job.depth + 1});
      stack.push_back({left, std::move(left_rows), job.depth + 1});
    }
    return tree;
  }

 private:
  std::vector<int> candidate_features() {
    const int d = static_cast<int>(X_.cols());
    std::vector<int> features(static_cast<std::size_t>(d));
    std::iota(features.begin(), features.end(), 0);
    for (int i = 0; i < mtry_; ++i) {
      const auto j = static_cast<std::size_t>(i) + rng_.index(static_cast<std::uint64_t>(d - i));
      std::swap(features[static_cast<std::size_t>(i)], features[j]);
    }
    features.resize(static_cast<std::size_t>(mtry_));
    std::sort(features.begin(), features.end());
    return features;
  }

  Split best_split(const std::vector<std::size_t>& rows, double positives) {
    const double total = static_cast<double>(rows.size());
    const double parent = impurity(hp_.criterion, positives, total);
    const auto min_leaf = static_cast<std::size_t>(hp_.min_samples_leaf);
    Split best;
    std::vector<std::pair<double, int>> column(rows.size());
    for (int f : candidate_features()) {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        column[i] = {X_(rows[i], static_cast<std::size_t>(f)), y_[rows[i]]};
      }
      std::sort(column.begin(), column.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      if (column.front().first == column.back().first) continue;
      double left_pos = 0.0;
      for (std::size_t i = 0; i + 1 < column.size(); ++i) {
        left_pos += column[i].second;
        if (column[i].first == column[i + 1].first) continue;
        const std::size_t n_left = i + 1;
        const std::size_t n_right = column.size() - n_left;
        if (n_left < min_leaf || n_right < min_leaf) continue;
        const double nl = static_cast<double>(n_left);
        const double nr = static_cast<double>(n_right);
        const double gain = parent - (nl / total) * impurity(hp_.criterion, left_pos, nl) -
                            (nr / total) * impurity(hp_.criterion, positives - left_pos, nr);
        if (gain > best.gain + 1e-15) {
          double threshold = 0.5 * (column[i].first + column[i + 1].first);
          if (!(threshold < column[i + 1].first)) threshold = column[i].first;
          best = {f, threshold, gain};
        }
      }
    }
    return best;
  }

  const Matrix& X_;
  std::span<const int> y_;
  const ForestParams& hp_;
  Rng& rng_;
  int mtry_;
};

}  // namespace

int MaxFeatures::resolve(int n_features) const {
  int k = n_features;
  switch (rule) {
    case Rule::kSqrt: k = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n_features)))); break;
    case Rule::kLog2: k = static_cast<int>(std::floor(std::log2(static_cast<double>(n_features)))); break;
    case Rule::kFraction: k = static_cast<int>(std::floor(fraction * n_features)); break;
  }
  return std::clamp(k, 1, n_features);
}

void ForestParams::validate() const {
  if (n_estimators < 1) throw ConfigError("forest: n_estimators must be >= 1");
  if (min_samples_split < 2) throw ConfigError("forest: min_samples_split must be >= 2");
  if (min_samples_leaf < 1) throw ConfigError("forest: min_samples_leaf must be >= 1");
  if (max_depth && *max_depth < 1) throw ConfigError("forest: max_depth must be >= 1");
  if (!(max_samples > 0.0 && max_samples <= 1.0)) throw ConfigError("forest: max_samples must lie in (0, 1]");
  if (max_features.rule == MaxFeatures::Rule::kFraction &&
      !(max_features.fraction > 0.0 && max_features.fraction <= 1.0)) {
    throw ConfigError("forest: max_features fraction must lie in (0, 1]");
  }
}

TrainedModel train_forest(const Matrix& X, std::span<const int> y, const ForestParams& hp, std::uint64_t seed,
                          std::vector<std::string> feature_names) {
  hp.validate();
  check_training_data(X, y);
  const std::size_t n = X.rows();
  const auto draws = static_cast<std::size_t>(std::max<long long>(1, std::llround(hp.max_samples * static_cast<double>(n))));

  TrainedModel model;
  model.kind = ModelKind::kForest;
  model.hyperparams = hp;
  model.seed = seed;
  model.trees.resize(static_cast<std::size_t>(hp.n_estimators));
  parallel_for(model.trees.size(), [&](std::size_t t) {
    Rng rng(seed, t);
    std::vector<std::size_t> rows;
    if (hp.bootstrap) {
      rows.resize(draws);
      for (auto& r : rows) r = static_cast<std::size_t>(rng.index(n));
    } else {
      rows.resize(n);
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    model.trees[t] = ForestTreeBuilder(X, y, hp, rng).build(std::move(rows));
  });
  model.feature_names = resolve_feature_names(std::move(feature_names), X.cols());
  return model;
}

}  // namespace plumescreen
