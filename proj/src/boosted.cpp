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
#include "plumescreen/rng.hpp"

namespace plumescreen {
namespace {

double sigmoid(double m) { return 1.0 / (1.0 + std::exp(-m)); }

/// L1 soft threshold applied to a gradient sum.
double shrink(double g, double alpha) {
  if (g > alpha) return g - alpha;
  if (g < -alpha) return g + alpha;
  return 0.0;
}

struct NodeStats {
  double G = 0.0;
  double H = 0.0;
  double count = 0.0;
};

struct Candidate {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

class BoostedTreeBuilder {
 public:
  BoostedTreeBuilder(const Matrix& X, const std::vector<std::vector<std::uint32_t>>& sorted, const BoostedParams& hp)
      : X_(X), sorted_(sorted), hp_(hp) {}

  double structure_score(double G, double H) const {
    const double denom = H + hp_.reg_lambda;
    if (denom <= 0.0) return 0.0;
    const double g = shrink(G, hp_.reg_alpha);
    return g * g / denom;
  }

  double leaf_weight(double G, double H) const {
    const double denom = H + hp_.reg_lambda;
    if (denom <= 0.0) return 0.0;
    return -shrink(G, hp_.reg_alpha) / denom;
  }

  /// `position[r]` is the node of sampled row r, or -1 when r is not in
  /// this round's sample.
  Tree build(std::span<const double> grad, std::span<const double> hess, std::vector<int>& position,
             const std::vector<int>& features) {
    Tree tree;
    tree.nodes.emplace_back();
    std::vector<int> frontier = {0};
    std::vector<NodeStats> stats(1);
    for (std::size_t r = 0; r < position.size(); ++r) {
      if (position[r] < 0) continue;
      stats[0].G += grad[r];
      stats[0].H += hess[r];
      stats[0].count += 1.0;
    }

    for (int depth = 0;; ++depth) {
      for (int n : frontier) {
        TreeNode& node = tree.nodes[static_cast<std::size_t>(n)];
        const NodeStats& s = stats[static_cast<std::size_t>(n)];
        node.n_samples = s.count;
        node.value = hp_.learning_rate * leaf_weight(s.G, s.H);
      }
      if (depth >= hp_.max_depth) break;

      const std::vector<Candidate> best = find_splits(grad, hess, position, features, stats, tree.nodes.size());
      std::vector<int> next;
      for (int n : frontier) {
        const Candidate& c = best[static_cast<std::size_t>(n)];
        if (c.feature < 0) continue;
        const int left = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        stats.resize(tree.nodes.size());
        TreeNode& node = tree.nodes[static_cast<std::size_t>(n)];
        node.feature = c.feature;
        node.threshold = c.threshold;
        node.gain = c.gain;
        node.left = left;
        node.right = left + 1;
        next.push_back(left);
        next.push_back(left + 1);
      }
      if (next.empty()) break;
      for (std::size_t r = 0; r < position.size(); ++r) {
        const int n = position[r];
        if (n < 0) continue;
        if (tree.nodes[static_cast<std::size_t>(n)].is_leaf()) {
          position[r] = -1;  // settled in a leaf; no longer scanned
          continue;
        }
        const TreeNode& node = tree.nodes[static_cast<std::size_t>(n)];
        const int child = X_(r, static_cast<std::size_t>(node.feature)) <= node.threshold ? node.left : node.right;
        position[r] = child;
        NodeStats& s = stats[static_cast<std::size_t>(child)];
        s.G += grad[r];
        s.H += hess[r];
        s.count += 1.0;
      }
      frontier = std::move(next);
    }
    return tree;
  }

 private:
  std::vector<Candidate> find_splits(std::span<const double> grad, std::span<const double> hess,
                                     const std::vector<int>& position, const std::vector<int>& features,
                                     const std::vector<NodeStats>& stats, std::size_t n_nodes) const {
    std::vector<Candidate> best(n_nodes);
    std::vector<NodeStats> running(n_nodes);
    std::vector<double> last_value(n_nodes);
    std::vector<double> parent_score(n_nodes);
    for (std::size_t n = 0; n < n_nodes; ++n) parent_score[n] = structure_score(stats[n].G, stats[n].H);

    for (int f : features) {
      std::fill(running.begin(), running.end(), NodeStats{});
      const auto col = static_cast<std::size_t>(f);
      for (std::uint32_t r : sorted_[col]) {
        const int n = position[r];
        if (n < 0) continue;
        const auto ni = static_cast<std::size_t>(n);
        const double v = X_(r, col);
        NodeStats& left = running[ni];
        if (left.count > 0.0 && v > last_value[ni]) {
          const NodeStats& total = stats[ni];
          const double GR = total.G - left.G;
          const double HR = total.H - left.H;
          if (left.H >= hp_.min_child_weight && HR >= hp_.min_child_weight) {
            const double gain =
                0.5 * (structure_score(left.G, left.H) + structure_score(GR, HR) - parent_score[ni]) - hp_.gamma;
            if (gain > best[ni].gain) {
              double threshold = 0.5 * (last_value[ni] + v);
              if (!(threshold < v)) threshold = last_value[ni];
              best[ni] = {f, threshold, gain};
            }
          }
        }
        left.G += grad[r];
        left.H += hess[r];
        left.count += 1.0;
        last_value[ni] = v;
      }
    }
    return best;
  }

  const Matrix& X_;
  const std::vector<std::vector<std::uint32_t>>& sorted_;
  const BoostedParams& hp_;
};

}  // namespace

void BoostedParams::validate() const {
  if (n_estimators < 0) throw ConfigError("boosted: n_estimators must be >= 0");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) throw ConfigError("boosted: learning_rate must be >= 0");
  if (!(gamma >= 0.0)) throw ConfigError("boosted: gamma must be >= 0");
  if (max_depth < 0) throw ConfigError("boosted: max_depth must be >= 0");
  if (!(min_child_weight >= 0.0)) throw ConfigError("boosted: min_child_weight must be >= 0");
  if (!(subsample > 0.0 && subsample <= 1.0)) throw ConfigError("boosted: subsample must lie in (0, 1]");
  if (!(colsample_bytree > 0.0 && colsample_bytree <= 1.0)) {
    throw ConfigError("boosted: colsample_bytree must lie in (0, 1]");
  }
  if (!(reg_alpha >= 0.0)) throw ConfigError("boosted: reg_alpha must be >= 0");
  if (!(reg_lambda >= 0.0)) throw ConfigError("boosted: reg_lambda must be >= 0");
}

TrainedModel train_boosted(const Matrix& X, std::span<const int> y, const BoostedParams& hp, std::uint64_t seed,
                           std::vector<std::string> feature_names) {
  hp.validate();
  check_training_data(X, y);
  const std::size_t n = X.rows();
  const std::size_t d = X.cols();

  std::vector<std::vector<std::uint32_t>> sorted(d);
  for (std::size_t f = 0; f < d; ++f) {
    auto& order = sorted[f];
    order.resize(n);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return X(a, f) < X(b, f); });
  }

  const double prevalence = static_cast<double>(std::accumulate(y.begin(), y.end(), 0)) / static_cast<double>(n);
  TrainedModel model;
  model.kind = ModelKind::kBoosted;
  model.hyperparams = hp;
  model.seed = seed;
  model.base_score = std::log(prevalence / (1.0 - prevalence));
  model.feature_names = resolve_feature_names(std::move(feature_names), d);

  std::vector<double> margin(n, model.base_score);
  std::vector<double> grad(n);
  std::vector<double> hess(n);
  std::vector<int> position(n);
  const int n_cols = std::clamp(static_cast<int>(std::floor(hp.colsample_bytree * static_cast<double>(d))), 1,
                                static_cast<int>(d));
  BoostedTreeBuilder builder(X, sorted, hp);

  for (int round = 0; round < hp.n_estimators; ++round) {
    Rng rng(seed, static_cast<std::uint64_t>(round));
    for (std::size_t r = 0; r < n; ++r) {
      const double p = sigmoid(margin[r]);
      grad[r] = p - y[r];
      hess[r] = std::max(p * (1.0 - p), 1e-16);
    }
    for (std::size_t r = 0; r < n; ++r) position[r] = (hp.subsample >= 1.0 || rng.bernoulli(hp.subsample)) ? 0 : -1;

    std::vector<int> features(d);
    std::iota(features.begin(), features.end(), 0);
    for (int i = 0; i < n_cols; ++i) {
      const auto j = static_cast<std::size_t>(i) + rng.index(d - static_cast<std::size_t>(i));
      std::swap(features[static_cast<std::size_t>(i)], features[j]);
    }
    features.resize(static_cast<std::size_t>(n_cols));
    std::sort(features.begin(), features.end());

    Tree tree = builder.build(grad, hess, position, features);
    if (tree.nodes.front().n_samples == 0.0) tree.nodes.front().n_samples = 1.0;
    for (std::size_t r = 0; r < n; ++r) margin[r] += tree.predict(X.row(r));
    model.trees.push_back(std::move(tree));
  }
  return model;
}

}  // namespace plumescreen
