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

#include "plumescreen/shap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "plumescreen/error.hpp"
#include "plumescreen/feature_table.hpp"
#include "plumescreen/parallel.hpp"

namespace plumescreen {
namespace {

struct PathElement {
  int feature = -1;
  double zero_fraction = 0.0;
  double one_fraction = 0.0;
  double pweight = 0.0;
};

void extend_path(PathElement* path, int depth, double zero_fraction, double one_fraction, int feature) {
  path[depth] = {feature, zero_fraction, one_fraction, depth == 0 ? 1.0 : 0.0};
  const double denom = depth + 1;
  for (int i = depth - 1; i >= 0; --i) {
    path[i + 1].pweight += one_fraction * path[i].pweight * (i + 1) / denom;
    path[i].pweight = zero_fraction * path[i].pweight * (depth - i) / denom;
  }
}

void unwind_path(PathElement* path, int depth, int index) {
  const double one_fraction = path[index].one_fraction;
  const double zero_fraction = path[index].zero_fraction;
  const double denom = depth + 1;
  double next_one_portion = path[depth].pweight;
  for (int i = depth - 1; i >= 0; --i) {
    if (one_fraction != 0.0) {
      const double tmp = path[i].pweight;
      path[i].pweight = next_one_portion * denom / ((i + 1) * one_fraction);
      next_one_portion = tmp - path[i].pweight * zero_fraction * (depth - i) / denom;
    } else {
      path[i].pweight = path[i].pweight * denom / (zero_fraction * (depth - i));
    }
  }
  for (int i = index; i < depth; ++i) {
    path[i].feature = path[i + 1].feature;
    path[i].zero_fraction = path[i + 1].zero_fraction;
    path[i].one_fraction = path[i + 1].one_fraction;
  }
}

// Total permutation weight of the path with element `index` removed.
double unwound_path_sum(const PathElement* path, int depth, int index) {
  const double one_fraction = path[index].one_fraction;
  const double zero_fraction = path[index].zero_fraction;
  const double denom = depth + 1;
  double next_one_portion = path[depth].pweight;
  double total = 0.0;
  for (int i = depth - 1; i >= 0; --i) {
    if (one_fraction != 0.0) {
      const double tmp = next_one_portion * denom / ((i + 1) * one_fraction);
      total += tmp;
      next_one_portion = path[i].pweight - tmp * zero_fraction * (depth - i) / denom;
    } else if (zero_fraction != 0.0) {
      total += path[i].pweight / zero_fraction / ((depth - i) / denom);
    }
  }
  return total;
}

struct ShapWalker {
  const Tree& tree;
  std::span<const double> x;
  std::span<double> phi;

  void recurse(int node_index, int depth, PathElement* parent_path, double zero_fraction, double one_fraction,
               int feature) {
    PathElement* path = parent_path + depth + 1;
    std::copy(parent_path, parent_path + depth + 1, path);
    extend_path(path, depth, zero_fraction, one_fraction, feature);

    const TreeNode& node = tree.nodes[static_cast<std::size_t>(node_index)];
    if (node.is_leaf()) {
      for (int i = 1; i <= depth; ++i) {
        const double w = unwound_path_sum(path, depth, i);
        phi[static_cast<std::size_t>(path[i].feature)] += w * (path[i].one_fraction - path[i].zero_fraction) * node.value;
      }
      return;
    }

    const bool go_left = x[static_cast<std::size_t>(node.feature)] <= node.threshold;
    const int hot = go_left ? node.left : node.right;
    const int cold = go_left ? node.right : node.left;
    const double cover = node.n_samples;
    const double hot_zero = tree.nodes[static_cast<std::size_t>(hot)].n_samples / cover;
    const double cold_zero = tree.nodes[static_cast<std::size_t>(cold)].n_samples / cover;

    // A feature already on the path is unwound and re-entered here.
    double incoming_zero = 1.0;
    double incoming_one = 1.0;
    int k = 0;
    while (k <= depth && path[k].feature != node.feature) ++k;
    if (k <= depth) {
      incoming_zero = path[k].zero_fraction;
      incoming_one = path[k].one_fraction;
      unwind_path(path, depth, k);
      --depth;
    }
    recurse(hot, depth + 1, path, hot_zero * incoming_zero, incoming_one, node.feature);
    recurse(cold, depth + 1, path, cold_zero * incoming_zero, 0.0, node.feature);
  }
};

}  // namespace

void tree_shap_accumulate(const Tree& tree, std::span<const double> x, std::span<double> phi) {
  if (tree.nodes.empty() || tree.nodes[0].is_leaf()) return;
  for (const TreeNode& n : tree.nodes) {
    if (!n.is_leaf() && static_cast<std::size_t>(n.feature) >= phi.size()) {
      throw DataError("tree uses feature " + std::to_string(n.feature) + " beyond the input width");
    }
  }
  const auto d = static_cast<std::size_t>(tree.depth()) + 3;
  std::vector<PathElement> buffer(d * (d + 1) / 2);
  ShapWalker walker{tree, x, phi};
  walker.recurse(0, 0, buffer.data(), 1.0, 1.0, -1);
}

Attribution tree_shap(const Tree& tree, std::span<const double> x, std::size_t n_features) {
  Attribution a;
  a.phi.assign(n_features, 0.0);
  tree_shap_accumulate(tree, x, a.phi);
  a.base_value = tree.expected_value();
  a.output = tree.predict(x);
  return a;
}

Attribution explain(const TrainedModel& model, std::span<const double> x) {
  if (model.kind == ModelKind::kSvc) throw ConfigError("SHAP attributions are only available for tree models");
  if (x.size() != model.n_features()) throw DataError("explain: feature count mismatch");
  Attribution a;
  a.phi.assign(model.n_features(), 0.0);
  double base = 0.0;
  for (const Tree& t : model.trees) {
    tree_shap_accumulate(t, x, a.phi);
    base += t.expected_value();
  }
  if (model.kind == ModelKind::kForest) {
    const double n = static_cast<double>(model.trees.size());
    for (double& p : a.phi) p /= n;
    a.base_value = base / n;
  } else {
    a.base_value = model.base_score + base;
  }
  a.output = model.raw_output(x);
  return a;
}

std::vector<Attribution> explain_all(const TrainedModel& model, const Matrix& X) {
  if (model.kind == ModelKind::kSvc) throw ConfigError("SHAP attributions are only available for tree models");
  std::vector<Attribution> out(X.rows());
  parallel_for(X.rows(), [&](std::size_t r) { out[r] = explain(model, X.row(r)); });
  return out;
}

std::size_t ShapSummary::rank_of(const std::string& name) const {
  for (std::size_t r = 0; r < ranking.size(); ++r) {
    if (names[ranking[r]] == name) return r + 1;
  }
  return 0;
}

ShapSummary summarize(std::span<const Attribution> attributions, const std::vector<std::string>& names) {
  if (attributions.empty()) throw DataError("summarize: no attributions");
  const std::size_t d = names.size();
  ShapSummary s;
  s.names = names;
  s.mean_abs.assign(d, 0.0);
  s.mean_positive.assign(d, 0.0);
  s.mean_negative.assign(d, 0.0);
  for (const Attribution& a : attributions) {
    if (a.phi.size() != d) throw DataError("summarize: inconsistent feature count");
    for (std::size_t j = 0; j < d; ++j) {
      s.mean_abs[j] += std::abs(a.phi[j]);
      if (a.phi[j] > 0.0) s.mean_positive[j] += a.phi[j];
      else s.mean_negative[j] += a.phi[j];
    }
  }
  const double n = static_cast<double>(attributions.size());
  for (std::size_t j = 0; j < d; ++j) {
    s.mean_abs[j] /= n;
    s.mean_positive[j] /= n;
    s.mean_negative[j] /= n;
  }
  s.ranking.resize(d);
  std::iota(s.ranking.begin(), s.ranking.end(), 0);
  std::stable_sort(s.ranking.begin(), s.ranking.end(),
                   [&](std::size_t a, std::size_t b) { return s.mean_abs[a] > s.mean_abs[b]; });
  return s;
}

std::string format_attribution_csv(std::span<const std::string> ids, const std::vector<std::string>& names,
                                   std::span<const Attribution> attributions) {
  if (ids.size() != attributions.size()) throw DataError("attribution export: id count mismatch");
  std::string out = "id,base_value";
  for (const auto& n : names) out += "," + n;
  out += "\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out += ids[i] + "," + format_double(attributions[i].base_value);
    for (double p : attributions[i].phi) out += "," + format_double(p);
    out += "\n";
  }
  return out;
}

std::string format_beeswarm_csv(std::span<const std::string> ids, const std::vector<std::string>& names,
                                std::span<const Attribution> attributions, const Matrix& X) {
  if (ids.size() != attributions.size() || X.rows() != ids.size()) {
    throw DataError("beeswarm export: row count mismatch");
  }
  std::string out = "id,feature,phi,feature_value\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = 0; j < names.size(); ++j) {
      out += ids[i] + "," + names[j] + "," + format_double(attributions[i].phi[j]) + "," + format_double(X(i, j)) +
             "\n";
    }
  }
  return out;
}

std::string format_summary_csv(const ShapSummary& summary) {
  std::string out = "rank,feature,mean_abs_shap,mean_positive_shap,mean_negative_shap\n";
  for (std::size_t r = 0; r < summary.ranking.size(); ++r) {
    const std::size_t j = summary.ranking[r];
    out += std::to_string(r + 1) + "," + summary.names[j] + "," + format_double(summary.mean_abs[j]) + "," +
           format_double(summary.mean_positive[j]) + "," + format_double(summary.mean_negative[j]) + "\n";
  }
  return out;
}

}  // namespace plumescreen
