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

#include <span>
#include <string>
#include <vector>

#include "plumescreen/learners.hpp"
#include "plumescreen/matrix.hpp"
#include "plumescreen/tree.hpp"

namespace plumescreen {

/// Per-feature Shapley values of one prediction. phi sums with base_value
/// to output, the model's raw output (boosted: the margin).
struct Attribution {
  std::vector<double> phi;
  double base_value = 0.0;
  double output = 0.0;
};

/// Path-dependent TreeSHAP for one tree with node covers as the background.
/// Adds into `phi` (size n_features) and returns nothing else.
void tree_shap_accumulate(const Tree& tree, std::span<const double> x, std::span<double> phi);

Attribution tree_shap(const Tree& tree, std::span<const double> x, std::size_t n_features);

/// Forest: mean over trees. Boosted: sum over trees plus the base score.
/// Throws ConfigError for SVC models.
Attribution explain(const TrainedModel& model, std::span<const double> x);
std::vector<Attribution> explain_all(const TrainedModel& model, const Matrix& X);

struct ShapSummary {
  std::vector<std::string> names;
  std::vector<double> mean_abs;
  std::vector<double> mean_positive;  ///< mean of max(phi, 0) over all samples
  std::vector<double> mean_negative;  ///< mean of min(phi, 0) over all samples
  /// Feature indices by descending mean |phi|; ties keep canonical order.
  std::vector<std::size_t> ranking;

  /// 1-based rank of a feature name, 0 if absent.
  std::size_t rank_of(const std::string& name) const;
};

ShapSummary summarize(std::span<const Attribution> attributions, const std::vector<std::string>& names);

/// id, base_value, one column per feature.
std::string format_attribution_csv(std::span<const std::string> ids, const std::vector<std::string>& names,
                                   std::span<const Attribution> attributions);
/// Long format: id, feature, phi, feature_value.
std::string format_beeswarm_csv(std::span<const std::string> ids, const std::vector<std::string>& names,
                                std::span<const Attribution> attributions, const Matrix& X);
/// rank, feature, mean_abs_shap, mean_positive_shap, mean_negative_shap.
std::string format_summary_csv(const ShapSummary& summary);

}  // namespace plumescreen
