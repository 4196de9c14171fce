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

namespace plumescreen {

/// Checks a scored set: equal non-zero lengths, labels in {0,1}, finite
/// scores and, when `need_both` is set, both classes present.
void check_scored(std::span<const double> scores, std::span<const int> labels, bool need_both = true);

struct PrPoint {
  double threshold;
  double recall;
  double precision;
};

struct RocPoint {
  double threshold;  ///< +inf for the origin
  double fpr;
  double tpr;
};

/// One point per distinct score, descending. Tied scores share a threshold.
std::vector<PrPoint> pr_curve(std::span<const double> scores, std::span<const int> labels);
/// Starts at (0,0) and ends at (1,1).
std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const int> labels);

/// Step-interpolated area under the PR curve: sum of (R_n - R_{n-1}) P_n.
double average_precision(std::span<const double> scores, std::span<const int> labels);
/// Trapezoidal area under the ROC curve.
double roc_auc(std::span<const double> scores, std::span<const int> labels);
/// Mean of sensitivity and specificity with prediction = score >= threshold.
double balanced_accuracy(std::span<const double> scores, std::span<const int> labels, double threshold);

/// Re-integrates exported curves with the same formulas.
double average_precision_from_curve(std::span<const PrPoint> curve);
double roc_auc_from_curve(std::span<const RocPoint> curve);

struct Metrics {
  double ap = 0.0;
  double roc_auc = 0.0;
  double balanced_accuracy = 0.0;
};

Metrics compute_metrics(std::span<const double> scores, std::span<const int> labels, double threshold);

std::string format_pr_csv(std::span<const PrPoint> curve);
std::string format_roc_csv(std::span<const RocPoint> curve);

}  // namespace plumescreen
