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

#include "plumescreen/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "plumescreen/error.hpp"
#include "plumescreen/feature_table.hpp"

namespace plumescreen {
namespace {

// Cumulative (fp, tp) counts at each distinct score, descending.
struct Step {
  double threshold;
  std::uint64_t fp;
  std::uint64_t tp;
};

struct Sweep {
  std::vector<Step> steps;
  std::uint64_t positives = 0;
  std::uint64_t negatives = 0;
};

Sweep sweep(std::span<const double> scores, std::span<const int> labels) {
  check_scored(scores, labels);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  Sweep s;
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (labels[order[i]] == 1) ++tp;
    else ++fp;
    const bool last_of_tie = i + 1 == order.size() || scores[order[i + 1]] != scores[order[i]];
    if (last_of_tie) s.steps.push_back({scores[order[i]], fp, tp});
  }
  s.positives = tp;
  s.negatives = fp;
  return s;
}

}  // namespace

void check_scored(std::span<const double> scores, std::span<const int> labels, bool need_both) {
  if (scores.empty()) throw DataError("scored set is empty");
  if (scores.size() != labels.size()) throw DataError("scores and labels differ in length");
  bool pos = false;
  bool neg = false;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw DataError("labels must be 0 or 1");
    if (!std::isfinite(scores[i])) throw DataError("non-finite score at index " + std::to_string(i));
    pos = pos || labels[i] == 1;
    neg = neg || labels[i] == 0;
  }
  if (need_both && !(pos && neg)) throw DataError("metric needs both classes present");
}

std::vector<PrPoint> pr_curve(std::span<const double> scores, std::span<const int> labels) {
  const Sweep s = sweep(scores, labels);
  std::vector<PrPoint> out;
  out.reserve(s.steps.size());
  for (const Step& st : s.steps) {
    out.push_back({st.threshold, static_cast<double>(st.tp) / static_cast<double>(s.positives),
                   static_cast<double>(st.tp) / static_cast<double>(st.tp + st.fp)});
  }
  return out;
}

std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const int> labels) {
  const Sweep s = sweep(scores, labels);
  std::vector<RocPoint> out;
  out.reserve(s.steps.size() + 1);
  out.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  for (const Step& st : s.steps) {
    out.push_back({st.threshold, static_cast<double>(st.fp) / static_cast<double>(s.negatives),
                   static_cast<double>(st.tp) / static_cast<double>(s.positives)});
  }
  return out;
}

double average_precision(std::span<const double> scores, std::span<const int> labels) {
  const Sweep s = sweep(scores, labels);
  // sum over steps of (dtp / P) * tp / (tp + fp), with the 1/P pulled out.
  long double acc = 0.0L;
  std::uint64_t prev_tp = 0;
  for (const Step& st : s.steps) {
    if (st.tp != prev_tp) {
      acc += static_cast<long double>(st.tp - prev_tp) * static_cast<long double>(st.tp) /
             static_cast<long double>(st.tp + st.fp);
    }
    prev_tp = st.tp;
  }
  return static_cast<double>(acc / static_cast<long double>(s.positives));
}

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  const Sweep s = sweep(scores, labels);
  // Twice the trapezoid area in count units is an integer.
  std::uint64_t twice_area = 0;
  std::uint64_t prev_fp = 0;
  std::uint64_t prev_tp = 0;
  for (const Step& st : s.steps) {
    twice_area += (st.fp - prev_fp) * (st.tp + prev_tp);
    prev_fp = st.fp;
    prev_tp = st.tp;
  }
  const long double denom = 2.0L * static_cast<long double>(s.positives) * static_cast<long double>(s.negatives);
  return static_cast<double>(static_cast<long double>(twice_area) / denom);
}

double balanced_accuracy(std::span<const double> scores, std::span<const int> labels, double threshold) {
  check_scored(scores, labels);
  std::uint64_t tp = 0, fn = 0, tn = 0, fp = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    if (labels[i] == 1) (predicted ? tp : fn)++;
    else (predicted ? fp : tn)++;
  }
  const double tpr = static_cast<double>(tp) / static_cast<double>(tp + fn);
  const double tnr = static_cast<double>(tn) / static_cast<double>(tn + fp);
  return 0.5 * (tpr + tnr);
}

double average_precision_from_curve(std::span<const PrPoint> curve) {
  long double acc = 0.0L;
  double prev_recall = 0.0;
  for (const PrPoint& p : curve) {
    acc += static_cast<long double>(p.recall - prev_recall) * p.precision;
    prev_recall = p.recall;
  }
  return static_cast<double>(acc);
}

double roc_auc_from_curve(std::span<const RocPoint> curve) {
  long double acc = 0.0L;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    acc += static_cast<long double>(curve[i].fpr - curve[i - 1].fpr) * (curve[i].tpr + curve[i - 1].tpr) / 2.0L;
  }
  return static_cast<double>(acc);
}

Metrics compute_metrics(std::span<const double> scores, std::span<const int> labels, double threshold) {
  return {average_precision(scores, labels), roc_auc(scores, labels), balanced_accuracy(scores, labels, threshold)};
}

std::string format_pr_csv(std::span<const PrPoint> curve) {
  std::string out = "threshold,recall,precision\n";
  for (const PrPoint& p : curve) {
    out += format_double(p.threshold) + "," + format_double(p.recall) + "," + format_double(p.precision) + "\n";
  }
  return out;
}

std::string format_roc_csv(std::span<const RocPoint> curve) {
  std::string out = "threshold,fpr,tpr\n";
  for (const RocPoint& p : curve) {
    out += format_double(p.threshold) + "," + format_double(p.fpr) + "," + format_double(p.tpr) + "\n";
  }
  return out;
}

}  // namespace plumescreen
