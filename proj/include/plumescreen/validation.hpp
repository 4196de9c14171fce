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
#include <span>
#include <string>
#include <vector>

#include "plumescreen/learners.hpp"
#include "plumescreen/matrix.hpp"
#include "plumescreen/metrics.hpp"

namespace plumescreen {

/// k disjoint, sorted index sets. Each class is shuffled with `seed` and
/// dealt round-robin, continuing where the previous class stopped, so
/// per-class counts differ by at most one across folds.
std::vector<std::vector<std::size_t>> stratified_kfold(std::span<const int> y, int k, std::uint64_t seed);

/// Indices not in `test`, ascending.
std::vector<std::size_t> complement(std::span<const std::size_t> test, std::size_t n);

struct FoldResult {
  int fold = 0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  Metrics metrics;
};

/// Mean and population standard deviation over folds.
struct MetricSummary {
  Metrics mean;
  Metrics std;
};

MetricSummary summarize_folds(std::span<const FoldResult> folds);

struct CvResult {
  std::vector<FoldResult> folds;
  MetricSummary summary;
};

/// Trains on k-1 folds and scores the remaining one, for each fold. The
/// model for fold f is seeded with stream_seed(seed, f + 1).
CvResult cross_validate(const Matrix& X, std::span<const int> y, const Hyperparams& hp, int k, std::uint64_t seed,
                        const std::vector<std::string>& feature_names = {});

}  // namespace plumescreen
