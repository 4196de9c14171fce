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
#include <vector>

#include "plumescreen/grid.hpp"

namespace plumescreen {

using Field = std::span<const float, kPixels>;

/// A statistic together with a flag telling whether the selection was too
/// small or had no spread. Degenerate statistics carry value 0.
struct Stat {
  double value = 0.0;
  bool degenerate = false;
};

/// Sample Pearson correlation of a and b over sel. Degenerate (0) when
/// fewer than 3 pixels are selected or either field is constant on sel.
Stat masked_pearson(Field a, Field b, const Mask& sel);

double masked_mean(Field a, const Mask& sel);  ///< 0 for an empty selection
double masked_sum(Field a, const Mask& sel);

/// Sample standard deviation (n - 1 denominator); degenerate below 2 pixels
/// or with no spread.
Stat masked_std(Field a, const Mask& sel);

struct Moments {
  Stat std;
  Stat skewness;  ///< adjusted Fisher-Pearson coefficient G1
  Stat kurtosis;  ///< adjusted excess kurtosis G2 (normal -> 0)
};

Moments masked_moments(Field a, const Mask& sel);

/// Median of the selected values (mean of the two middle values for an even
/// count). Degenerate for an empty selection.
Stat masked_median(Field a, const Mask& sel);

/// True when the centred sum of squares is negligible relative to the
/// magnitude of the data (float32 inputs promoted to double).
bool no_spread(double centred_sum_sq, double mean, int n);

}  // namespace plumescreen
