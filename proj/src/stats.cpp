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

#include "plumescreen/stats.hpp"

#include <algorithm>
#include <cmath>

namespace plumescreen {
namespace {

std::vector<double> gather(Field a, const Mask& sel) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(sel.count()));
  sel.for_each([&](int p) { out.push_back(a[static_cast<std::size_t>(p)]); });
  return out;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

bool no_spread(double centred_sum_sq, double mean, int n) {
  const double scale = 1e-10 * std::max(1.0, std::abs(mean));
  return centred_sum_sq <= static_cast<double>(n) * scale * scale;
}

Stat masked_pearson(Field a, Field b, const Mask& sel) {
  const int n = sel.count();
  if (n < 3) return {0.0, true};
  const auto xa = gather(a, sel);
  const auto xb = gather(b, sel);
  const double ma = mean_of(xa);
  const double mb = mean_of(xb);
  double saa = 0.0;
  double sbb = 0.0;
  double sab = 0.0;
  for (std::size_t i = 0; i < xa.size(); ++i) {
    const double da = xa[i] - ma;
    const double db = xb[i] - mb;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  if (no_spread(saa, ma, n) || no_spread(sbb, mb, n)) return {0.0, true};
  return {std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0), false};
}

double masked_sum(Field a, const Mask& sel) {
  double s = 0.0;
  sel.for_each([&](int p) { s += a[static_cast<std::size_t>(p)]; });
  return s;
}

double masked_mean(Field a, const Mask& sel) {
  const int n = sel.count();
  return n == 0 ? 0.0 : masked_sum(a, sel) / n;
}

Stat masked_std(Field a, const Mask& sel) {
  const int n = sel.count();
  if (n < 2) return {0.0, true};
  const auto x = gather(a, sel);
  const double m = mean_of(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  if (no_spread(ss, m, n)) return {0.0, true};
  return {std::sqrt(ss / (n - 1)), false};
}

Moments masked_moments(Field a, const Mask& sel) {
  Moments out;
  out.std = masked_std(a, sel);
  const int n = sel.count();
  if (out.std.degenerate) {
    out.skewness = {0.0, true};
    out.kurtosis = {0.0, true};
    return out;
  }
  const auto x = gather(a, sel);
  const double m = mean_of(x);
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
  for (double v : x) {
    const double d = v - m;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  const double dn = n;
  m2 /= dn;
  m3 /= dn;
  m4 /= dn;
  if (n >= 3) {
    const double g1 = m3 / std::pow(m2, 1.5);
    out.skewness = {g1 * std::sqrt(dn * (dn - 1.0)) / (dn - 2.0), false};
  } else {
    out.skewness = {0.0, true};
  }
  if (n >= 4) {
    const double g2 = m4 / (m2 * m2) - 3.0;
    out.kurtosis = {(dn - 1.0) / ((dn - 2.0) * (dn - 3.0)) * ((dn + 1.0) * g2 + 6.0), false};
  } else {
    out.kurtosis = {0.0, true};
  }
  return out;
}

Stat masked_median(Field a, const Mask& sel) {
  auto x = gather(a, sel);
  if (x.empty()) return {0.0, true};
  const std::size_t mid = x.size() / 2;
  std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(mid), x.end());
  const double upper = x[mid];
  if (x.size() % 2 == 1) return {upper, false};
  const double lower = *std::max_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(mid));
  return {0.5 * (lower + upper), false};
}

}  // namespace plumescreen
