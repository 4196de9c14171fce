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

// Straightforward re-implementation of the 41 features, written from the
// feature definitions without sharing code with the library: plain vectors,
// full sorts, atan2-based axes.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "plumescreen/features.hpp"
#include "plumescreen/scene.hpp"

namespace plumescreen::testing {

struct OracleMasks {
  std::vector<bool> high, low, valid;
  double score = 0.0;
};

inline OracleMasks oracle_masks(const ScenePatch& p) {
  OracleMasks m;
  m.high.assign(kPixels, false);
  m.low.assign(kPixels, false);
  m.valid.assign(kPixels, false);
  for (int i = 0; i < kPixels; ++i) {
    m.valid[i] = p.valid().test(i);
    const double v = p.at(ChannelId::kPlumeMask, i);
    if (v > 0.0) m.high[i] = true;
    m.score = std::max(m.score, v);
  }
  for (int r = 0; r < kSide; ++r) {
    for (int c = 0; c < kSide; ++c) {
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          const int rr = r + dr, cc = c + dc;
          if (rr >= 0 && rr < kSide && cc >= 0 && cc < kSide && m.high[rr * kSide + cc]) m.low[r * kSide + c] = true;
        }
      }
    }
  }
  return m;
}

inline std::vector<double> oracle_pick(const ScenePatch& p, ChannelId ch, const std::vector<bool>& sel) {
  std::vector<double> out;
  for (int i = 0; i < kPixels; ++i) {
    if (sel[i]) out.push_back(p.at(ch, i));
  }
  return out;
}

inline double oracle_mean(const std::vector<double>& x) {
  return x.empty() ? 0.0 : std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

inline double oracle_sample_std(const std::vector<double>& x) {
  if (x.size() < 2) return 0.0;
  const double m = oracle_mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

inline double oracle_median(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  return n % 2 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

inline double oracle_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 3) return 0.0;
  const double mx = oracle_mean(x), my = oracle_mean(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

struct OracleAxis {
  bool defined = false;  ///< non-empty and not isotropic
  bool empty = true;
  double theta = 0.0;    ///< orientation of the major axis, radians
  double l1 = 0.0, l2 = 0.0;
};

inline OracleAxis oracle_axis(const std::vector<bool>& sel) {
  OracleAxis a;
  std::vector<double> xs, ys;
  for (int i = 0; i < kPixels; ++i) {
    if (sel[i]) {
      xs.push_back(i % kSide);
      ys.push_back(i / kSide);
    }
  }
  if (xs.empty()) return a;
  a.empty = false;
  const double n = static_cast<double>(xs.size());
  const double mx = oracle_mean(xs), my = oracle_mean(ys);
  double cxx = 0, cyy = 0, cxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    cxx += (xs[i] - mx) * (xs[i] - mx) / n;
    cyy += (ys[i] - my) * (ys[i] - my) / n;
    cxy += (xs[i] - mx) * (ys[i] - my) / n;
  }
  const double r = std::sqrt(0.25 * (cxx - cyy) * (cxx - cyy) + cxy * cxy);
  a.l1 = 0.5 * (cxx + cyy) + r;
  a.l2 = std::max(0.0, 0.5 * (cxx + cyy) - r);
  a.defined = r > 1e-9;
  a.theta = 0.5 * std::atan2(2.0 * cxy, cxx - cyy);
  return a;
}

inline double oracle_fold(double theta_a, double theta_b) {
  double d = std::fmod(std::abs(theta_a - theta_b), std::numbers::pi);
  if (d > std::numbers::pi / 2) d = std::numbers::pi - d;
  return d * 180.0 / std::numbers::pi;
}

inline std::array<double, kFeatureCount> oracle_features(const ScenePatch& p) {
  std::array<double, kFeatureCount> f{};
  auto set = [&](Feature k, double v) { f[static_cast<std::size_t>(k)] = v; };
  const OracleMasks m = oracle_masks(p);
  std::vector<bool> low_valid(kPixels), ring(kPixels), bg_high(kPixels), bg_low(kPixels), cloudy(kPixels),
      coast(kPixels);
  const std::vector<bool> low_dil = [&] {
    std::vector<bool> d(kPixels, false);
    for (int r = 0; r < kSide; ++r) {
      for (int c = 0; c < kSide; ++c) {
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            const int rr = r + dr, cc = c + dc;
            if (rr >= 0 && rr < kSide && cc >= 0 && cc < kSide && m.low[rr * kSide + cc]) d[r * kSide + c] = true;
          }
        }
      }
    }
    return d;
  }();
  int n_valid = 0, n_high = 0;
  for (int i = 0; i < kPixels; ++i) {
    low_valid[i] = m.low[i] && m.valid[i];
    ring[i] = low_dil[i] && !m.low[i] && m.valid[i];
    bg_high[i] = m.valid[i] && !m.high[i];
    bg_low[i] = m.valid[i] && !low_valid[i];
    cloudy[i] = p.at(ChannelId::kCloudFraction, i) > 0.5f;
    coast[i] = p.at(ChannelId::kSurfaceClass, i) == 2.0f;
    n_valid += m.valid[i];
    n_high += m.high[i];
  }

  set(Feature::kCnnPlumeScore, m.score);
  set(Feature::kValidPixelFraction, n_valid / 1024.0);
  set(Feature::kHighMaskPixelCount, n_high);
  const auto enh_high = oracle_pick(p, ChannelId::kEnhancement, m.high);
  set(Feature::kHighMaskEnhancementSum, std::accumulate(enh_high.begin(), enh_high.end(), 0.0));

  const auto x = oracle_pick(p, ChannelId::kXch4Corrected, m.valid);
  {
    const double n = static_cast<double>(x.size());
    const double mu = oracle_mean(x);
    double m2 = 0, m3 = 0, m4 = 0;
    for (double v : x) {
      m2 += std::pow(v - mu, 2) / n;
      m3 += std::pow(v - mu, 3) / n;
      m4 += std::pow(v - mu, 4) / n;
    }
    set(Feature::kXch4Std, oracle_sample_std(x));
    if (m2 > 0.0 && n >= 4) {
      set(Feature::kXch4Skewness, m3 / std::pow(m2, 1.5) * std::sqrt(n * (n - 1)) / (n - 2));
      set(Feature::kXch4Kurtosis, (n - 1) / ((n - 2) * (n - 3)) * ((n + 1) * (m4 / (m2 * m2) - 3.0) + 6.0));
    }
  }

  double ime = 0.0;
  for (int i = 0; i < kPixels; ++i) {
    if (!m.high[i]) continue;
    const double column_kg_m2 = p.at(ChannelId::kEnhancement, i) * 1e-9 * (0.01604 / 0.02896) *
                                p.at(ChannelId::kSurfacePressure, i) / 9.80665;
    ime += column_kg_m2 * p.pixel_area_km2() * 1e6;
  }
  set(Feature::kImeKg, ime);
  set(Feature::kPlumeLengthKm, std::sqrt(n_high * p.pixel_area_km2()));

  double speed = 0.0, ubar = 0.0, vbar = 0.0;
  for (int i = 0; i < kPixels; ++i) {
    if (!m.valid[i]) continue;
    const double u = p.at(ChannelId::kWindEast, i), v = p.at(ChannelId::kWindNorth, i);
    speed += std::sqrt(u * u + v * v);
    ubar += u;
    vbar += v;
  }
  set(Feature::kWindSpeed10m, n_valid ? speed / n_valid : 0.0);

  double cloud_sum = 0.0;
  int cloud_count = 0;
  for (int i = 0; i < kPixels; ++i) {
    if (!m.high[i]) continue;
    double k = 0.0;
    bool any = false;
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        const int rr = i / kSide + dr, cc = i % kSide + dc;
        if (rr < 0 || rr >= kSide || cc < 0 || cc >= kSide) continue;
        const double cf = p.at(ChannelId::kCloudFraction, rr * kSide + cc);
        k += cf;
        any = any || cf > 0.0;
      }
    }
    cloud_sum += p.at(ChannelId::kEnhancement, i) * k;
    cloud_count += any;
  }
  set(Feature::kCloudAdjacentEnhancementSum, cloud_sum);
  set(Feature::kCloudAdjacentPixelCount, cloud_count);

  const OracleAxis high_axis = oracle_axis(m.high);
  const OracleAxis low_axis = oracle_axis(low_valid);
  const OracleAxis cloud_axis = oracle_axis(cloudy);
  const OracleAxis coast_axis = oracle_axis(coast);
  if (high_axis.defined && (ubar != 0.0 || vbar != 0.0)) {
    set(Feature::kPlumeWindAngleDeg, oracle_fold(high_axis.theta, std::atan2(vbar, ubar)));
  }
  if (!high_axis.empty) set(Feature::kPlumeElongationRatio, (high_axis.l1 + 1.0 / 12) / (high_axis.l2 + 1.0 / 12));
  if (high_axis.defined && cloud_axis.defined) {
    set(Feature::kCloudAngleHighDeg, oracle_fold(high_axis.theta, cloud_axis.theta));
  }
  if (low_axis.defined && cloud_axis.defined) {
    set(Feature::kCloudAngleLowDeg, oracle_fold(low_axis.theta, cloud_axis.theta));
  }
  if (high_axis.defined && coast_axis.defined) {
    set(Feature::kCoastAngleDeg, oracle_fold(high_axis.theta, coast_axis.theta));
  }

  const struct {
    ChannelId ch;
    Feature scene, dil;
  } corr[] = {{ChannelId::kAlbedoSwir, Feature::kCh4AlbedoCorrScene, Feature::kCh4AlbedoCorrDil},
              {ChannelId::kAotSwir, Feature::kCh4AotCorrScene, Feature::kCh4AotCorrDil},
              {ChannelId::kSurfacePressure, Feature::kCh4PsurfCorrScene, Feature::kCh4PsurfCorrDil},
              {ChannelId::kChi2, Feature::kCh4Chi2CorrScene, Feature::kCh4Chi2CorrDil}};
  for (const auto& c : corr) {
    set(c.scene, oracle_pearson(x, oracle_pick(p, c.ch, m.valid)));
    set(c.dil, oracle_pearson(oracle_pick(p, ChannelId::kXch4Corrected, ring), oracle_pick(p, c.ch, ring)));
  }

  const struct {
    ChannelId ch;
    Feature hi, lo;
  } means[] = {{ChannelId::kChi2, Feature::kMeanChi2High, Feature::kMeanChi2Low},
               {ChannelId::kAlbedoSwir, Feature::kMeanAlbedoHigh, Feature::kMeanAlbedoLow},
               {ChannelId::kAotSwir, Feature::kMeanAotHigh, Feature::kMeanAotLow},
               {ChannelId::kQaValue, Feature::kMeanQaHigh, Feature::kMeanQaLow}};
  for (const auto& mm : means) {
    set(mm.hi, oracle_mean(oracle_pick(p, mm.ch, m.high)));
    set(mm.lo, oracle_mean(oracle_pick(p, mm.ch, low_valid)));
  }

  const auto bg_h = oracle_pick(p, ChannelId::kXch4Corrected, bg_high);
  const auto bg_l = oracle_pick(p, ChannelId::kXch4Corrected, bg_low);
  set(Feature::kBgXch4StdHigh, oracle_sample_std(bg_h));
  set(Feature::kBgXch4StdLow, oracle_sample_std(bg_l));
  const auto in_high = oracle_pick(p, ChannelId::kXch4Corrected, m.high);
  const auto in_low = oracle_pick(p, ChannelId::kXch4Corrected, low_valid);
  if (!bg_h.empty() && !in_high.empty()) {
    const double level = oracle_median(bg_h);
    set(Feature::kMeanEnhAboveBgHigh, oracle_mean(in_high) - level);
    set(Feature::kMaxEnhAboveBgHigh, *std::max_element(in_high.begin(), in_high.end()) - level);
  }
  if (!bg_l.empty() && !in_low.empty()) set(Feature::kMeanEnhAboveBgLow, oracle_mean(in_low) - oracle_median(bg_l));

  if (n_high > 0) {
    const auto cls = oracle_pick(p, ChannelId::kSurfaceClass, m.high);
    auto frac = [&](double code) {
      return static_cast<double>(std::count(cls.begin(), cls.end(), code)) / static_cast<double>(cls.size());
    };
    set(Feature::kLandFractionHigh, frac(0.0));
    set(Feature::kLandWaterFractionHigh, frac(3.0));
    set(Feature::kCoastFractionHigh, frac(2.0));
  }
  return f;
}

}  // namespace plumescreen::testing
