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

#include "plumescreen/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "plumescreen/error.hpp"
#include "plumescreen/morphology.hpp"
#include "plumescreen/stats.hpp"

namespace plumescreen {
namespace {

constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "cnn_plume_score",
    "valid_pixel_fraction",
    "high_mask_pixel_count",
    "high_mask_enhancement_sum",
    "xch4_std",
    "xch4_skewness",
    "xch4_kurtosis",
    "ime_kg",
    "plume_length_km",
    "wind_speed_10m",
    "cloud_adjacent_enhancement_sum",
    "cloud_adjacent_pixel_count",
    "plume_wind_angle_deg",
    "plume_elongation_ratio",
    "ch4_albedo_corr_scene",
    "ch4_albedo_corr_dil",
    "ch4_aot_corr_scene",
    "ch4_aot_corr_dil",
    "ch4_psurf_corr_scene",
    "ch4_psurf_corr_dil",
    "ch4_chi2_corr_scene",
    "ch4_chi2_corr_dil",
    "cloud_angle_high_deg",
    "cloud_angle_low_deg",
    "coast_angle_deg",
    "mean_chi2_high",
    "mean_chi2_low",
    "mean_albedo_high",
    "mean_albedo_low",
    "mean_aot_high",
    "mean_aot_low",
    "mean_qa_high",
    "mean_qa_low",
    "bg_xch4_std_high",
    "bg_xch4_std_low",
    "mean_enh_above_bg_high",
    "mean_enh_above_bg_low",
    "max_enh_above_bg_high",
    "land_fraction_high",
    "land_water_fraction_high",
    "coast_fraction_high",
};

constexpr float kCloudyThreshold = 0.5f;

class Recorder {
 public:
  explicit Recorder(Extraction& out) : out_(out) {}

  void set(Feature f, double value) { at(out_.values, f) = value; }
  void set(Feature f, const Stat& s) {
    at(out_.values, f) = s.value;
    if (s.degenerate) flag(f);
  }
  void flag(Feature f) { out_.degenerate.emplace_back(feature_name(f)); }

 private:
  Extraction& out_;
};

Mask class_pixels(const ScenePatch& patch, SurfaceClass cls) {
  Mask m;
  const auto codes = patch.channel(ChannelId::kSurfaceClass);
  for (int p = 0; p < kPixels; ++p) {
    if (codes[static_cast<std::size_t>(p)] == static_cast<float>(cls)) m.set(p);
  }
  return m;
}

double class_fraction(const ScenePatch& patch, const Mask& sel, SurfaceClass cls) {
  const int n = sel.count();
  if (n == 0) return 0.0;
  return static_cast<double>((sel & class_pixels(patch, cls)).count()) / n;
}

/// Angle between the principal axes of two pixel sets; nullopt when either
/// axis is undefined.
std::optional<double> axis_angle(const PrincipalAxis& a, const PrincipalAxis& b) {
  if (a.degenerate || a.isotropic || b.degenerate || b.isotropic) return std::nullopt;
  return folded_angle_deg(a.axis_x, a.axis_y, b.axis_x, b.axis_y);
}

template <typename Fn>
void for_each_neighbour(int p, Fn&& fn) {
  const int r = pixel_row(p);
  const int c = pixel_col(p);
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      const int rr = r + dr;
      const int cc = c + dc;
      if (rr >= 0 && rr < kSide && cc >= 0 && cc < kSide) fn(pixel_index(rr, cc));
    }
  }
}

}  // namespace

std::string_view feature_name(Feature f) { return kFeatureNames[static_cast<std::size_t>(f)]; }

const std::vector<std::string>& feature_names() {
  static const std::vector<std::string> names(kFeatureNames.begin(), kFeatureNames.end());
  return names;
}

double ime_kg(const ScenePatch& patch, const PlumeMasks& masks) {
  using namespace ime_constants;
  const Mask sel = masks.high & patch.valid();
  const auto enh = patch.channel(ChannelId::kEnhancement);
  const auto psurf = patch.channel(ChannelId::kSurfacePressure);
  const double area_m2 = patch.pixel_area_km2() * 1e6;
  double total = 0.0;
  sel.for_each([&](int p) {
    const auto i = static_cast<std::size_t>(p);
    const double kg_per_m2_per_ppb = (kMolarMassCh4 / kMolarMassAir) * (psurf[i] / kGravity) * 1e-9;
    total += enh[i] * kg_per_m2_per_ppb * area_m2;
  });
  return total;
}

BackgroundStats background_stats(const ScenePatch& patch, const PlumeMasks& masks, WhichMask which) {
  BackgroundStats out;
  const Mask sel = (which == WhichMask::kHigh ? masks.high : masks.low) & patch.valid();
  const Mask background = patch.valid() - sel;
  const auto xch4 = patch.channel(ChannelId::kXch4Corrected);

  const Stat sd = masked_std(xch4, background);
  out.bg_std = sd.value;
  out.degenerate_std = sd.degenerate;

  const Stat level = masked_median(xch4, background);
  if (level.degenerate || sel.empty()) {
    out.degenerate_enh = true;
    return out;
  }
  out.bg_level = level.value;
  double sum = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  sel.for_each([&](int p) {
    const double e = xch4[static_cast<std::size_t>(p)] - level.value;
    sum += e;
    best = std::max(best, e);
  });
  out.mean_enh_above_bg = sum / sel.count();
  out.max_enh_above_bg = best;
  return out;
}

Extraction extract(const ScenePatch& patch, const PlumeMasks& masks) {
  const Mask& valid = patch.valid();
  if (!masks.high.is_subset_of(valid)) {
    throw DataError("patch '" + patch.id() + "': high-confidence mask covers invalid pixels");
  }
  if (!masks.high.is_subset_of(masks.low)) {
    throw DataError("patch '" + patch.id() + "': high-confidence mask is not contained in the low-confidence mask");
  }

  Extraction out;
  Recorder rec(out);
  const Mask& high = masks.high;
  const Mask low = masks.low & valid;
  const auto xch4 = patch.channel(ChannelId::kXch4Corrected);
  const auto enh = patch.channel(ChannelId::kEnhancement);
  const auto cloud = patch.channel(ChannelId::kCloudFraction);

  rec.set(Feature::kCnnPlumeScore, masks.cnn_score);
  rec.set(Feature::kValidPixelFraction, static_cast<double>(valid.count()) / kPixels);
  rec.set(Feature::kHighMaskPixelCount, high.count());
  rec.set(Feature::kHighMaskEnhancementSum, masked_sum(enh, high));

  const Moments moments = masked_moments(xch4, valid);
  rec.set(Feature::kXch4Std, moments.std);
  rec.set(Feature::kXch4Skewness, moments.skewness);
  rec.set(Feature::kXch4Kurtosis, moments.kurtosis);

  rec.set(Feature::kImeKg, ime_kg(patch, masks));
  rec.set(Feature::kPlumeLengthKm, std::sqrt(high.count() * patch.pixel_area_km2()));

  // Wind: mean speed over valid pixels, and the component-wise mean vector.
  const auto u = patch.channel(ChannelId::kWindEast);
  const auto v = patch.channel(ChannelId::kWindNorth);
  double speed = 0.0;
  valid.for_each([&](int p) {
    const auto i = static_cast<std::size_t>(p);
    speed += std::hypot(static_cast<double>(u[i]), static_cast<double>(v[i]));
  });
  if (valid.empty()) {
    rec.flag(Feature::kWindSpeed10m);
  } else {
    speed /= valid.count();
  }
  rec.set(Feature::kWindSpeed10m, speed);
  const double wind_x = masked_mean(u, valid);
  const double wind_y = masked_mean(v, valid);

  // Cloud adjacency via the 3x3 neighbourhood of each high-mask pixel.
  double cloud_sum = 0.0;
  int cloud_count = 0;
  high.for_each([&](int p) {
    double kernel = 0.0;
    bool cloudy = false;
    for_each_neighbour(p, [&](int q) {
      const float cf = cloud[static_cast<std::size_t>(q)];
      kernel += cf;
      cloudy = cloudy || cf > 0.0f;
    });
    cloud_sum += enh[static_cast<std::size_t>(p)] * kernel;
    cloud_count += cloudy ? 1 : 0;
  });
  rec.set(Feature::kCloudAdjacentEnhancementSum, cloud_sum);
  rec.set(Feature::kCloudAdjacentPixelCount, cloud_count);

  const PrincipalAxis high_axis = principal_axis(high);
  const PrincipalAxis low_axis = principal_axis(low);
  if (high_axis.degenerate || high_axis.isotropic || (wind_x == 0.0 && wind_y == 0.0)) {
    rec.set(Feature::kPlumeWindAngleDeg, Stat{0.0, true});
  } else {
    rec.set(Feature::kPlumeWindAngleDeg, folded_angle_deg(high_axis.axis_x, high_axis.axis_y, wind_x, wind_y));
  }
  rec.set(Feature::kPlumeElongationRatio, Stat{elongation_ratio(high_axis), high_axis.degenerate});

  const Mask ring = dilation_ring(masks.low) & valid;
  const struct {
    ChannelId channel;
    Feature scene;
    Feature dil;
  } correlations[] = {
      {ChannelId::kAlbedoSwir, Feature::kCh4AlbedoCorrScene, Feature::kCh4AlbedoCorrDil},
      {ChannelId::kAotSwir, Feature::kCh4AotCorrScene, Feature::kCh4AotCorrDil},
      {ChannelId::kSurfacePressure, Feature::kCh4PsurfCorrScene, Feature::kCh4PsurfCorrDil},
      {ChannelId::kChi2, Feature::kCh4Chi2CorrScene, Feature::kCh4Chi2CorrDil},
  };
  for (const auto& c : correlations) {
    rec.set(c.scene, masked_pearson(xch4, patch.channel(c.channel), valid));
    rec.set(c.dil, masked_pearson(xch4, patch.channel(c.channel), ring));
  }

  Mask cloudy;
  for (int p = 0; p < kPixels; ++p) {
    if (cloud[static_cast<std::size_t>(p)] > kCloudyThreshold) cloudy.set(p);
  }
  const PrincipalAxis cloud_axis = principal_axis(cloudy);
  const PrincipalAxis coast_axis = principal_axis(class_pixels(patch, SurfaceClass::kCoast));
  const auto set_angle = [&](Feature f, std::optional<double> angle) {
    rec.set(f, Stat{angle.value_or(0.0), !angle.has_value()});
  };
  set_angle(Feature::kCloudAngleHighDeg, axis_angle(high_axis, cloud_axis));
  set_angle(Feature::kCloudAngleLowDeg, axis_angle(low_axis, cloud_axis));
  set_angle(Feature::kCoastAngleDeg, axis_angle(high_axis, coast_axis));

  const struct {
    ChannelId channel;
    Feature high_f;
    Feature low_f;
  } means[] = {
      {ChannelId::kChi2, Feature::kMeanChi2High, Feature::kMeanChi2Low},
      {ChannelId::kAlbedoSwir, Feature::kMeanAlbedoHigh, Feature::kMeanAlbedoLow},
      {ChannelId::kAotSwir, Feature::kMeanAotHigh, Feature::kMeanAotLow},
      {ChannelId::kQaValue, Feature::kMeanQaHigh, Feature::kMeanQaLow},
  };
  for (const auto& m : means) {
    rec.set(m.high_f, Stat{masked_mean(patch.channel(m.channel), high), high.empty()});
    rec.set(m.low_f, Stat{masked_mean(patch.channel(m.channel), low), low.empty()});
  }

  const BackgroundStats bg_high = background_stats(patch, masks, WhichMask::kHigh);
  const BackgroundStats bg_low = background_stats(patch, masks, WhichMask::kLow);
  rec.set(Feature::kBgXch4StdHigh, Stat{bg_high.bg_std, bg_high.degenerate_std});
  rec.set(Feature::kBgXch4StdLow, Stat{bg_low.bg_std, bg_low.degenerate_std});
  rec.set(Feature::kMeanEnhAboveBgHigh, Stat{bg_high.mean_enh_above_bg, bg_high.degenerate_enh});
  rec.set(Feature::kMeanEnhAboveBgLow, Stat{bg_low.mean_enh_above_bg, bg_low.degenerate_enh});
  rec.set(Feature::kMaxEnhAboveBgHigh, Stat{bg_high.max_enh_above_bg, bg_high.degenerate_enh});

  rec.set(Feature::kLandFractionHigh, Stat{class_fraction(patch, high, SurfaceClass::kLand), high.empty()});
  rec.set(Feature::kLandWaterFractionHigh,
          Stat{class_fraction(patch, high, SurfaceClass::kLandWater), high.empty()});
  rec.set(Feature::kCoastFractionHigh, Stat{class_fraction(patch, high, SurfaceClass::kCoast), high.empty()});

  for (double& value : out.values) {
    if (!std::isfinite(value)) throw DataError("patch '" + patch.id() + "': non-finite feature value");
  }
  return out;
}

}  // namespace plumescreen
