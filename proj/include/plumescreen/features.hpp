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

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "plumescreen/scene.hpp"

namespace plumescreen {

enum class Feature : int {
  kCnnPlumeScore = 0,
  kValidPixelFraction,
  kHighMaskPixelCount,
  kHighMaskEnhancementSum,
  kXch4Std,
  kXch4Skewness,
  kXch4Kurtosis,
  kImeKg,
  kPlumeLengthKm,
  kWindSpeed10m,
  kCloudAdjacentEnhancementSum,
  kCloudAdjacentPixelCount,
  kPlumeWindAngleDeg,
  kPlumeElongationRatio,
  kCh4AlbedoCorrScene,
  kCh4AlbedoCorrDil,
  kCh4AotCorrScene,
  kCh4AotCorrDil,
  kCh4PsurfCorrScene,
  kCh4PsurfCorrDil,
  kCh4Chi2CorrScene,
  kCh4Chi2CorrDil,
  kCloudAngleHighDeg,
  kCloudAngleLowDeg,
  kCoastAngleDeg,
  kMeanChi2High,
  kMeanChi2Low,
  kMeanAlbedoHigh,
  kMeanAlbedoLow,
  kMeanAotHigh,
  kMeanAotLow,
  kMeanQaHigh,
  kMeanQaLow,
  kBgXch4StdHigh,
  kBgXch4StdLow,
  kMeanEnhAboveBgHigh,
  kMeanEnhAboveBgLow,
  kMaxEnhAboveBgHigh,
  kLandFractionHigh,
  kLandWaterFractionHigh,
  kCoastFractionHigh,
};

inline constexpr int kFeatureCount = 41;

std::string_view feature_name(Feature f);
const std::vector<std::string>& feature_names();

using FeatureVector = std::array<double, kFeatureCount>;

inline double& at(FeatureVector& v, Feature f) { return v[static_cast<std::size_t>(f)]; }
inline double at(const FeatureVector& v, Feature f) { return v[static_cast<std::size_t>(f)]; }

struct Extraction {
  FeatureVector values{};
  /// Names of features whose selection was empty or had no spread, so the
  /// degenerate value 0 was substituted.
  std::vector<std::string> degenerate;
};

/// Computes the 41 features. Throws DataError when the masks are not
/// consistent with the patch (high must lie inside the valid pixels and
/// inside low).
Extraction extract(const ScenePatch& patch, const PlumeMasks& masks);

/// Integrated mass enhancement [kg] over the high mask, converting the
/// column-average enhancement [ppb] with the local surface pressure.
double ime_kg(const ScenePatch& patch, const PlumeMasks& masks);

namespace ime_constants {
inline constexpr double kMolarMassCh4 = 0.01604;  // kg/mol
inline constexpr double kMolarMassAir = 0.02896;  // kg/mol
inline constexpr double kGravity = 9.80665;       // m/s^2
}  // namespace ime_constants

enum class WhichMask { kHigh, kLow };

struct BackgroundStats {
  double bg_std = 0.0;
  double bg_level = 0.0;
  double mean_enh_above_bg = 0.0;
  double max_enh_above_bg = 0.0;
  bool degenerate_std = false;
  bool degenerate_enh = false;
};

/// Background = valid pixels outside the chosen mask; its level is the
/// median XCH4 there. Enhancements above background are taken over the
/// valid pixels of the chosen mask.
BackgroundStats background_stats(const ScenePatch& patch, const PlumeMasks& masks, WhichMask which);

}  // namespace plumescreen
