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
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "plumescreen/scene.hpp"

namespace plumescreen {

enum class ArtifactKind { kAlbedoGradient = 0, kCoastline, kAerosolBlob, kElevationGradient };

inline constexpr int kArtifactKindCount = 4;

std::string_view artifact_kind_name(ArtifactKind kind);

/// The channel whose spatial pattern drives each artifact's fake enhancement.
ChannelId confounder_channel(ArtifactKind kind);

/// How labels relate to scene content.
enum class Scenario {
  /// Plume scenes carry a wind-advected plume, artifact scenes a
  /// confounder-driven enhancement.
  kPhysical,
  /// Scene physics is drawn independently of the label; only the first-stage
  /// score distribution differs between classes.
  kScoreOnly,
};

struct GenConfig {
  std::uint64_t seed = 0;
  std::size_t n_scenes = 100;
  double plume_fraction = 0.5;
  /// Weights over albedo_gradient, coastline, aerosol_blob, elevation_gradient.
  std::array<double, kArtifactKindCount> artifact_mix = {0.25, 0.25, 0.25, 0.25};
  double enhancement_scale_ppb = 40.0;
  double noise_ppb = 12.0;
  double wind_speed_lo_mps = 1.0;
  double wind_speed_hi_mps = 8.0;
  double pixel_area_km2 = kDefaultPixelAreaKm2;
  Scenario scenario = Scenario::kPhysical;

  /// Throws ConfigError when a field is out of its domain.
  void validate() const;

  nlohmann::json to_json() const;
  /// Missing keys keep their defaults; unknown keys are rejected.
  static GenConfig from_json(const nlohmann::json& j);
};

/// Number of plume-labelled scenes: round(plume_fraction * n_scenes).
std::size_t plume_count(const GenConfig& config);

/// Deterministic scene generation. Scene i draws only from the random
/// stream (seed, i), so output is independent of worker count.
std::vector<ScenePatch> generate(const GenConfig& config);

}  // namespace plumescreen
