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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "plumescreen/grid.hpp"

namespace plumescreen {

/// The closed channel registry, in canonical ordinal order.
enum class ChannelId : int {
  kXch4Corrected = 0,
  kEnhancement,
  kXch4Precision,
  kAlbedoSwir,
  kAotSwir,
  kChi2,
  kSurfaceAltitude,
  kSurfacePressure,
  kQaValue,
  kWindEast,
  kWindNorth,
  kSnowProxy,
  kSurfaceClass,
  kPlumeMask,
  kCloudFraction,
};

inline constexpr int kChannelCount = 15;

std::string_view channel_name(ChannelId id);
std::optional<ChannelId> channel_from_name(std::string_view name);
const std::array<ChannelId, kChannelCount>& all_channels();

/// Context channels are defined on every pixel, retrieval or not. All other
/// channels are retrieval products and hold NaN where the retrieval failed.
bool is_context_channel(ChannelId id);

/// Integer coding of the surface_class channel.
enum class SurfaceClass : int { kLand = 0, kWater = 1, kCoast = 2, kLandWater = 3 };

enum class Label { kArtifact, kPlume, kUnlabeled };

std::string_view label_name(Label label);
Label label_from_name(std::string_view name);

inline constexpr double kDefaultPixelAreaKm2 = 38.5;

using Meta = std::map<std::string, std::string>;

/// One 32x32x15 scene. Construction validates every invariant and throws
/// DataError on violation; the patch is immutable afterwards.
class ScenePatch {
 public:
  /// `data` holds kChannelCount * kPixels floats, channel-major in registry
  /// order, each channel row-major.
  ScenePatch(std::string id, Label label, std::vector<float> data, Mask valid,
             double pixel_area_km2 = kDefaultPixelAreaKm2, Meta meta = {});

  const std::string& id() const { return id_; }
  Label label() const { return label_; }
  double pixel_area_km2() const { return pixel_area_km2_; }
  const Meta& meta() const { return meta_; }
  const Mask& valid() const { return valid_; }

  std::span<const float, kPixels> channel(ChannelId id) const {
    return std::span<const float, kPixels>(data_.data() + static_cast<int>(id) * kPixels, kPixels);
  }
  float at(ChannelId id, int pixel) const { return data_[static_cast<int>(id) * kPixels + pixel]; }
  std::span<const float> raw() const { return data_; }

  bool operator==(const ScenePatch& other) const;

 private:
  void validate() const;

  std::string id_;
  Label label_;
  std::vector<float> data_;
  Mask valid_;
  double pixel_area_km2_;
  Meta meta_;
};

/// High- and low-confidence plume pixel sets plus the first-stage score.
struct PlumeMasks {
  Mask high;
  Mask low;
  double cnn_score = 0.0;
};

/// Decodes the plume_mask channel: high = pixels with a positive value,
/// low = high dilated once, score = the channel maximum (0 when empty).
PlumeMasks derive_masks(const ScenePatch& patch);

}  // namespace plumescreen
