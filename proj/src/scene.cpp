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

#include "plumescreen/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

#include "plumescreen/error.hpp"
#include "plumescreen/morphology.hpp"

namespace plumescreen {
namespace {

constexpr std::array<std::string_view, kChannelCount> kChannelNames = {
    "xch4_corrected",   "enhancement",      "xch4_precision", "albedo_swir",  "aot_swir",
    "chi2",             "surface_altitude", "surface_pressure", "qa_value",   "wind_east",
    "wind_north",       "snow_proxy",       "surface_class",  "plume_mask",   "cloud_fraction",
};

constexpr std::array<ChannelId, kChannelCount> make_all_channels() {
  std::array<ChannelId, kChannelCount> out{};
  for (int i = 0; i < kChannelCount; ++i) out[static_cast<std::size_t>(i)] = static_cast<ChannelId>(i);
  return out;
}

std::string describe(const std::string& id, ChannelId ch, int pixel, const char* what) {
  std::ostringstream os;
  os << "patch '" << id << "': channel " << channel_name(ch) << " at (row " << pixel_row(pixel)
     << ", col " << pixel_col(pixel) << ") " << what;
  return os.str();
}

}  // namespace

std::string_view channel_name(ChannelId id) { return kChannelNames[static_cast<std::size_t>(id)]; }

std::optional<ChannelId> channel_from_name(std::string_view name) {
  for (int i = 0; i < kChannelCount; ++i) {
    if (kChannelNames[static_cast<std::size_t>(i)] == name) return static_cast<ChannelId>(i);
  }
  return std::nullopt;
}

const std::array<ChannelId, kChannelCount>& all_channels() {
  static constexpr auto channels = make_all_channels();
  return channels;
}

bool is_context_channel(ChannelId id) {
  return id == ChannelId::kSurfaceClass || id == ChannelId::kPlumeMask ||
         id == ChannelId::kCloudFraction;
}

std::string_view label_name(Label label) {
  switch (label) {
    case Label::kArtifact: return "artifact";
    case Label::kPlume: return "plume";
    case Label::kUnlabeled: return "unlabeled";
  }
  return "unlabeled";
}

Label label_from_name(std::string_view name) {
  if (name == "plume") return Label::kPlume;
  if (name == "artifact") return Label::kArtifact;
  if (name == "unlabeled" || name.empty()) return Label::kUnlabeled;
  throw DataError("unknown label '" + std::string(name) + "'");
}

ScenePatch::ScenePatch(std::string id, Label label, std::vector<float> data, Mask valid,
                       double pixel_area_km2, Meta meta)
    : id_(std::move(id)),
      label_(label),
      data_(std::move(data)),
      valid_(valid),
      pixel_area_km2_(pixel_area_km2),
      meta_(std::move(meta)) {
  validate();
}

void ScenePatch::validate() const {
  if (data_.size() != static_cast<std::size_t>(kChannelCount * kPixels)) {
    throw DataError("patch '" + id_ + "': expected " + std::to_string(kChannelCount * kPixels) +
                    " channel values, got " + std::to_string(data_.size()));
  }
  if (!(pixel_area_km2_ > 0.0) || !std::isfinite(pixel_area_km2_)) {
    throw DataError("patch '" + id_ + "': pixel_area_km2 must be positive and finite");
  }
  for (ChannelId ch : all_channels()) {
    const auto values = channel(ch);
    for (int p = 0; p < kPixels; ++p) {
      const float v = values[static_cast<std::size_t>(p)];
      const bool valid = valid_.test(p);
      if (is_context_channel(ch)) {
        if (!std::isfinite(v)) throw DataError(describe(id_, ch, p, "is not finite"));
      } else if (valid) {
        if (!std::isfinite(v)) throw DataError(describe(id_, ch, p, "is not finite on a valid pixel"));
      } else if (!std::isnan(v)) {
        throw DataError(describe(id_, ch, p, "must be NaN on an invalid pixel"));
      }
      switch (ch) {
        case ChannelId::kQaValue:
          if (valid && (v < 0.0f || v > 1.0f)) throw DataError(describe(id_, ch, p, "outside [0,1]"));
          break;
        case ChannelId::kPlumeMask:
          if (v < 0.0f || v > 1.0f) throw DataError(describe(id_, ch, p, "outside [0,1]"));
          if (!valid && v != 0.0f) throw DataError(describe(id_, ch, p, "marks an invalid pixel"));
          break;
        case ChannelId::kCloudFraction:
          if (v < 0.0f || v > 1.0f) throw DataError(describe(id_, ch, p, "outside [0,1]"));
          break;
        case ChannelId::kSurfaceClass:
          if (v != std::floor(v) || v < 0.0f || v > 3.0f) {
            throw DataError(describe(id_, ch, p, "is not a surface class code in {0,1,2,3}"));
          }
          break;
        default: break;
      }
    }
  }
}

bool ScenePatch::operator==(const ScenePatch& other) const {
  return id_ == other.id_ && label_ == other.label_ && valid_ == other.valid_ &&
         pixel_area_km2_ == other.pixel_area_km2_ && meta_ == other.meta_ &&
         data_.size() == other.data_.size() &&
         std::memcmp(data_.data(), other.data_.data(), data_.size() * sizeof(float)) == 0;
}

PlumeMasks derive_masks(const ScenePatch& patch) {
  PlumeMasks masks;
  const auto plume = patch.channel(ChannelId::kPlumeMask);
  float best = 0.0f;
  for (int p = 0; p < kPixels; ++p) {
    const float v = plume[static_cast<std::size_t>(p)];
    if (v > 0.0f) {
      masks.high.set(p);
      best = std::max(best, v);
    }
  }
  masks.low = dilate(masks.high, 1);
  masks.cnn_score = best;
  return masks;
}

}  // namespace plumescreen
