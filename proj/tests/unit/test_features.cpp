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

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "feature_oracle.hpp"
#include "patch_builder.hpp"
#include "plumescreen/error.hpp"
#include "plumescreen/feature_table.hpp"
#include "plumescreen/features.hpp"
#include "plumescreen/synthgen.hpp"

using namespace plumescreen;
using plumescreen::testing::PatchBuilder;

namespace {

bool has_flag(const Extraction& e, Feature f) {
  return std::find(e.degenerate.begin(), e.degenerate.end(), std::string(feature_name(f))) != e.degenerate.end();
}

}  // namespace

TEST_SUITE("features") {
  TEST_CASE("41 canonical names") {
    const auto& names = feature_names();
    REQUIRE(names.size() == 41);
    CHECK(names.front() == "cnn_plume_score");
    CHECK(names[7] == "ime_kg");
    CHECK(names[13] == "plume_elongation_ratio");
    CHECK(names[24] == "coast_angle_deg");
    CHECK(names.back() == "coast_fraction_high");
  }

  TEST_CASE("uniform scene is degenerate but finite") {
    PatchBuilder b;
    b.at(ChannelId::kPlumeMask, pixel_index(10, 10)) = 0.8f;
    const ScenePatch p = b.build();
    const Extraction e = extract(p, derive_masks(p));
    CHECK(at(e.values, Feature::kXch4Std) == 0.0);
    CHECK(at(e.values, Feature::kXch4Skewness) == 0.0);
    CHECK(at(e.values, Feature::kXch4Kurtosis) == 0.0);
    CHECK(at(e.values, Feature::kCh4AlbedoCorrScene) == 0.0);
    CHECK(at(e.values, Feature::kCh4Chi2CorrScene) == 0.0);
    CHECK(has_flag(e, Feature::kXch4Skewness));
    CHECK(has_flag(e, Feature::kCh4AlbedoCorrScene));
    for (double v : e.values) CHECK(std::isfinite(v));
  }

  TEST_CASE("plume length is sqrt of the mask area") {
    PatchBuilder b;
    for (int p : {pixel_index(3, 3), pixel_index(3, 4), pixel_index(4, 3), pixel_index(4, 4)}) {
      b.at(ChannelId::kPlumeMask, p) = 1.0f;
    }
    const ScenePatch p = b.area(1.0).build();
    CHECK(at(extract(p, derive_masks(p)).values, Feature::kPlumeLengthKm) == doctest::Approx(2.0));
  }

  TEST_CASE("IME single-pixel closed form and linearity") {
    PatchBuilder b;
    b.at(ChannelId::kPlumeMask, pixel_index(8, 8)) = 1.0f;
    b.at(ChannelId::kEnhancement, pixel_index(8, 8)) = 100.0f;
    const ScenePatch p = b.build();
    // 100 ppb * (M_CH4 / M_air) * p / g * 1e-9 * 38.5e6 m^2
    const double expected = 100.0 * (0.01604 / 0.02896) * (101325.0 / 9.80665) * 1e-9 * 38.5e6;
    CHECK(ime_kg(p, derive_masks(p)) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(22032.4).epsilon(1e-5));
    CHECK(ime_kg(PatchBuilder().build(), derive_masks(PatchBuilder().build())) == 0.0);

    Rng rng(6);
    const ScenePatch r = testing::random_patch(rng);
    std::vector<float> doubled(r.raw().begin(), r.raw().end());
    for (int i = 0; i < kPixels; ++i) {
      float& e = doubled[static_cast<std::size_t>(static_cast<int>(ChannelId::kEnhancement) * kPixels + i)];
      if (!std::isnan(e)) e *= 2.0f;
    }
    const ScenePatch r2("r2", r.label(), doubled, r.valid(), r.pixel_area_km2());
    CHECK(ime_kg(r2, derive_masks(r2)) == doctest::Approx(2.0 * ime_kg(r, derive_masks(r))).epsilon(1e-12));
  }

  TEST_CASE("background median example") {
    // Only five valid pixels: background {1900, 1900, 1900, 1910}, mask pixel 1950.
    PatchBuilder b;
    for (int p = 5; p < kPixels; ++p) b.invalidate(p);
    const float vals[] = {1900, 1900, 1900, 1910, 1950};
    for (int p = 0; p < 5; ++p) b.at(ChannelId::kXch4Corrected, p) = vals[p];
    b.at(ChannelId::kPlumeMask, 4) = 0.6f;
    const ScenePatch p = b.build();
    const BackgroundStats s = background_stats(p, derive_masks(p), WhichMask::kHigh);
    CHECK(s.bg_level == 1900.0);
    CHECK(s.max_enh_above_bg == 50.0);
    CHECK(s.mean_enh_above_bg == 50.0);
    CHECK(s.bg_std == doctest::Approx(5.0));  // sample std of {1900,1900,1900,1910}
  }

  TEST_CASE("constant scene background and mask covering every valid pixel") {
    PatchBuilder b;
    b.at(ChannelId::kPlumeMask, 100) = 0.5f;
    const ScenePatch p = b.build();
    const BackgroundStats s = background_stats(p, derive_masks(p), WhichMask::kHigh);
    CHECK(s.bg_std == 0.0);
    CHECK(s.mean_enh_above_bg == 0.0);
    CHECK(s.max_enh_above_bg == 0.0);

    PatchBuilder all;
    all.fill(ChannelId::kPlumeMask, 0.5f);
    const ScenePatch q = all.build();
    const Extraction e = extract(q, derive_masks(q));
    CHECK(at(e.values, Feature::kMeanEnhAboveBgHigh) == 0.0);
    CHECK(at(e.values, Feature::kBgXch4StdHigh) == 0.0);
    CHECK(has_flag(e, Feature::kMeanEnhAboveBgHigh));
    CHECK(has_flag(e, Feature::kBgXch4StdHigh));
  }

  TEST_CASE("inconsistent masks are rejected") {
    PatchBuilder b;
    b.invalidate(50);
    const ScenePatch p = b.build();
    PlumeMasks m;
    m.high.set(50);
    m.low.set(50);
    CHECK_THROWS_AS(extract(p, m), DataError);
    PlumeMasks m2;
    m2.high.set(51);
    CHECK_THROWS_AS(extract(p, m2), DataError);
  }

  TEST_CASE("extract matches the naive oracle on random patches") {
    Rng rng(314);
    for (int i = 0; i < 200; ++i) {
      const ScenePatch p = testing::random_patch(rng);
      const Extraction e = extract(p, derive_masks(p));
      const auto o = testing::oracle_features(p);
      for (int k = 0; k < kFeatureCount; ++k) {
        const double got = e.values[static_cast<std::size_t>(k)];
        const double want = o[static_cast<std::size_t>(k)];
        INFO("feature ", feature_name(static_cast<Feature>(k)), " patch ", i);
        CHECK(std::abs(got - want) <= 1e-9 * std::max(1.0, std::abs(want)));
      }
    }
  }

  TEST_CASE("declared ranges hold on generated scenes") {
    GenConfig cfg;
    cfg.seed = 8;
    cfg.n_scenes = 200;
    const auto run = extract_all(generate(cfg));
    for (std::size_t r = 0; r < run.table.size(); ++r) {
      const auto row = run.table.X.row(r);
      for (double v : row) CHECK(std::isfinite(v));
      for (Feature f : {Feature::kCh4AlbedoCorrScene, Feature::kCh4AlbedoCorrDil, Feature::kCh4AotCorrScene,
                        Feature::kCh4AotCorrDil, Feature::kCh4PsurfCorrScene, Feature::kCh4PsurfCorrDil,
                        Feature::kCh4Chi2CorrScene, Feature::kCh4Chi2CorrDil}) {
        CHECK(std::abs(row[static_cast<std::size_t>(f)]) <= 1.0);
      }
      for (Feature f : {Feature::kValidPixelFraction, Feature::kLandFractionHigh, Feature::kLandWaterFractionHigh,
                        Feature::kCoastFractionHigh, Feature::kCnnPlumeScore}) {
        CHECK(row[static_cast<std::size_t>(f)] >= 0.0);
        CHECK(row[static_cast<std::size_t>(f)] <= 1.0);
      }
      for (Feature f : {Feature::kPlumeWindAngleDeg, Feature::kCloudAngleHighDeg, Feature::kCloudAngleLowDeg,
                        Feature::kCoastAngleDeg}) {
        CHECK(row[static_cast<std::size_t>(f)] >= 0.0);
        CHECK(row[static_cast<std::size_t>(f)] <= 90.0);
      }
      for (Feature f : {Feature::kHighMaskPixelCount, Feature::kCloudAdjacentPixelCount, Feature::kPlumeLengthKm,
                        Feature::kWindSpeed10m, Feature::kXch4Std, Feature::kBgXch4StdHigh}) {
        CHECK(row[static_cast<std::size_t>(f)] >= 0.0);
      }
    }
  }

  TEST_CASE("albedo-artifact scene correlation matches a direct Pearson") {
    GenConfig cfg;
    cfg.seed = 7;
    cfg.n_scenes = 40;
    cfg.plume_fraction = 0.0;
    cfg.artifact_mix = {1.0, 0.0, 0.0, 0.0};
    const auto patches = generate(cfg);
    for (const ScenePatch& p : patches) {
      const auto o = testing::oracle_masks(p);
      const double want = testing::oracle_pearson(testing::oracle_pick(p, ChannelId::kXch4Corrected, o.valid),
                                                  testing::oracle_pick(p, ChannelId::kAlbedoSwir, o.valid));
      const double got = at(extract(p, derive_masks(p)).values, Feature::kCh4AlbedoCorrScene);
      CHECK(std::abs(got - want) <= 1e-9);
    }
  }
}
