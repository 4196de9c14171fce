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

#include "plumescreen/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "plumescreen/error.hpp"
#include "plumescreen/parallel.hpp"
#include "plumescreen/rng.hpp"
#include "plumescreen/stats.hpp"

namespace plumescreen {
namespace {

constexpr std::uint64_t kLabelStream = 0x4C4142454C53ULL;  // distinct from any scene index
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kMinArtifactCorrelation = 0.55;
constexpr double kBiasedPlumeFraction = 0.35;

using Grid = std::array<double, kPixels>;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Signed distance of a pixel centre along the unit direction (cos t, sin t)
/// measured from the grid centre.
double projection(int p, double theta) {
  const double x = pixel_col(p) - 15.5;
  const double y = pixel_row(p) - 15.5;
  return x * std::cos(theta) + y * std::sin(theta);
}

/// Standardises values over the valid pixels; returns false when constant.
bool standardise(const Grid& in, const Mask& valid, Grid& out) {
  double sum = 0.0;
  int n = 0;
  valid.for_each([&](int p) {
    sum += in[static_cast<std::size_t>(p)];
    ++n;
  });
  if (n < 3) return false;
  const double mean = sum / n;
  double ss = 0.0;
  valid.for_each([&](int p) { ss += (in[static_cast<std::size_t>(p)] - mean) * (in[static_cast<std::size_t>(p)] - mean); });
  if (no_spread(ss, mean, n)) return false;
  const double sd = std::sqrt(ss / n);
  for (int p = 0; p < kPixels; ++p) out[static_cast<std::size_t>(p)] = (in[static_cast<std::size_t>(p)] - mean) / sd;
  return true;
}

struct Fields {
  Grid xch4{}, enhancement{}, precision{}, albedo{}, aot{}, chi2{}, altitude{}, pressure{}, qa{}, wind_east{},
      wind_north{}, snow{}, surface{}, plume_mask{}, cloud{};
  Mask valid;
};

void add_clouds(Rng& rng, Fields& f) {
  f.cloud.fill(0.0);
  if (rng.bernoulli(0.4)) {
    const int blobs = 1 + static_cast<int>(rng.index(2));
    for (int b = 0; b < blobs; ++b) {
      const double cr = rng.uniform(0.0, 31.0);
      const double cc = rng.uniform(0.0, 31.0);
      const double rr = rng.uniform(1.5, 5.0);
      const double rc = rng.uniform(1.5, 5.0);
      for (int p = 0; p < kPixels; ++p) {
        const double dr = (pixel_row(p) - cr) / rr;
        const double dc = (pixel_col(p) - cc) / rc;
        const double cf = std::exp(-0.5 * (dr * dr + dc * dc)) * 1.2;
        f.cloud[static_cast<std::size_t>(p)] = std::min(1.0, std::max(f.cloud[static_cast<std::size_t>(p)], cf < 0.02 ? 0.0 : cf));
      }
    }
  }
  f.valid = Mask::full();
  for (int p = 0; p < kPixels; ++p) {
    if (f.cloud[static_cast<std::size_t>(p)] > 0.5 || rng.bernoulli(0.01)) f.valid.set(p, false);
  }
}

void add_coastline(Rng& rng, Fields& f, double theta, double offset) {
  for (int p = 0; p < kPixels; ++p) {
    const double d = projection(p, theta) - offset;
    double cls = d < 0.0 ? 0.0 : 1.0;
    if (std::abs(d) <= 0.75) {
      cls = 2.0;
    } else if (d > 0.75 && d <= 1.6) {
      cls = 3.0;
    }
    f.surface[static_cast<std::size_t>(p)] = cls;
  }
  (void)rng;
}

void base_fields(Rng& rng, const GenConfig& cfg, Fields& f) {
  add_clouds(rng, f);
  f.surface.fill(0.0);
  if (rng.bernoulli(0.1)) add_coastline(rng, f, rng.uniform(0.0, 2.0 * std::numbers::pi), rng.uniform(-12.0, 12.0));

  const double albedo0 = rng.uniform(0.15, 0.35);
  const double albedo_slope = rng.uniform(-0.003, 0.003);
  const double albedo_dir = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double aot0 = rng.uniform(0.02, 0.08);
  const double alt0 = rng.uniform(0.0, 1500.0);
  const double alt_slope = rng.uniform(-5.0, 5.0);
  const double alt_dir = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double chi0 = rng.uniform(0.9, 1.3);
  const double prec0 = rng.uniform(8.0, 14.0);
  const double speed = rng.uniform(cfg.wind_speed_lo_mps, cfg.wind_speed_hi_mps);
  const double wind_dir = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const bool snowy = rng.bernoulli(0.1);
  const double snow_level = rng.uniform(0.2, 0.8);

  for (int p = 0; p < kPixels; ++p) {
    const auto i = static_cast<std::size_t>(p);
    const bool water = f.surface[i] == 1.0;
    f.albedo[i] = water ? 0.03 + rng.normal(0.0, 0.003)
                        : albedo0 + albedo_slope * projection(p, albedo_dir) + rng.normal(0.0, 0.01);
    f.aot[i] = aot0 + rng.normal(0.0, 0.003);
    f.altitude[i] = water ? 0.0 : alt0 + alt_slope * projection(p, alt_dir) + rng.normal(0.0, 10.0);
    f.chi2[i] = chi0 + rng.normal(0.0, 0.05);
    f.precision[i] = prec0 + rng.normal(0.0, 0.5);
    f.qa[i] = std::clamp(rng.uniform(0.8, 1.0) - 0.5 * f.cloud[i], 0.4, 1.0);
    f.wind_east[i] = speed * std::cos(wind_dir);
    f.wind_north[i] = speed * std::sin(wind_dir);
    f.snow[i] = snowy ? std::clamp(snow_level + rng.normal(0.0, 0.05), 0.0, 1.0) : 0.0;
  }
}

void finish_pressure(Rng& rng, Fields& f) {
  for (int p = 0; p < kPixels; ++p) {
    const auto i = static_cast<std::size_t>(p);
    f.albedo[i] = std::max(0.01, f.albedo[i]);
    f.aot[i] = std::max(0.001, f.aot[i]);
    f.altitude[i] = std::max(0.0, f.altitude[i]);
    f.pressure[i] = 101325.0 * std::exp(-f.altitude[i] / 8434.0) + rng.normal(0.0, 50.0);
  }
}

/// Wind-advected anisotropic Gaussian. Returns the signal grid.
Grid plume_signal(Rng& rng, const GenConfig& cfg, const Fields& f, int& peak_pixel) {
  const double wind_x = f.wind_east[0];
  const double wind_y = f.wind_north[0];
  const double norm = std::hypot(wind_x, wind_y);
  const double ux = norm > 0.0 ? wind_x / norm : 1.0;
  const double uy = norm > 0.0 ? wind_y / norm : 0.0;
  const double src_r = rng.uniform(6.0, 25.0);
  const double src_c = rng.uniform(6.0, 25.0);
  const double sigma_along = rng.uniform(1.5, 4.0);
  const double sigma_cross = rng.uniform(0.7, 1.5);
  const double amplitude = cfg.enhancement_scale_ppb * rng.uniform(0.4, 2.0);
  const double centre_x = src_c + sigma_along * ux;
  const double centre_y = src_r + sigma_along * uy;

  Grid signal{};
  double best = -1.0;
  for (int p = 0; p < kPixels; ++p) {
    const double dx = pixel_col(p) - centre_x;
    const double dy = pixel_row(p) - centre_y;
    const double along = dx * ux + dy * uy;
    const double cross = -dx * uy + dy * ux;
    const double v = amplitude * std::exp(-0.5 * (along * along / (sigma_along * sigma_along) +
                                                  cross * cross / (sigma_cross * sigma_cross)));
    signal[static_cast<std::size_t>(p)] = v;
    if (v > best) {
      best = v;
      peak_pixel = p;
    }
  }
  return signal;
}

/// Reshapes the confounder channel for an artifact scene and returns a
/// pointer to the confounder grid.
Grid* shape_confounder(Rng& rng, ArtifactKind kind, Fields& f) {
  switch (kind) {
    case ArtifactKind::kAlbedoGradient: {
      const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double offset = rng.uniform(-8.0, 8.0);
      const double width = rng.uniform(1.5, 5.0);
      const double lo = rng.uniform(0.05, 0.15);
      const double hi = rng.uniform(0.35, 0.6);
      for (int p = 0; p < kPixels; ++p) {
        const auto i = static_cast<std::size_t>(p);
        if (f.surface[i] == 1.0) continue;
        f.albedo[i] = lo + (hi - lo) * sigmoid((projection(p, theta) - offset) / width) + rng.normal(0.0, 0.01);
      }
      return &f.albedo;
    }
    case ArtifactKind::kCoastline: {
      add_coastline(rng, f, rng.uniform(0.0, 2.0 * std::numbers::pi), rng.uniform(-6.0, 6.0));
      for (int p = 0; p < kPixels; ++p) {
        const auto i = static_cast<std::size_t>(p);
        if (f.surface[i] == 1.0) {
          f.albedo[i] = 0.03 + rng.normal(0.0, 0.003);
          f.altitude[i] = 0.0;
        }
      }
      return &f.surface;
    }
    case ArtifactKind::kAerosolBlob: {
      const double cr = rng.uniform(5.0, 26.0);
      const double cc = rng.uniform(5.0, 26.0);
      const double sigma = rng.uniform(2.5, 5.0);
      const double amp = rng.uniform(0.3, 1.0);
      for (int p = 0; p < kPixels; ++p) {
        const double dr = pixel_row(p) - cr;
        const double dc = pixel_col(p) - cc;
        f.aot[static_cast<std::size_t>(p)] += amp * std::exp(-0.5 * (dr * dr + dc * dc) / (sigma * sigma));
      }
      return &f.aot;
    }
    case ArtifactKind::kElevationGradient: {
      const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double offset = rng.uniform(-8.0, 8.0);
      const double width = rng.uniform(2.0, 6.0);
      const double height = rng.uniform(1500.0, 3000.0);
      const double base = rng.uniform(0.0, 800.0);
      for (int p = 0; p < kPixels; ++p) {
        const auto i = static_cast<std::size_t>(p);
        if (f.surface[i] == 1.0) continue;
        f.altitude[i] = base + height * sigmoid((projection(p, theta) - offset) / width) + rng.normal(0.0, 10.0);
      }
      return &f.altitude;
    }
  }
  return &f.albedo;
}

ArtifactKind draw_kind(Rng& rng, const GenConfig& cfg) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (int k = 0; k < kArtifactKindCount; ++k) {
    acc += cfg.artifact_mix[static_cast<std::size_t>(k)];
    if (u < acc) return static_cast<ArtifactKind>(k);
  }
  for (int k = kArtifactKindCount - 1; k >= 0; --k) {
    if (cfg.artifact_mix[static_cast<std::size_t>(k)] > 0.0) return static_cast<ArtifactKind>(k);
  }
  return ArtifactKind::kAlbedoGradient;
}

std::vector<float> to_channels(const Fields& f) {
  const std::array<const Grid*, kChannelCount> grids = {
      &f.xch4, &f.enhancement, &f.precision, &f.albedo,     &f.aot,        &f.chi2,  &f.altitude, &f.pressure,
      &f.qa,   &f.wind_east,   &f.wind_north, &f.snow,      &f.surface,    &f.plume_mask, &f.cloud,
  };
  std::vector<float> data(static_cast<std::size_t>(kChannelCount) * kPixels);
  for (int c = 0; c < kChannelCount; ++c) {
    const auto ch = static_cast<ChannelId>(c);
    for (int p = 0; p < kPixels; ++p) {
      double v = (*grids[static_cast<std::size_t>(c)])[static_cast<std::size_t>(p)];
      if (!is_context_channel(ch) && !f.valid.test(p)) v = kNaN;
      data[static_cast<std::size_t>(c * kPixels + p)] = static_cast<float>(v);
    }
  }
  return data;
}

std::optional<ScenePatch> try_scene(const GenConfig& cfg, std::size_t index, bool is_plume, std::uint64_t attempt) {
  Rng rng(cfg.seed, (static_cast<std::uint64_t>(index) << 8) | attempt);
  Fields f;
  base_fields(rng, cfg, f);

  bool plume_physics = is_plume;
  if (cfg.scenario == Scenario::kScoreOnly) plume_physics = rng.bernoulli(0.5);
  const ArtifactKind kind = draw_kind(rng, cfg);

  Grid signal{};
  Grid* confounder = nullptr;
  if (plume_physics) {
    // Some real plumes sit over a surface feature that also biases the
    // retrieval a little.
    Grid* bias_source = rng.bernoulli(kBiasedPlumeFraction) ? shape_confounder(rng, kind, f) : nullptr;
    int peak = 0;
    finish_pressure(rng, f);
    signal = plume_signal(rng, cfg, f, peak);
    f.valid.set(peak, true);
    Grid z{};
    if (bias_source != nullptr && standardise(*bias_source, f.valid, z)) {
      const double beta = cfg.enhancement_scale_ppb * rng.uniform(0.1, 0.35);
      const double chi_gain = rng.uniform(0.0, 0.15);
      for (int p = 0; p < kPixels; ++p) {
        const auto i = static_cast<std::size_t>(p);
        signal[i] += beta * z[i];
        f.chi2[i] += chi_gain * std::max(0.0, z[i]);
      }
    }
  } else {
    confounder = shape_confounder(rng, kind, f);
    finish_pressure(rng, f);
    // Fit quality degrades where the confounder is strong.
    Grid z{};
    if (!standardise(*confounder, f.valid, z)) return std::nullopt;
    const double chi_gain = rng.uniform(0.0, 0.25);
    for (int p = 0; p < kPixels; ++p) {
      f.chi2[static_cast<std::size_t>(p)] += chi_gain * std::max(0.0, z[static_cast<std::size_t>(p)]);
    }
    const double beta = cfg.enhancement_scale_ppb * rng.uniform(0.2, 0.9);
    for (int p = 0; p < kPixels; ++p) signal[static_cast<std::size_t>(p)] = beta * z[static_cast<std::size_t>(p)];
  }

  // Scene-level noise and a smooth background ramp unrelated to the label.
  const double noise_sd = cfg.noise_ppb * rng.uniform(0.6, 1.6);
  const double ramp_theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double ramp = cfg.enhancement_scale_ppb * rng.uniform(0.0, 0.02);
  Grid noise{};
  for (int p = 0; p < kPixels; ++p) {
    noise[static_cast<std::size_t>(p)] = rng.normal(0.0, noise_sd) + ramp * projection(p, ramp_theta);
  }
  const double background = rng.uniform(1820.0, 1920.0);
  const double score = is_plume ? rng.uniform(0.5, 1.0) : rng.uniform(0.2, 0.9);

  // Artifact scenes must keep a clear enhancement/confounder correlation;
  // strengthen the signal until the stored float32 fields show it.
  for (int boost = 0;; ++boost) {
    for (int p = 0; p < kPixels; ++p) {
      const auto i = static_cast<std::size_t>(p);
      f.enhancement[i] = signal[i] + noise[i];
      f.xch4[i] = background + f.enhancement[i];
    }
    if (confounder == nullptr) break;
    std::array<float, kPixels> e32{};
    std::array<float, kPixels> c32{};
    for (int p = 0; p < kPixels; ++p) {
      e32[static_cast<std::size_t>(p)] = static_cast<float>(f.enhancement[static_cast<std::size_t>(p)]);
      c32[static_cast<std::size_t>(p)] = static_cast<float>((*confounder)[static_cast<std::size_t>(p)]);
    }
    const Stat r = masked_pearson(Field(e32), Field(c32), f.valid);
    if (!r.degenerate && std::abs(r.value) >= kMinArtifactCorrelation) break;
    if (boost >= 8) return std::nullopt;
    for (auto& s : signal) s *= 2.0;
  }

  double peak_signal = -std::numeric_limits<double>::infinity();
  f.valid.for_each([&](int p) { peak_signal = std::max(peak_signal, signal[static_cast<std::size_t>(p)]); });
  if (!(peak_signal > 0.0)) return std::nullopt;
  const float score32 = static_cast<float>(score);
  f.plume_mask.fill(0.0);
  f.valid.for_each([&](int p) {
    if (signal[static_cast<std::size_t>(p)] > 0.5 * peak_signal) f.plume_mask[static_cast<std::size_t>(p)] = score32;
  });

  Meta meta;
  meta["physics"] = plume_physics ? "plume" : std::string(artifact_kind_name(kind));
  if (!plume_physics) meta["confounder"] = std::string(channel_name(confounder_channel(kind)));
  meta["scene_index"] = std::to_string(index);
  meta["seed"] = std::to_string(cfg.seed);
  const std::string id = "s" + std::to_string(cfg.seed) + "-" + std::to_string(index);
  return ScenePatch(id, is_plume ? Label::kPlume : Label::kArtifact, to_channels(f), f.valid, cfg.pixel_area_km2,
                    std::move(meta));
}

}  // namespace

std::string_view artifact_kind_name(ArtifactKind kind) {
  switch (kind) {
    case ArtifactKind::kAlbedoGradient: return "albedo_gradient";
    case ArtifactKind::kCoastline: return "coastline";
    case ArtifactKind::kAerosolBlob: return "aerosol_blob";
    case ArtifactKind::kElevationGradient: return "elevation_gradient";
  }
  return "albedo_gradient";
}

ChannelId confounder_channel(ArtifactKind kind) {
  switch (kind) {
    case ArtifactKind::kAlbedoGradient: return ChannelId::kAlbedoSwir;
    case ArtifactKind::kCoastline: return ChannelId::kSurfaceClass;
    case ArtifactKind::kAerosolBlob: return ChannelId::kAotSwir;
    case ArtifactKind::kElevationGradient: return ChannelId::kSurfaceAltitude;
  }
  return ChannelId::kAlbedoSwir;
}

void GenConfig::validate() const {
  if (!(plume_fraction >= 0.0 && plume_fraction <= 1.0)) throw ConfigError("plume_fraction must lie in [0, 1]");
  double total = 0.0;
  for (double w : artifact_mix) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("artifact_mix weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("artifact_mix weights must sum to 1");
  if (!(enhancement_scale_ppb > 0.0)) throw ConfigError("enhancement_scale_ppb must be positive");
  if (!(noise_ppb >= 0.0)) throw ConfigError("noise_ppb must be nonnegative");
  if (!(wind_speed_lo_mps >= 0.0 && wind_speed_lo_mps <= wind_speed_hi_mps) || !std::isfinite(wind_speed_hi_mps)) {
    throw ConfigError("wind_speed_range_mps must satisfy 0 <= lo <= hi");
  }
  if (!(pixel_area_km2 > 0.0)) throw ConfigError("pixel_area_km2 must be positive");
}

nlohmann::json GenConfig::to_json() const {
  return {
      {"seed", seed},
      {"n_scenes", n_scenes},
      {"plume_fraction", plume_fraction},
      {"artifact_mix",
       {{"albedo_gradient", artifact_mix[0]},
        {"coastline", artifact_mix[1]},
        {"aerosol_blob", artifact_mix[2]},
        {"elevation_gradient", artifact_mix[3]}}},
      {"enhancement_scale_ppb", enhancement_scale_ppb},
      {"noise_ppb", noise_ppb},
      {"wind_speed_range_mps", {wind_speed_lo_mps, wind_speed_hi_mps}},
      {"pixel_area_km2", pixel_area_km2},
      {"scenario", scenario == Scenario::kPhysical ? "physical" : "score_only"},
  };
}

GenConfig GenConfig::from_json(const nlohmann::json& j) {
  GenConfig cfg;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "seed") {
        cfg.seed = value.get<std::uint64_t>();
      } else if (key == "n_scenes") {
        cfg.n_scenes = value.get<std::size_t>();
      } else if (key == "plume_fraction") {
        cfg.plume_fraction = value.get<double>();
      } else if (key == "artifact_mix") {
        cfg.artifact_mix = {0.0, 0.0, 0.0, 0.0};
        for (const auto& [kind, w] : value.items()) {
          bool known = false;
          for (int k = 0; k < kArtifactKindCount; ++k) {
            if (artifact_kind_name(static_cast<ArtifactKind>(k)) == kind) {
              cfg.artifact_mix[static_cast<std::size_t>(k)] = w.get<double>();
              known = true;
            }
          }
          if (!known) throw ConfigError("unknown artifact kind '" + kind + "'");
        }
      } else if (key == "enhancement_scale_ppb") {
        cfg.enhancement_scale_ppb = value.get<double>();
      } else if (key == "noise_ppb") {
        cfg.noise_ppb = value.get<double>();
      } else if (key == "wind_speed_range_mps") {
        const auto range = value.get<std::vector<double>>();
        if (range.size() != 2) throw ConfigError("wind_speed_range_mps must be [lo, hi]");
        cfg.wind_speed_lo_mps = range[0];
        cfg.wind_speed_hi_mps = range[1];
      } else if (key == "pixel_area_km2") {
        cfg.pixel_area_km2 = value.get<double>();
      } else if (key == "scenario") {
        const auto name = value.get<std::string>();
        if (name == "physical") {
          cfg.scenario = Scenario::kPhysical;
        } else if (name == "score_only") {
          cfg.scenario = Scenario::kScoreOnly;
        } else {
          throw ConfigError("unknown scenario '" + name + "'");
        }
      } else {
        throw ConfigError("unknown generator config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("generator config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::size_t plume_count(const GenConfig& config) {
  return static_cast<std::size_t>(std::llround(config.plume_fraction * static_cast<double>(config.n_scenes)));
}

std::vector<ScenePatch> generate(const GenConfig& config) {
  config.validate();
  const std::size_t n = config.n_scenes;
  std::vector<char> is_plume(n, 0);
  std::fill_n(is_plume.begin(), static_cast<std::ptrdiff_t>(plume_count(config)), 1);
  Rng label_rng(config.seed, kLabelStream);
  label_rng.shuffle(is_plume.begin(), is_plume.end());

  std::vector<std::optional<ScenePatch>> scenes(n);
  parallel_for(n, [&](std::size_t i) {
    for (std::uint64_t attempt = 0; attempt < 256 && !scenes[i]; ++attempt) {
      scenes[i] = try_scene(config, i, is_plume[i] != 0, attempt);
    }
    if (!scenes[i]) throw Error("scene " + std::to_string(i) + " could not be generated");
  });
  std::vector<ScenePatch> out;
  out.reserve(n);
  for (auto& s : scenes) out.push_back(std::move(*s));
  return out;
}

}  // namespace plumescreen
