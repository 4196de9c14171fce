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

#include <filesystem>
#include <string>
#include <vector>

#include "plumescreen/features.hpp"
#include "plumescreen/matrix.hpp"
#include "plumescreen/scene.hpp"

namespace plumescreen {

/// A labelled feature matrix, one row per patch.
struct FeatureTable {
  std::vector<std::string> ids;
  std::vector<Label> labels;
  std::vector<std::string> names;
  Matrix X;

  std::size_t size() const { return ids.size(); }
  /// 1 for plume, 0 for artifact; throws DataError on unlabeled rows.
  std::vector<int> binary_labels() const;
  FeatureTable select(std::span<const std::size_t> rows) const;
};

struct ExtractionRun {
  FeatureTable table;
  /// One entry per patch, parallel to table rows.
  std::vector<std::vector<std::string>> degenerate;
};

/// Derives masks and extracts features for every patch (parallel, ordered).
ExtractionRun extract_all(const std::vector<ScenePatch>& patches);

/// Header "id,label,<41 names>"; values written as shortest round-trip
/// decimal strings so a read reproduces them exactly.
std::string format_feature_csv(const FeatureTable& table);
void write_feature_csv(const FeatureTable& table, const std::filesystem::path& path);
FeatureTable parse_feature_csv(const std::string& text);
FeatureTable read_feature_csv(const std::filesystem::path& path);

/// JSON lines: {"id": ..., "degenerate": [...]} per patch.
void write_extraction_log(const ExtractionRun& run, const std::filesystem::path& path);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);
double parse_double(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace plumescreen
