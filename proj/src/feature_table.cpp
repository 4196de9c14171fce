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

#include "plumescreen/feature_table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "plumescreen/error.hpp"
#include "plumescreen/parallel.hpp"

namespace plumescreen {
namespace {

std::vector<std::string_view> split_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw DataError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw DataError("failed writing " + path.string());
}

std::vector<int> FeatureTable::binary_labels() const {
  std::vector<int> y;
  y.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == Label::kUnlabeled) throw DataError("row '" + ids[i] + "' is unlabeled");
    y.push_back(labels[i] == Label::kPlume ? 1 : 0);
  }
  return y;
}

FeatureTable FeatureTable::select(std::span<const std::size_t> rows) const {
  FeatureTable out;
  out.names = names;
  out.X = X.select_rows(rows);
  for (std::size_t r : rows) {
    out.ids.push_back(ids[r]);
    out.labels.push_back(labels[r]);
  }
  return out;
}

ExtractionRun extract_all(const std::vector<ScenePatch>& patches) {
  std::vector<Extraction> results(patches.size());
  parallel_for(patches.size(), [&](std::size_t i) { results[i] = extract(patches[i], derive_masks(patches[i])); });
  ExtractionRun run;
  run.table.names = feature_names();
  run.table.X = Matrix(patches.size(), kFeatureCount);
  for (std::size_t i = 0; i < patches.size(); ++i) {
    run.table.ids.push_back(patches[i].id());
    run.table.labels.push_back(patches[i].label());
    std::copy(results[i].values.begin(), results[i].values.end(), run.table.X.row(i).begin());
    run.degenerate.push_back(std::move(results[i].degenerate));
  }
  return run;
}

std::string format_feature_csv(const FeatureTable& table) {
  std::string out = "id,label";
  for (const auto& name : table.names) out += "," + name;
  out += "\n";
  for (std::size_t r = 0; r < table.size(); ++r) {
    out += table.ids[r];
    out += ",";
    out += label_name(table.labels[r]);
    for (double v : table.X.row(r)) {
      out += ",";
      out += format_double(v);
    }
    out += "\n";
  }
  return out;
}

void write_feature_csv(const FeatureTable& table, const std::filesystem::path& path) {
  write_text_file(path, format_feature_csv(table));
}

FeatureTable parse_feature_csv(const std::string& text) {
  FeatureTable table;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw DataError("feature CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_line(line);
  if (header.size() < 3 || header[0] != "id" || header[1] != "label") {
    throw DataError("feature CSV header must start with id,label followed by feature names");
  }
  for (std::size_t i = 2; i < header.size(); ++i) table.names.emplace_back(header[i]);
  const std::size_t cols = table.names.size();
  table.X = Matrix(0, cols);
  std::vector<double> values(cols);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != cols + 2) {
      throw DataError("feature CSV line " + std::to_string(line_no) + ": expected " + std::to_string(cols + 2) +
                      " cells, got " + std::to_string(cells.size()));
    }
    table.ids.emplace_back(cells[0]);
    table.labels.push_back(label_from_name(cells[1]));
    for (std::size_t c = 0; c < cols; ++c) {
      values[c] = parse_double(cells[c + 2]);
      if (!std::isfinite(values[c])) {
        throw DataError("feature CSV line " + std::to_string(line_no) + ": non-finite value in column " +
                        table.names[c]);
      }
    }
    table.X.append_row(values);
  }
  return table;
}

FeatureTable read_feature_csv(const std::filesystem::path& path) { return parse_feature_csv(read_text_file(path)); }

void write_extraction_log(const ExtractionRun& run, const std::filesystem::path& path) {
  std::string out;
  for (std::size_t i = 0; i < run.table.size(); ++i) {
    out += nlohmann::json{{"id", run.table.ids[i]}, {"degenerate", run.degenerate[i]}}.dump();
    out += "\n";
  }
  write_text_file(path, out);
}

}  // namespace plumescreen
