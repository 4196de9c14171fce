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

#include "plumescreen/pack.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <json.hpp>

namespace plumescreen {
namespace {

static_assert(std::endian::native == std::endian::little, "pack I/O assumes a little-endian host");

constexpr char kMagic[4] = {'S', 'P', 'K', '1'};
constexpr std::size_t kChannelBytes = kPixels * sizeof(float);

template <typename T>
void put(std::vector<std::uint8_t>& out, T value) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(&value);
  out.insert(out.end(), p, p + sizeof(T));
}

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  const std::uint8_t* take(std::size_t n, const char* what) {
    if (bytes_.size() - pos_ < n) {
      throw PackError(PackError::Kind::kTruncated, std::string("scene pack truncated while reading ") + what +
                                                       " at byte " + std::to_string(pos_));
    }
    const std::uint8_t* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }

  template <typename T>
  T get(const char* what) {
    T value;
    std::memcpy(&value, take(sizeof(T), what), sizeof(T));
    return value;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

nlohmann::json header_json(const ScenePatch& patch) {
  nlohmann::json channels = nlohmann::json::array();
  for (ChannelId ch : all_channels()) channels.push_back(std::string(channel_name(ch)));
  return {
      {"id", patch.id()},
      {"label", std::string(label_name(patch.label()))},
      {"pixel_area_km2", patch.pixel_area_km2()},
      {"channels", channels},
      {"meta", patch.meta()},
  };
}

}  // namespace

std::vector<std::uint8_t> encode_pack(const std::vector<ScenePatch>& patches) {
  std::vector<std::uint8_t> out;
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put<std::uint16_t>(out, kPackVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(patches.size()));
  for (const ScenePatch& patch : patches) {
    const std::string header = header_json(patch).dump();
    put<std::uint32_t>(out, static_cast<std::uint32_t>(header.size()));
    out.insert(out.end(), header.begin(), header.end());
    const auto raw = patch.raw();
    const auto* bytes = reinterpret_cast<const std::uint8_t*>(raw.data());
    out.insert(out.end(), bytes, bytes + raw.size_bytes());
    for (int p = 0; p < kPixels; ++p) out.push_back(patch.valid().test(p) ? 1 : 0);
  }
  return out;
}

std::vector<ScenePatch> decode_pack(const std::vector<std::uint8_t>& bytes) {
  Reader in(bytes);
  // A clean prefix of the magic is reported as truncation below.
  const std::size_t head = std::min(bytes.size(), sizeof(kMagic));
  if (head > 0 && std::memcmp(bytes.data(), kMagic, head) != 0) {
    throw PackError(PackError::Kind::kBadMagic, "not a scene pack (bad magic)");
  }
  in.take(sizeof(kMagic), "magic");
  const auto version = in.get<std::uint16_t>("version");
  if (version != kPackVersion) {
    throw PackError(PackError::Kind::kUnsupportedVersion,
                    "unsupported scene pack version " + std::to_string(version));
  }
  const auto count = in.get<std::uint32_t>("record count");

  std::vector<ScenePatch> patches;
  for (std::uint32_t r = 0; r < count; ++r) {
    const auto header_len = in.get<std::uint32_t>("header length");
    const auto* header_bytes = in.take(header_len, "record header");
    nlohmann::json header;
    try {
      header = nlohmann::json::parse(header_bytes, header_bytes + header_len);
    } catch (const nlohmann::json::exception& e) {
      throw PackError(PackError::Kind::kBadHeader,
                      "record " + std::to_string(r) + ": malformed header JSON: " + e.what());
    }

    std::string id;
    Label label{};
    double area = 0.0;
    Meta meta;
    std::vector<std::string> channels;
    try {
      id = header.at("id").get<std::string>();
      label = label_from_name(header.at("label").get<std::string>());
      area = header.at("pixel_area_km2").get<double>();
      channels = header.at("channels").get<std::vector<std::string>>();
      if (header.contains("meta")) meta = header.at("meta").get<Meta>();
    } catch (const nlohmann::json::exception& e) {
      throw PackError(PackError::Kind::kBadHeader, "record " + std::to_string(r) + ": " + e.what());
    }

    for (const std::string& name : channels) {
      if (!channel_from_name(name)) {
        throw PackError(PackError::Kind::kUnknownChannel,
                        "record " + std::to_string(r) + ": unknown channel '" + name + "'");
      }
    }
    bool registry_order = channels.size() == static_cast<std::size_t>(kChannelCount);
    for (std::size_t i = 0; registry_order && i < channels.size(); ++i) {
      registry_order = channel_from_name(channels[i]) == static_cast<ChannelId>(i);
    }
    const std::size_t payload = channels.size() * kChannelBytes + kPixels;
    if (!registry_order) {
      throw PackError(PackError::Kind::kLengthMismatch,
                      "record " + std::to_string(r) + ": header declares " + std::to_string(channels.size()) +
                          " channels (" + std::to_string(payload) +
                          " payload bytes); a patch needs all 15 in registry order");
    }

    std::vector<float> data(static_cast<std::size_t>(kChannelCount) * kPixels);
    std::memcpy(data.data(), in.take(data.size() * sizeof(float), "channel payload"), data.size() * sizeof(float));
    const auto* valid_bytes = in.take(kPixels, "valid mask");
    Mask valid;
    for (int p = 0; p < kPixels; ++p) {
      if (valid_bytes[p] > 1) {
        throw PackError(PackError::Kind::kLengthMismatch, "record " + std::to_string(r) + ": valid mask byte not 0/1");
      }
      valid.set(p, valid_bytes[p] == 1);
    }
    patches.emplace_back(std::move(id), label, std::move(data), valid, area, std::move(meta));
  }
  if (in.remaining() != 0) {
    throw PackError(PackError::Kind::kLengthMismatch,
                    std::to_string(in.remaining()) + " trailing bytes after " + std::to_string(count) + " records");
  }
  return patches;
}

void write_pack(const std::vector<ScenePatch>& patches, const std::filesystem::path& path) {
  const auto bytes = encode_pack(patches);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("failed writing " + path.string());
}

std::vector<ScenePatch> read_pack(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open scene pack " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_pack(bytes);
}

}  // namespace plumescreen
