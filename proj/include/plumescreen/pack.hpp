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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "plumescreen/error.hpp"
#include "plumescreen/scene.hpp"

namespace plumescreen {

/// Scene pack layout (all integers little-endian):
///   "SPK1" | u16 version | u32 record count
///   per record: u32 header length | UTF-8 JSON header
///               | 15 x 4096 bytes float32 row-major channels (registry order)
///               | 1024 bytes valid mask (0/1)
inline constexpr std::uint16_t kPackVersion = 1;

class PackError : public DataError {
 public:
  enum class Kind { kBadMagic, kUnsupportedVersion, kTruncated, kBadHeader, kUnknownChannel, kLengthMismatch };

  PackError(Kind kind, const std::string& what) : DataError(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

std::vector<std::uint8_t> encode_pack(const std::vector<ScenePatch>& patches);
std::vector<ScenePatch> decode_pack(const std::vector<std::uint8_t>& bytes);

void write_pack(const std::vector<ScenePatch>& patches, const std::filesystem::path& path);
std::vector<ScenePatch> read_pack(const std::filesystem::path& path);

}  // namespace plumescreen
