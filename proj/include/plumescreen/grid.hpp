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

#include <bitset>
#include <cstddef>

namespace plumescreen {

inline constexpr int kSide = 32;
inline constexpr int kPixels = kSide * kSide;

/// Row-major pixel index. Rows grow northward, columns grow eastward, so the
/// pixel centre (col, row) is a right-handed (east, north) coordinate.
constexpr int pixel_index(int row, int col) { return row * kSide + col; }
constexpr int pixel_row(int index) { return index / kSide; }
constexpr int pixel_col(int index) { return index % kSide; }

/// Boolean 32x32 pixel set.
class Mask {
 public:
  Mask() = default;

  bool test(int index) const { return bits_.test(static_cast<std::size_t>(index)); }
  bool test(int row, int col) const { return test(pixel_index(row, col)); }
  void set(int index, bool value = true) { bits_.set(static_cast<std::size_t>(index), value); }
  void set(int row, int col, bool value = true) { set(pixel_index(row, col), value); }

  int count() const { return static_cast<int>(bits_.count()); }
  bool empty() const { return bits_.none(); }
  bool is_subset_of(const Mask& other) const { return (bits_ & ~other.bits_).none(); }

  static Mask full() {
    Mask m;
    m.bits_.set();
    return m;
  }

  Mask operator&(const Mask& o) const { return Mask(bits_ & o.bits_); }
  Mask operator|(const Mask& o) const { return Mask(bits_ | o.bits_); }
  Mask operator~() const { return Mask(~bits_); }
  /// Set difference.
  Mask operator-(const Mask& o) const { return Mask(bits_ & ~o.bits_); }
  Mask& operator|=(const Mask& o) {
    bits_ |= o.bits_;
    return *this;
  }
  Mask& operator&=(const Mask& o) {
    bits_ &= o.bits_;
    return *this;
  }
  bool operator==(const Mask& o) const = default;

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (int i = 0; i < kPixels; ++i) {
      if (bits_.test(static_cast<std::size_t>(i))) fn(i);
    }
  }

 private:
  explicit Mask(std::bitset<kPixels> bits) : bits_(bits) {}
  std::bitset<kPixels> bits_;
};

}  // namespace plumescreen
