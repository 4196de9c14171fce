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

#include <span>
#include <vector>

namespace plumescreen {

/// Binary decision tree node. Internal nodes route x[feature] <= threshold
/// to `left`, everything else to `right`.
struct TreeNode {
  int feature = -1;  ///< -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;      ///< leaf output (also recorded on internal nodes)
  double n_samples = 0.0;  ///< training samples reaching the node (cover)
  double gain = 0.0;       ///< split gain of an internal node

  bool is_leaf() const { return feature < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;  ///< nodes[0] is the root

  int leaf_index(std::span<const double> x) const;
  double predict(std::span<const double> x) const { return nodes[static_cast<std::size_t>(leaf_index(x))].value; }
  /// Cover-weighted mean leaf value (the tree's expected output).
  double expected_value() const;
  int depth() const;
  int leaf_count() const;
};

}  // namespace plumescreen
