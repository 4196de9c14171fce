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

#include "plumescreen/grid.hpp"

namespace plumescreen {

/// Binary dilation with the 3x3 full (8-connected) structuring element,
/// applied `times` times and clipped at the grid edge.
Mask dilate(const Mask& mask, int times);

/// The ring added by one dilation: dilate(mask, 1) minus mask.
Mask dilation_ring(const Mask& mask);

/// Second moments of a pixel set, using pixel-centre coordinates
/// x = column (east), y = row (north).
struct PrincipalAxis {
  double axis_x = 1.0;  ///< unit eigenvector of lambda1, canonical sign
  double axis_y = 0.0;
  double lambda1 = 0.0;  ///< population covariance eigenvalues, lambda1 >= lambda2 >= 0
  double lambda2 = 0.0;
  double centroid_x = 0.0;
  double centroid_y = 0.0;
  int count = 0;
  bool degenerate = true;  ///< empty mask
  /// True when lambda1 == lambda2 (within rounding); the axis direction is
  /// then arbitrary and the canonical (1, 0) is reported.
  bool isotropic = true;
};

PrincipalAxis principal_axis(const Mask& mask);

/// Variance ratio along the primary and secondary axis of the pixel set
/// viewed as a union of unit squares (each eigenvalue gains 1/12, the
/// second moment of a unit square). Finite for any non-empty mask and
/// exactly invariant under k x k block upscaling. Returns 0 for empty masks.
double elongation_ratio(const PrincipalAxis& pa);

/// Angle between two undirected orientations, folded into [0, 90] degrees.
double folded_angle_deg(double ax, double ay, double bx, double by);

}  // namespace plumescreen
