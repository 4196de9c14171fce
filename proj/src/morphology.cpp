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

#include "plumescreen/morphology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace plumescreen {

Mask dilate(const Mask& mask, int times) {
  Mask current = mask;
  for (int t = 0; t < times; ++t) {
    Mask next;
    current.for_each([&](int p) {
      const int r = pixel_row(p);
      const int c = pixel_col(p);
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          const int rr = r + dr;
          const int cc = c + dc;
          if (rr >= 0 && rr < kSide && cc >= 0 && cc < kSide) next.set(rr, cc);
        }
      }
    });
    if (next == current) break;
    current = next;
  }
  return current;
}

Mask dilation_ring(const Mask& mask) { return dilate(mask, 1) - mask; }

PrincipalAxis principal_axis(const Mask& mask) {
  PrincipalAxis pa;
  pa.count = mask.count();
  if (pa.count == 0) return pa;
  pa.degenerate = false;

  double sx = 0.0;
  double sy = 0.0;
  mask.for_each([&](int p) {
    sx += pixel_col(p);
    sy += pixel_row(p);
  });
  const double n = pa.count;
  pa.centroid_x = sx / n;
  pa.centroid_y = sy / n;

  double cxx = 0.0;
  double cyy = 0.0;
  double cxy = 0.0;
  mask.for_each([&](int p) {
    const double dx = pixel_col(p) - pa.centroid_x;
    const double dy = pixel_row(p) - pa.centroid_y;
    cxx += dx * dx;
    cyy += dy * dy;
    cxy += dx * dy;
  });
  cxx /= n;
  cyy /= n;
  cxy /= n;

  const double half_trace = 0.5 * (cxx + cyy);
  const double radius = std::hypot(0.5 * (cxx - cyy), cxy);
  pa.lambda1 = half_trace + radius;
  pa.lambda2 = std::max(0.0, half_trace - radius);
  pa.isotropic = radius <= 1e-12 * std::max(1.0, half_trace);

  double vx = 1.0;
  double vy = 0.0;
  if (!pa.isotropic) {
    if (cxy == 0.0) {
      vx = cxx >= cyy ? 1.0 : 0.0;
      vy = cxx >= cyy ? 0.0 : 1.0;
    } else if (cxx >= cyy) {
      vx = pa.lambda1 - cyy;
      vy = cxy;
    } else {
      vx = cxy;
      vy = pa.lambda1 - cxx;
    }
    const double norm = std::hypot(vx, vy);
    vx /= norm;
    vy /= norm;
    if (vx < 0.0 || (vx == 0.0 && vy < 0.0)) {
      vx = -vx;
      vy = -vy;
    }
  }
  pa.axis_x = vx;
  pa.axis_y = vy;
  return pa;
}

double elongation_ratio(const PrincipalAxis& pa) {
  if (pa.degenerate) return 0.0;
  constexpr double kUnitSquare = 1.0 / 12.0;
  return (pa.lambda1 + kUnitSquare) / (pa.lambda2 + kUnitSquare);
}

double folded_angle_deg(double ax, double ay, double bx, double by) {
  const double na = std::hypot(ax, ay);
  const double nb = std::hypot(bx, by);
  if (na == 0.0 || nb == 0.0) return 0.0;
  const double cosine = std::clamp(std::abs(ax * bx + ay * by) / (na * nb), 0.0, 1.0);
  return std::acos(cosine) * 180.0 / std::numbers::pi;
}

}  // namespace plumescreen
