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
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "plumescreen/morphology.hpp"
#include "plumescreen/rng.hpp"
#include "plumescreen/stats.hpp"

using namespace plumescreen;

namespace {

Mask naive_dilate(const Mask& m) {
  Mask out;
  for (int r = 0; r < kSide; ++r) {
    for (int c = 0; c < kSide; ++c) {
      bool hit = false;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          const int rr = r + dr, cc = c + dc;
          if (rr >= 0 && rr < kSide && cc >= 0 && cc < kSide && m.test(rr, cc)) hit = true;
        }
      }
      if (hit) out.set(r, c);
    }
  }
  return out;
}

Mask rotate90(const Mask& m) {
  Mask out;
  m.for_each([&](int p) { out.set(pixel_col(p), kSide - 1 - pixel_row(p)); });
  return out;
}

Mask random_mask(Rng& rng, double density) {
  Mask m;
  for (int p = 0; p < kPixels; ++p) {
    if (rng.bernoulli(density)) m.set(p);
  }
  return m;
}

std::array<float, kPixels> random_field(Rng& rng, double mean, double sd) {
  std::array<float, kPixels> a{};
  for (auto& v : a) v = static_cast<float>(rng.normal(mean, sd));
  return a;
}

std::vector<double> pick(const std::array<float, kPixels>& a, const Mask& sel) {
  std::vector<double> out;
  sel.for_each([&](int p) { out.push_back(a[static_cast<std::size_t>(p)]); });
  return out;
}

double naive_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

TEST_SUITE("morphology") {
  TEST_CASE("dilate: identity, centre and corner") {
    Mask centre;
    centre.set(16, 16);
    CHECK(dilate(centre, 0) == centre);
    CHECK(dilate(centre, 1).count() == 9);
    CHECK(dilate(centre, 2).count() == 25);
    Mask corner;
    corner.set(0, 0);
    const Mask d = dilate(corner, 1);
    CHECK(d.count() == 4);
    CHECK(d.test(0, 0));
    CHECK(d.test(0, 1));
    CHECK(d.test(1, 0));
    CHECK(d.test(1, 1));
    CHECK(dilate(Mask::full(), 3) == Mask::full());
    CHECK(dilate(Mask(), 5).empty());
  }

  TEST_CASE("dilate matches a neighbour-enumeration oracle, is monotone and rotation-equivariant") {
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
      const Mask m = random_mask(rng, rng.uniform(0.0, 0.05));
      const Mask d = dilate(m, 1);
      CHECK(d == naive_dilate(m));
      CHECK(m.is_subset_of(d));
      CHECK(dilate(m, 2) == naive_dilate(naive_dilate(m)));
      CHECK(dilate(rotate90(m), 1) == rotate90(d));
      CHECK(dilation_ring(m) == (d - m));
    }
  }

  TEST_CASE("principal axis: square, line and L-shape") {
    Mask square;
    for (int r = 10; r < 13; ++r) {
      for (int c = 10; c < 13; ++c) square.set(r, c);
    }
    const PrincipalAxis sq = principal_axis(square);
    CHECK(sq.isotropic);
    CHECK(sq.lambda1 == doctest::Approx(sq.lambda2));
    CHECK(elongation_ratio(sq) == doctest::Approx(1.0));

    Mask line;
    for (int c = 3; c < 8; ++c) line.set(7, c);
    const PrincipalAxis ln = principal_axis(line);
    CHECK_FALSE(ln.isotropic);
    CHECK(ln.axis_x == doctest::Approx(1.0));
    CHECK(ln.axis_y == doctest::Approx(0.0));
    CHECK(ln.lambda1 == doctest::Approx(2.0));  // population variance of 0..4
    CHECK(ln.lambda2 == doctest::Approx(0.0));
    CHECK(folded_angle_deg(ln.axis_x, ln.axis_y, 1.0, 0.0) == doctest::Approx(0.0));
    CHECK(std::isfinite(elongation_ratio(ln)));

    // L-shape {(0,0),(1,0),(2,0),(0,1),(0,2)} as (x, y) = (col, row).
    Mask ell;
    for (auto [x, y] : {std::pair{0, 0}, {1, 0}, {2, 0}, {0, 1}, {0, 2}}) ell.set(y, x);
    const PrincipalAxis l = principal_axis(ell);
    // Closed-form 2x2 eigen-solve of the population covariance.
    const double mx = 3.0 / 5.0, my = 3.0 / 5.0;
    double sxx = 0, syy = 0, sxy = 0;
    for (auto [x, y] : {std::pair{0, 0}, {1, 0}, {2, 0}, {0, 1}, {0, 2}}) {
      sxx += (x - mx) * (x - mx);
      syy += (y - my) * (y - my);
      sxy += (x - mx) * (y - my);
    }
    sxx /= 5;
    syy /= 5;
    sxy /= 5;
    const double tr = sxx + syy;
    const double disc = std::sqrt((sxx - syy) * (sxx - syy) / 4 + sxy * sxy);
    CHECK(l.lambda1 == doctest::Approx(tr / 2 + disc).epsilon(1e-12));
    CHECK(l.lambda2 == doctest::Approx(tr / 2 - disc).epsilon(1e-12));
    CHECK(l.lambda1 == doctest::Approx(1.0));
    CHECK(l.lambda2 == doctest::Approx(0.28));
    CHECK(l.axis_x == doctest::Approx(std::sqrt(0.5)));
    CHECK(l.axis_y == doctest::Approx(-std::sqrt(0.5)));
    CHECK(l.centroid_x == doctest::Approx(0.6));
  }

  TEST_CASE("principal axis: translation invariance and block-upscaling invariance of elongation") {
    Rng rng(77);
    for (int i = 0; i < 100; ++i) {
      Mask m;
      for (int k = 0; k < 6; ++k) m.set(static_cast<int>(rng.index(8)), static_cast<int>(rng.index(8)));
      Mask shifted, scaled;
      m.for_each([&](int p) {
        shifted.set(pixel_row(p) + 9, pixel_col(p) + 13);
        for (int dr = 0; dr < 3; ++dr) {
          for (int dc = 0; dc < 3; ++dc) scaled.set(3 * pixel_row(p) + dr, 3 * pixel_col(p) + dc);
        }
      });
      const PrincipalAxis a = principal_axis(m);
      const PrincipalAxis b = principal_axis(shifted);
      const PrincipalAxis c = principal_axis(scaled);
      CHECK(b.lambda1 == doctest::Approx(a.lambda1));
      CHECK(b.lambda2 == doctest::Approx(a.lambda2));
      if (!a.isotropic) CHECK(folded_angle_deg(a.axis_x, a.axis_y, b.axis_x, b.axis_y) == doctest::Approx(0.0));
      CHECK(elongation_ratio(c) == doctest::Approx(elongation_ratio(a)).epsilon(1e-9));
    }
  }

  TEST_CASE("folded angle lies in [0, 90]") {
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
      const double a = folded_angle_deg(rng.normal(), rng.normal(), rng.normal(), rng.normal());
      CHECK(a >= 0.0);
      CHECK(a <= 90.0);
    }
    CHECK(folded_angle_deg(1, 0, -1, 0) == doctest::Approx(0.0));
    CHECK(folded_angle_deg(1, 0, 0, 1) == doctest::Approx(90.0));
    CHECK(folded_angle_deg(1, 0, -1, 1) == doctest::Approx(45.0));
  }

  TEST_CASE("empty mask is degenerate") {
    const PrincipalAxis pa = principal_axis(Mask());
    CHECK(pa.degenerate);
    CHECK(elongation_ratio(pa) == 0.0);
  }
}

TEST_SUITE("stats") {
  TEST_CASE("pearson worked examples") {
    std::array<float, kPixels> a{}, b{};
    Mask sel;
    const float xs[] = {1, 2, 3, 4};
    const float ys[] = {1, 2, 2, 4};
    for (int i = 0; i < 4; ++i) {
      a[static_cast<std::size_t>(i)] = xs[i];
      b[static_cast<std::size_t>(i)] = ys[i];
      sel.set(i);
    }
    // Oracle: sxy = 4.5, sxx = 5, syy = 4.75.
    const Stat r = masked_pearson(Field(a), Field(b), sel);
    CHECK_FALSE(r.degenerate);
    CHECK(r.value == doctest::Approx(4.5 / std::sqrt(5.0 * 4.75)).epsilon(1e-12));

    Rng rng(1);
    std::array<float, kPixels> c{}, neg{};
    Mask ten;
    for (int i = 0; i < 10; ++i) {
      c[static_cast<std::size_t>(i)] = static_cast<float>(rng.normal());
      neg[static_cast<std::size_t>(i)] = -c[static_cast<std::size_t>(i)];
      ten.set(i);
    }
    CHECK(masked_pearson(Field(c), Field(c), ten).value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(masked_pearson(Field(c), Field(neg), ten).value == doctest::Approx(-1.0).epsilon(1e-12));
  }

  TEST_CASE("pearson degenerate cases") {
    std::array<float, kPixels> a{}, flat{};
    for (int i = 0; i < kPixels; ++i) a[static_cast<std::size_t>(i)] = static_cast<float>(i);
    flat.fill(1900.0f);
    Mask two;
    two.set(0);
    two.set(1);
    CHECK(masked_pearson(Field(a), Field(a), two).degenerate);
    CHECK(masked_pearson(Field(a), Field(a), two).value == 0.0);
    const Stat s = masked_pearson(Field(a), Field(flat), Mask::full());
    CHECK(s.degenerate);
    CHECK(s.value == 0.0);
  }

  TEST_CASE("pearson matches a two-pass oracle on 1000 random masked fields") {
    Rng rng(99);
    for (int i = 0; i < 1000; ++i) {
      const auto a = random_field(rng, 1880.0, rng.uniform(0.1, 30.0));
      auto b = random_field(rng, 0.2, 0.05);
      const double w = rng.uniform(-1.0, 1.0);
      for (int p = 0; p < kPixels; ++p) b[static_cast<std::size_t>(p)] += static_cast<float>(w * 0.002 * a[static_cast<std::size_t>(p)]);
      Mask sel = random_mask(rng, rng.uniform(0.01, 1.0));
      if (sel.count() < 3) continue;
      const Stat r = masked_pearson(Field(a), Field(b), sel);
      CHECK(std::abs(r.value - naive_pearson(pick(a, sel), pick(b, sel))) <= 1e-9);
      CHECK(r.value >= -1.0);
      CHECK(r.value <= 1.0);
    }
  }

  TEST_CASE("moments match textbook adjusted estimators") {
    Rng rng(4);
    for (int i = 0; i < 300; ++i) {
      auto a = random_field(rng, 1880.0, 15.0);
      for (int p = 0; p < kPixels; p += 7) a[static_cast<std::size_t>(p)] += static_cast<float>(rng.uniform(0.0, 80.0));
      const Mask sel = random_mask(rng, rng.uniform(0.02, 1.0));
      if (sel.count() < 4) continue;
      const auto x = pick(a, sel);
      const double n = static_cast<double>(x.size());
      const double m = std::accumulate(x.begin(), x.end(), 0.0) / n;
      double m2 = 0, m3 = 0, m4 = 0;
      for (double v : x) {
        m2 += std::pow(v - m, 2);
        m3 += std::pow(v - m, 3);
        m4 += std::pow(v - m, 4);
      }
      const double sd = std::sqrt(m2 / (n - 1));
      m2 /= n;
      m3 /= n;
      m4 /= n;
      const double g1 = m3 / std::pow(m2, 1.5);
      const double G1 = g1 * std::sqrt(n * (n - 1)) / (n - 2);
      const double g2 = m4 / (m2 * m2) - 3.0;
      const double G2 = (n - 1) / ((n - 2) * (n - 3)) * ((n + 1) * g2 + 6.0);
      const Moments mo = masked_moments(Field(a), sel);
      CHECK(std::abs(mo.std.value - sd) <= 1e-9 * std::max(1.0, sd));
      CHECK(std::abs(mo.skewness.value - G1) <= 1e-9);
      CHECK(std::abs(mo.kurtosis.value - G2) <= 1e-9);
    }
  }

  TEST_CASE("moments of a constant field are degenerate zeros") {
    std::array<float, kPixels> a{};
    a.fill(1900.0f);
    const Moments mo = masked_moments(Field(a), Mask::full());
    CHECK(mo.std.value == 0.0);
    CHECK(mo.skewness.value == 0.0);
    CHECK(mo.kurtosis.value == 0.0);
    CHECK(mo.skewness.degenerate);
    CHECK(mo.kurtosis.degenerate);
  }

  TEST_CASE("median, mean and sum") {
    std::array<float, kPixels> a{};
    Mask sel;
    const float vals[] = {1900, 1910, 1900, 1900};
    for (int i = 0; i < 4; ++i) {
      a[static_cast<std::size_t>(i)] = vals[i];
      sel.set(i);
    }
    CHECK(masked_median(Field(a), sel).value == 1900.0);
    sel.set(4);
    a[4] = 1950.0f;
    CHECK(masked_median(Field(a), sel).value == 1900.0);
    CHECK(masked_mean(Field(a), sel) == doctest::Approx((1900 * 3 + 1910 + 1950) / 5.0));
    CHECK(masked_sum(Field(a), sel) == doctest::Approx(1900 * 3 + 1910 + 1950));
    CHECK(masked_median(Field(a), Mask()).degenerate);
    CHECK(masked_mean(Field(a), Mask()) == 0.0);
    Mask even;
    even.set(0);
    even.set(1);
    CHECK(masked_median(Field(a), even).value == 1905.0);
  }
}
