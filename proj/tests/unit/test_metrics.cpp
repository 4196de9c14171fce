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

#include <cmath>
#include <limits>

#include "metric_oracle.hpp"
#include "plumescreen/error.hpp"
#include "plumescreen/metrics.hpp"

using namespace plumescreen;
using plumescreen::testing::oracle_ap;
using plumescreen::testing::oracle_auc;

TEST_SUITE("metrics") {
  TEST_CASE("worked example") {
    const std::vector<double> s = {0.9, 0.8, 0.3};
    const std::vector<int> y = {1, 0, 1};
    CHECK(average_precision(s, y) == 5.0 / 6.0);
    CHECK(roc_auc(s, y) == 0.5);
    CHECK(balanced_accuracy(s, y, 0.5) == 0.25);
    CHECK(balanced_accuracy(s, y, 0.2) == 0.5);
    const Metrics m = compute_metrics(s, y, 0.5);
    CHECK(m.ap == 5.0 / 6.0);
    CHECK(m.roc_auc == 0.5);
  }

  TEST_CASE("degenerate rankings") {
    const std::vector<int> y = {1, 0, 0, 1, 0};
    const std::vector<double> tied(5, 0.3);
    CHECK(average_precision(tied, y) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(roc_auc(tied, y) == 0.5);
    const std::vector<double> perfect = {0.9, 0.1, 0.2, 0.8, 0.3};
    CHECK(average_precision(perfect, y) == 1.0);
    CHECK(roc_auc(perfect, y) == 1.0);
    CHECK(balanced_accuracy(perfect, y, 0.5) == 1.0);
    const std::vector<double> reversed = {0.1, 0.9, 0.8, 0.2, 0.7};
    CHECK(roc_auc(reversed, y) == 0.0);
    CHECK(average_precision(reversed, y) == doctest::Approx((1.0 / 4.0 + 2.0 / 5.0) / 2.0));
  }

  TEST_CASE("input validation") {
    const std::vector<double> s = {0.1, 0.2};
    CHECK_THROWS_AS(average_precision({}, {}), DataError);
    CHECK_THROWS_AS(average_precision(s, std::vector<int>{1}), DataError);
    CHECK_THROWS_AS(roc_auc(s, std::vector<int>{1, 1}), DataError);
    CHECK_THROWS_AS(average_precision(s, std::vector<int>{0, 0}), DataError);
    CHECK_THROWS_AS(roc_auc(s, std::vector<int>{1, 2}), DataError);
    CHECK_THROWS_AS(roc_auc(std::vector<double>{0.1, std::nan("")}, std::vector<int>{1, 0}), DataError);
  }

  TEST_CASE("agreement with brute-force definitions") {
    Rng rng(2024);
    for (int t = 0; t < 300; ++t) {
      const auto set = testing::random_scored_set(rng);
      CHECK(std::abs(average_precision(set.scores, set.labels) - oracle_ap(set.scores, set.labels)) <= 1e-12);
      CHECK(std::abs(roc_auc(set.scores, set.labels) - oracle_auc(set.scores, set.labels)) <= 1e-12);
    }
  }

  TEST_CASE("invariance under strictly increasing maps") {
    Rng rng(5);
    for (int t = 0; t < 100; ++t) {
      auto set = testing::random_scored_set(rng);
      std::vector<double> mapped;
      for (double v : set.scores) mapped.push_back(2.0 * v * v * v + v - 7.0);
      CHECK(average_precision(mapped, set.labels) == doctest::Approx(average_precision(set.scores, set.labels)).epsilon(1e-12));
      CHECK(roc_auc(mapped, set.labels) == doctest::Approx(roc_auc(set.scores, set.labels)).epsilon(1e-12));
    }
  }

  TEST_CASE("AUC symmetry") {
    Rng rng(6);
    for (int t = 0; t < 100; ++t) {
      auto set = testing::random_scored_set(rng);
      std::vector<int> flipped;
      for (int v : set.labels) flipped.push_back(1 - v);
      std::vector<double> negated;
      for (double v : set.scores) negated.push_back(-v);
      const double auc = roc_auc(set.scores, set.labels);
      CHECK(roc_auc(set.scores, flipped) == doctest::Approx(1.0 - auc).epsilon(1e-12));
      CHECK(roc_auc(negated, set.labels) == doctest::Approx(1.0 - auc).epsilon(1e-12));
    }
  }

  TEST_CASE("random scores give AP near prevalence") {
    Rng rng(7);
    double total = 0.0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
      std::vector<double> s;
      std::vector<int> y;
      for (int i = 0; i < 200; ++i) {
        s.push_back(rng.uniform());
        y.push_back(i < 60 ? 1 : 0);
      }
      total += average_precision(s, y);
    }
    CHECK(std::abs(total / trials - 0.3) <= 0.03);
  }

  TEST_CASE("curves re-integrate to the scalar metrics") {
    Rng rng(8);
    for (int t = 0; t < 100; ++t) {
      const auto set = testing::random_scored_set(rng);
      const auto pr = pr_curve(set.scores, set.labels);
      const auto roc = roc_curve(set.scores, set.labels);
      CHECK(std::abs(average_precision_from_curve(pr) - average_precision(set.scores, set.labels)) <= 1e-12);
      CHECK(std::abs(roc_auc_from_curve(roc) - roc_auc(set.scores, set.labels)) <= 1e-12);
      REQUIRE_FALSE(roc.empty());
      CHECK(roc.front().fpr == 0.0);
      CHECK(roc.front().tpr == 0.0);
      CHECK(std::isinf(roc.front().threshold));
      CHECK(roc.back().fpr == 1.0);
      CHECK(roc.back().tpr == 1.0);
      CHECK(pr.back().recall == 1.0);
      for (std::size_t i = 1; i < pr.size(); ++i) {
        CHECK(pr[i].threshold < pr[i - 1].threshold);
        CHECK(pr[i].recall >= pr[i - 1].recall);
      }
      for (std::size_t i = 1; i < roc.size(); ++i) {
        CHECK(roc[i].fpr >= roc[i - 1].fpr);
        CHECK(roc[i].tpr >= roc[i - 1].tpr);
      }
    }
  }

  TEST_CASE("curve CSV layout") {
    const std::vector<double> s = {0.9, 0.8, 0.3};
    const std::vector<int> y = {1, 0, 1};
    CHECK(format_pr_csv(pr_curve(s, y)) == "threshold,recall,precision\n0.9,0.5,1\n0.8,0.5,0.5\n0.3,1,0.6666666666666666\n");
    const std::string roc = format_roc_csv(roc_curve(s, y));
    CHECK(roc.rfind("threshold,fpr,tpr\n", 0) == 0);
    CHECK(roc.find("\n0.9,0,0.5\n") != std::string::npos);
  }
}
