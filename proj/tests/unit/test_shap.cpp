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
#include <numeric>

#include "plumescreen/error.hpp"
#include "plumescreen/shap.hpp"
#include "shap_oracle.hpp"

using namespace plumescreen;

namespace {

struct Data {
  Matrix X;
  std::vector<int> y;
};

Data blobs(std::uint64_t seed, std::size_t n, std::size_t d) {
  Rng rng(seed);
  Data out{Matrix(n, d), std::vector<int>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    out.y[i] = i % 3 == 0 ? 1 : 0;
    for (std::size_t k = 0; k < d; ++k) out.X(i, k) = rng.normal(out.y[i] ? 0.4 * static_cast<double>(k) : 0.0, 1.0);
  }
  return out;
}

double phi_sum(const Attribution& a) { return std::accumulate(a.phi.begin(), a.phi.end(), 0.0); }

}  // namespace

TEST_SUITE("shap") {
  TEST_CASE("single leaf attributes nothing") {
    Tree t;
    t.nodes.push_back(TreeNode{-1, 0.0, -1, -1, 0.37, 10.0, 0.0});
    const std::vector<double> x = {1.0, 2.0};
    const Attribution a = tree_shap(t, x, 2);
    CHECK(a.phi == std::vector<double>{0.0, 0.0});
    CHECK(a.base_value == doctest::Approx(0.37));
    CHECK(a.output == doctest::Approx(0.37));
  }

  TEST_CASE("stump puts the whole deviation on its feature") {
    Tree t;
    t.nodes.push_back(TreeNode{1, 0.5, 1, 2, 0.0, 4.0, 0.0});
    t.nodes.push_back(TreeNode{-1, 0.0, -1, -1, 1.0, 3.0, 0.0});
    t.nodes.push_back(TreeNode{-1, 0.0, -1, -1, 5.0, 1.0, 0.0});
    const std::vector<double> x = {9.0, 0.7, -3.0};
    const Attribution a = tree_shap(t, x, 3);
    CHECK(a.base_value == doctest::Approx(2.0));
    CHECK(a.output == 5.0);
    CHECK(a.phi[0] == 0.0);
    CHECK(a.phi[1] == doctest::Approx(3.0));
    CHECK(a.phi[2] == 0.0);
  }

  TEST_CASE("matches exhaustive Shapley values on random trees") {
    Rng rng(99);
    for (int t = 0; t < 60; ++t) {
      const std::size_t nf = 3 + rng.index(12);
      const Tree tree = testing::random_tree(rng, 4, nf, 10);
      for (int i = 0; i < 20; ++i) {
        const auto x = testing::random_input(rng, nf);
        const Attribution a = tree_shap(tree, x, nf);
        const auto want = testing::oracle_shapley(tree, x, nf);
        for (std::size_t j = 0; j < nf; ++j) CHECK(std::abs(a.phi[j] - want[j]) <= 1e-9);
        CHECK(std::abs(a.base_value + phi_sum(a) - tree.predict(x)) <= 1e-9);
      }
    }
  }

  TEST_CASE("symmetric features share credit") {
    // f(x) = 1 when both x0 and x1 exceed 0, with balanced covers.
    Tree t;
    t.nodes.push_back(TreeNode{0, 0.0, 1, 2, 0.0, 4.0, 0.0});
    t.nodes.push_back(TreeNode{-1, 0.0, -1, -1, 0.0, 2.0, 0.0});
    t.nodes.push_back(TreeNode{1, 0.0, 3, 4, 0.0, 2.0, 0.0});
    t.nodes.push_back(TreeNode{-1, 0.0, -1, -1, 0.0, 1.0, 0.0});
    t.nodes.push_back(TreeNode{-1, 0.0, -1, -1, 1.0, 1.0, 0.0});
    const std::vector<double> x = {1.0, 1.0};
    const Attribution a = tree_shap(t, x, 2);
    CHECK(a.phi[0] == doctest::Approx(a.phi[1]));
    CHECK(a.phi[0] + a.phi[1] == doctest::Approx(0.75));
  }

  TEST_CASE("local accuracy on trained tree ensembles") {
    const Data d = blobs(3, 240, 6);
    ForestParams fp;
    fp.n_estimators = 30;
    BoostedParams bp;
    bp.n_estimators = 60;
    bp.learning_rate = 0.1;
    for (const Hyperparams& hp : {Hyperparams(fp), Hyperparams(bp)}) {
      const TrainedModel m = train(d.X, d.y, hp, 5);
      const auto all = explain_all(m, d.X);
      REQUIRE(all.size() == d.X.rows());
      for (std::size_t r = 0; r < d.X.rows(); ++r) {
        CHECK(std::abs(all[r].base_value + phi_sum(all[r]) - m.raw_output(d.X.row(r))) <= 1e-6);
        CHECK(all[r].output == doctest::Approx(m.raw_output(d.X.row(r))));
      }
      // Unused features are dummies.
      for (std::size_t f = 0; f < d.X.cols(); ++f) {
        bool used = false;
        for (const Tree& t : m.trees) {
          for (const TreeNode& n : t.nodes) used = used || n.feature == static_cast<int>(f);
        }
        if (!used) {
          for (const auto& a : all) CHECK(a.phi[f] == 0.0);
        }
      }
    }
  }

  TEST_CASE("svc models are rejected") {
    const Data d = blobs(4, 40, 2);
    const TrainedModel m = train(d.X, d.y, SvcParams{}, 1);
    CHECK_THROWS_AS(explain(m, d.X.row(0)), ConfigError);
  }

  TEST_CASE("summary statistics and ranking") {
    std::vector<Attribution> attrs(2);
    attrs[0].phi = {1.0, 0.0};
    attrs[1].phi = {-1.0, 0.5};
    const ShapSummary s = summarize(attrs, {"a", "b"});
    CHECK(s.mean_abs == std::vector<double>{1.0, 0.25});
    CHECK(s.mean_positive == std::vector<double>{0.5, 0.25});
    CHECK(s.mean_negative == std::vector<double>{-0.5, 0.0});
    CHECK(s.ranking == std::vector<std::size_t>{0, 1});
    CHECK(s.rank_of("a") == 1);
    CHECK(s.rank_of("b") == 2);
    CHECK(s.rank_of("zzz") == 0);

    std::vector<Attribution> tied(1);
    tied[0].phi = {0.5, -0.5, 0.7};
    CHECK(summarize(tied, {"x", "y", "z"}).ranking == std::vector<std::size_t>{2, 0, 1});

    const std::string csv = format_summary_csv(s);
    CHECK(csv == "rank,feature,mean_abs_shap,mean_positive_shap,mean_negative_shap\n1,a,1,0.5,-0.5\n2,b,0.25,0.25,0\n");
  }

  TEST_CASE("attribution CSVs") {
    std::vector<Attribution> attrs(1);
    attrs[0].phi = {0.25, -1.0};
    attrs[0].base_value = 0.5;
    const std::vector<std::string> ids = {"s0"};
    CHECK(format_attribution_csv(ids, {"a", "b"}, attrs) == "id,base_value,a,b\ns0,0.5,0.25,-1\n");
    Matrix X(1, 2);
    X(0, 0) = 3.0;
    X(0, 1) = 4.0;
    CHECK(format_beeswarm_csv(ids, {"a", "b"}, attrs, X) == "id,feature,phi,feature_value\ns0,a,0.25,3\ns0,b,-1,4\n");
  }
}
