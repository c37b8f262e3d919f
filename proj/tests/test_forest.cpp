#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"

#include "accentgram/error.hpp"
#include "accentgram/forest.hpp"
#include "accentgram/rng.hpp"
#include "fixtures.hpp"

using namespace accentgram;
using namespace accentgram::ml;

namespace {

std::vector<std::size_t> all_columns(std::size_t p) {
  std::vector<std::size_t> cols(p);
  for (std::size_t j = 0; j < p; ++j) cols[j] = j;
  return cols;
}

double accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
  std::size_t hit = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hit += pred[i] == truth[i];
  return static_cast<double>(hit) / static_cast<double>(pred.size());
}

}  // namespace

TEST_CASE("gini impurity") {
  std::vector<std::size_t> pure{10, 0}, half{5, 5}, three_one{3, 1}, empty{0, 0};
  CHECK(gini(pure) == 0.0);
  CHECK(gini(half) == doctest::Approx(0.5));
  CHECK(gini(three_one) == doctest::Approx(0.375));
  CHECK(gini(empty) == 0.0);
}

TEST_CASE("max_features default") {
  ForestConfig cfg;
  CHECK(cfg.resolved_max_features(13) == 3);
  CHECK(cfg.resolved_max_features(3) == 1);
  CHECK(cfg.resolved_max_features(1) == 1);
  cfg.max_features = 20;
  CHECK_THROWS_AS(cfg.resolved_max_features(13), std::invalid_argument);
}

TEST_CASE("single full tree matches a reference CART") {
  // One tree, no bootstrap, all features: plain CART. Predictions on the
  // odd rows were produced by a straightforward Python CART using the same
  // tie rule (lower feature, then lower threshold); scikit-learn's
  // DecisionTreeClassifier agrees whenever its feature order happens to
  // break ties the same way.
  const std::string want = "00100000000000000010010011110000000100110110101000";
  auto data = fixtures::normal_groups(40, 50, 50, 4, {1.0, 0.5});
  std::vector<std::size_t> even, odd;
  for (std::size_t i = 0; i < data.n(); ++i) (i % 2 ? odd : even).push_back(i);
  auto train = data.subset(even);
  ForestConfig cfg;
  cfg.n_trees = 1;
  cfg.bootstrap = false;
  cfg.max_features = 4;
  auto cols = all_columns(4);
  auto forest = RandomForest::fit(train.x, train.group, 2, cols, cfg);
  CHECK(forest.tree(0).nodes().size() == 25);
  std::string got;
  for (std::size_t i : odd) got += static_cast<char>('0' + forest.predict(data.x.row(i)));
  CHECK(got == want);

  // A fully grown tree fits its own training data.
  CHECK(accuracy(forest.predict(train.x), train.group) == 1.0);
}

TEST_CASE("separable data is classified perfectly") {
  // Group B sits 5 SD away on both features.
  auto data = fixtures::normal_groups(1, 40, 40, 2, {5.0, 5.0});
  std::vector<std::size_t> train_rows, test_rows;
  for (std::size_t i = 0; i < data.n(); ++i) (i % 3 == 0 ? test_rows : train_rows).push_back(i);
  auto train = data.subset(train_rows), test = data.subset(test_rows);
  ForestConfig cfg;
  cfg.n_trees = 100;
  auto cols = all_columns(2);
  auto forest = RandomForest::fit(train.x, train.group, 2, cols, cfg);
  CHECK(accuracy(forest.predict(train.x), train.group) == 1.0);
  CHECK(accuracy(forest.predict(test.x), test.group) == 1.0);
}

TEST_CASE("single-class training data") {
  Matrix x(6, 2);
  for (std::size_t i = 0; i < 6; ++i) {
    x(i, 0) = static_cast<double>(i);
    x(i, 1) = -static_cast<double>(i * i);
  }
  std::vector<int> labels(6, 1);
  ForestConfig cfg;
  cfg.n_trees = 10;
  auto cols = all_columns(2);
  auto forest = RandomForest::fit(x, labels, 2, cols, cfg);
  std::vector<double> probe{100.0, -3.0};
  CHECK(forest.predict(probe) == 1);
  for (int v : forest.predict(x)) CHECK(v == 1);
}

TEST_CASE("results do not depend on the thread count") {
  auto data = fixtures::normal_groups(2, 58, 60, 13, {0.5, 0.5, 0, 0, 0.5});
  auto cols = all_columns(13);
  ForestConfig cfg;
  cfg.n_trees = 200;
  cfg.threads = 1;
  auto one = RandomForest::fit(data.x, data.group, 2, cols, cfg);
  cfg.threads = 8;
  auto eight = RandomForest::fit(data.x, data.group, 2, cols, cfg);
  REQUIRE(one.tree_count() == eight.tree_count());
  for (std::size_t t = 0; t < one.tree_count(); ++t) {
    const auto& a = one.tree(t).nodes();
    const auto& b = eight.tree(t).nodes();
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a[k].feature == b[k].feature);
      CHECK(a[k].threshold == b[k].threshold);
    }
  }
  auto probe = fixtures::normal_groups(99, 30, 30, 13);
  CHECK(one.predict(probe.x) == eight.predict(probe.x));

  // A different seed grows a different forest.
  cfg.seed = 43;
  auto other = RandomForest::fit(data.x, data.group, 2, cols, cfg);
  bool differs = false;
  for (std::size_t t = 0; t < other.tree_count() && !differs; ++t)
    differs = other.tree(t).nodes().size() != one.tree(t).nodes().size() ||
              other.tree(t).nodes()[0].threshold != one.tree(t).nodes()[0].threshold;
  CHECK(differs);
}

TEST_CASE("monotone transforms of a feature do not change predictions") {
  auto data = fixtures::normal_groups(3, 45, 45, 3, {0.8, 0.3});
  auto transformed = data;
  for (std::size_t i = 0; i < data.n(); ++i) transformed.x(i, 1) = std::exp(2.0 * data.x(i, 1)) - 4.0;
  ForestConfig cfg;
  cfg.n_trees = 60;
  auto cols = all_columns(3);
  auto a = RandomForest::fit(data.x, data.group, 2, cols, cfg);
  auto b = RandomForest::fit(transformed.x, transformed.group, 2, cols, cfg);
  // Probe at the training points themselves: no value falls between a
  // midpoint and its transformed image.
  CHECK(a.predict(data.x) == b.predict(transformed.x));
}

TEST_CASE("column subsets and depth limits") {
  auto data = fixtures::normal_groups(4, 40, 40, 6, {0, 0, 0, 0, 3.0});
  std::vector<std::size_t> only{4};
  ForestConfig cfg;
  cfg.n_trees = 20;
  auto forest = RandomForest::fit(data.x, data.group, 2, only, cfg);
  for (std::size_t t = 0; t < forest.tree_count(); ++t)
    for (const auto& node : forest.tree(t).nodes()) CHECK((node.feature == -1 || node.feature == 4));

  cfg.max_depth = 1;
  auto stump = RandomForest::fit(data.x, data.group, 2, only, cfg);
  for (std::size_t t = 0; t < stump.tree_count(); ++t) CHECK(stump.tree(t).nodes().size() <= 3);

  ForestConfig leafy;
  leafy.n_trees = 5;
  leafy.min_samples_leaf = 10;
  auto coarse = RandomForest::fit(data.x, data.group, 2, only, leafy);
  CHECK(coarse.tree(0).nodes().size() < forest.tree(0).nodes().size());

  Matrix empty(0, 6);
  std::vector<int> none;
  CHECK_THROWS_AS(RandomForest::fit(empty, none, 2, only, cfg), InputError);
  std::vector<std::size_t> bad{6};
  CHECK_THROWS_AS(RandomForest::fit(data.x, data.group, 2, bad, cfg), std::invalid_argument);
}
