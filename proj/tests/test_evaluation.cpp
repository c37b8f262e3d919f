#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"

#include "accentgram/error.hpp"
#include "accentgram/evaluation.hpp"
#include "accentgram/rng.hpp"
#include "fixtures.hpp"

using namespace accentgram;
using namespace accentgram::ml;

TEST_CASE("stratified split") {
  auto data = fixtures::normal_groups(1, 58, 60, 3);
  auto s = stratified_split(data, SplitPlan{0.30, 42});
  CHECK(s.test.size() == 35);
  CHECK(s.train.size() == 83);
  std::size_t test_a = 0;
  for (std::size_t i : s.test) test_a += data.group[i] == 0;
  CHECK(test_a == 17);
  CHECK(s.test.size() - test_a == 18);

  std::set<std::size_t> seen(s.train.begin(), s.train.end());
  for (std::size_t i : s.test) CHECK(seen.insert(i).second);
  CHECK(seen.size() == data.n());
  CHECK(std::is_sorted(s.train.begin(), s.train.end()));
  CHECK(std::is_sorted(s.test.begin(), s.test.end()));

  auto again = stratified_split(data, SplitPlan{0.30, 42});
  CHECK(again.test == s.test);
  auto other = stratified_split(data, SplitPlan{0.30, 7});
  CHECK(other.test != s.test);

  CHECK_THROWS_AS(stratified_split(data, SplitPlan{0.0, 1}), InputError);
  CHECK_THROWS_AS(stratified_split(data, SplitPlan{1.0, 1}), InputError);
  auto tiny = fixtures::normal_groups(1, 3, 10, 2);
  CHECK_THROWS_AS(stratified_split(tiny, SplitPlan{0.30, 1}), InputError);
}

TEST_CASE("Wilson interval") {
  // statsmodels proportion_confint(method="wilson")
  auto a = wilson_ci(27, 36);
  CHECK(a.low == doctest::Approx(0.5892954623327165).epsilon(1e-10));
  CHECK(a.high == doctest::Approx(0.8624952233700518).epsilon(1e-10));
  auto b = wilson_ci(19, 36);
  CHECK(b.low == doctest::Approx(0.37005938022987594).epsilon(1e-10));
  CHECK(b.high == doctest::Approx(0.6801395848482095).epsilon(1e-10));
  auto z = wilson_ci(0, 10);
  CHECK(z.low == 0.0);
  CHECK(z.high == doctest::Approx(0.27753279986288926).epsilon(1e-10));
  auto f = wilson_ci(10, 10);
  CHECK(f.low == doctest::Approx(0.7224672001371106).epsilon(1e-10));
  CHECK(f.high == 1.0);
  auto c = wilson_ci(7, 35);
  CHECK(c.low == doctest::Approx(0.10042446473798627).epsilon(1e-10));
  CHECK(c.high == doctest::Approx(0.35891613065665623).epsilon(1e-10));

  CHECK_THROWS_AS(wilson_ci(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(wilson_ci(5, 4), std::invalid_argument);

  // Contains p̂ and narrows as n grows at fixed p̂.
  for (std::size_t n = 4; n <= 400; n += 4) {
    auto ci = wilson_ci(n / 4, n);
    CHECK(ci.low <= 0.25);
    CHECK(ci.high >= 0.25);
    if (n > 4) {
      auto prev = wilson_ci((n - 4) / 4, n - 4);
      CHECK(ci.high - ci.low < prev.high - prev.low);
    }
  }
}

TEST_CASE("McNemar") {
  auto make = [](std::size_t b, std::size_t c, std::size_t both) {
    std::vector<int> truth, pa, pb;
    for (std::size_t i = 0; i < b; ++i) truth.push_back(0), pa.push_back(0), pb.push_back(1);
    for (std::size_t i = 0; i < c; ++i) truth.push_back(1), pa.push_back(0), pb.push_back(1);
    for (std::size_t i = 0; i < both; ++i) truth.push_back(1), pa.push_back(1), pb.push_back(1);
    return std::array<std::vector<int>, 3>{pa, pb, truth};
  };
  auto [a0, b0, t0] = make(0, 0, 5);
  auto none = mcnemar(a0, b0, t0);
  CHECK(none.p == 1.0);
  CHECK(none.b == 0);
  CHECK(none.c == 0);

  // statsmodels mcnemar(exact=True) / mcnemar(exact=False, correction=True)
  auto [a1, b1, t1] = make(10, 2, 3);
  auto small = mcnemar(a1, b1, t1);
  CHECK(small.b == 10);
  CHECK(small.c == 2);
  CHECK(small.method == McNemarMethod::exact_binomial);
  CHECK(small.p == doctest::Approx(0.03857421875).epsilon(1e-12));

  auto [a2, b2, t2] = make(30, 12, 0);
  auto large = mcnemar(a2, b2, t2);
  CHECK(large.method == McNemarMethod::chi2_corrected);
  CHECK(large.chi2 == doctest::Approx(6.880952380952381).epsilon(1e-12));
  CHECK(large.p == doctest::Approx(0.008711912962379598).epsilon(1e-9));

  auto [a3, b3, t3] = make(3, 9, 1);
  CHECK(mcnemar(a3, b3, t3).p == doctest::Approx(0.14599609375).epsilon(1e-12));

  // Swapping the models swaps b and c and keeps p.
  auto swapped = mcnemar(b2, a2, t2);
  CHECK(swapped.b == 12);
  CHECK(swapped.c == 30);
  CHECK(swapped.p == large.p);

  std::vector<int> shorter(2, 0);
  CHECK_THROWS_AS(mcnemar(a1, shorter, t1), std::invalid_argument);
}

TEST_CASE("feature set resolution") {
  std::vector<std::size_t> reduced{1, 2, 5};
  CHECK(resolve_feature_set(reduced, 13) == std::vector<std::size_t>{0, 1, 4});
  std::vector<std::size_t> zero{0}, high{14}, dup{2, 2};
  CHECK_THROWS_AS(resolve_feature_set(zero, 13), InputError);
  CHECK_THROWS_AS(resolve_feature_set(high, 13), InputError);
  CHECK_THROWS_AS(resolve_feature_set(dup, 13), InputError);
}

TEST_CASE("model comparison") {
  auto data = fixtures::normal_groups(5, 58, 60, 13, {0.8, 0.8, 0, 0, 0.8});
  std::vector<std::size_t> full{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13}, reduced{1, 2, 5};
  ForestConfig cfg;
  cfg.n_trees = 100;
  auto cmp = compare_models(data, full, reduced, cfg, SplitPlan{0.30, 42});
  CHECK(cmp.truth.size() == 35);
  CHECK(cmp.full.n_test == 35);
  CHECK(cmp.full.predictions.size() == 35);
  CHECK(cmp.full.accuracy == doctest::Approx(static_cast<double>(cmp.full.correct) / 35.0));
  CHECK(cmp.full.ci.low <= cmp.full.accuracy);
  CHECK(cmp.full.ci.high >= cmp.full.accuracy);
  CHECK(cmp.reduced.feature_set == reduced);
  std::size_t b = 0, c = 0;
  for (std::size_t i = 0; i < 35; ++i) {
    const bool fa = cmp.full.predictions[i] == cmp.truth[i], ra = cmp.reduced.predictions[i] == cmp.truth[i];
    b += fa && !ra;
    c += !fa && ra;
  }
  CHECK(cmp.mcnemar.b == b);
  CHECK(cmp.mcnemar.c == c);

  // Same feature set twice: the two forests are identical.
  auto same = compare_models(data, reduced, reduced, cfg, SplitPlan{0.30, 42});
  CHECK(same.mcnemar.b == 0);
  CHECK(same.mcnemar.c == 0);
  CHECK(same.mcnemar.p == 1.0);

  cfg.threads = 1;
  auto serial = compare_models(data, full, reduced, cfg, SplitPlan{0.30, 42});
  CHECK(serial.full.predictions == cmp.full.predictions);
  CHECK(serial.reduced.predictions == cmp.reduced.predictions);
}

TEST_CASE("repeated comparison") {
  auto data = fixtures::normal_groups(6, 40, 40, 5, {0.8});
  std::vector<std::size_t> full{1, 2, 3, 4, 5}, reduced{1};
  ForestConfig cfg;
  cfg.n_trees = 30;
  auto rep = compare_models_repeated(data, full, reduced, cfg, SplitPlan{0.30, 10}, 4);
  CHECK(rep.seeds == std::vector<std::uint64_t>{10, 11, 12, 13});
  REQUIRE(rep.full_accuracy.size() == 4);
  double mean = 0.0;
  for (double a : rep.full_accuracy) mean += a / 4.0;
  CHECK(rep.full_mean == doctest::Approx(mean));
  CHECK(rep.full_sd >= 0.0);

  ForestConfig first = cfg;
  first.seed = 12;
  auto third = compare_models(data, full, reduced, first, SplitPlan{0.30, 12});
  CHECK(rep.reduced_accuracy[2] == third.reduced.accuracy);
}

TEST_CASE("label permutation gives chance accuracy") {
  std::vector<std::size_t> full{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13}, reduced{1, 2, 5};
  int in_band = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto data = fixtures::normal_groups(seed, 58, 60, 13, {0.8, 0.8, 0, 0, 0.8});
    Rng rng(1000 + seed);
    rng.shuffle(std::span<int>(data.group));
    ForestConfig cfg;
    cfg.n_trees = 100;
    cfg.seed = seed;
    auto cmp = compare_models(data, full, reduced, cfg, SplitPlan{0.30, seed});
    REQUIRE(cmp.full.n_test == 35);
    if (cmp.full.accuracy >= 0.30 && cmp.full.accuracy <= 0.70) ++in_band;
  }
  CHECK(in_band >= 9);
}
