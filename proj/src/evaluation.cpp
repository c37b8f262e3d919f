#include "accentgram/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "accentgram/error.hpp"
#include "accentgram/rng.hpp"
#include "accentgram/special.hpp"
#include "accentgram/univariate.hpp"

namespace accentgram::ml {

Split stratified_split(const GroupedData& data, const SplitPlan& plan) {
  if (!(plan.test_fraction > 0.0 && plan.test_fraction < 1.0)) {
    throw InputError("test fraction must lie strictly between 0 and 1");
  }
  Split split;
  for (int g = 0; g < 2; ++g) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < data.n(); ++i)
      if (data.group[i] == g) members.push_back(i);
    const auto n_test = static_cast<std::size_t>(std::llround(static_cast<double>(members.size()) * plan.test_fraction));
    if (n_test < 2 || members.size() - n_test < 2) {
      throw InputError("group '" + data.labels[static_cast<std::size_t>(g)] +
                       "' needs at least 2 speakers in both train and test partitions");
    }
    Rng rng(derive_seed(plan.seed, static_cast<std::uint64_t>(g), 0x73706c6974ULL));
    rng.shuffle(std::span<std::size_t>(members));
    split.test.insert(split.test.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_test));
    split.train.insert(split.train.end(), members.begin() + static_cast<std::ptrdiff_t>(n_test), members.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

Interval wilson_ci(std::size_t successes, std::size_t trials, double confidence) {
  if (trials == 0) throw std::invalid_argument("wilson_ci: zero trials");
  if (successes > trials) throw std::invalid_argument("wilson_ci: more successes than trials");
  if (!(confidence > 0 && confidence < 1)) throw std::invalid_argument("wilson_ci: confidence must be in (0, 1)");
  const double z = special::normal_quantile(1.0 - (1.0 - confidence) / 2.0);
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = phat + z2 / (2.0 * n);
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
  const double denom = 1.0 + z2 / n;
  Interval ci{(centre - half) / denom, (centre + half) / denom};
  ci.low = std::clamp(ci.low, 0.0, 1.0);
  ci.high = std::clamp(ci.high, 0.0, 1.0);
  // Rounding can push a bound a hair past p̂ at the edges.
  ci.low = std::min(ci.low, phat);
  ci.high = std::max(ci.high, phat);
  return ci;
}

const char* to_string(McNemarMethod m) {
  switch (m) {
    case McNemarMethod::chi2_corrected: return "chi2_corrected";
    case McNemarMethod::exact_binomial: return "exact_binomial";
    default: return "none";
  }
}

McNemarResult mcnemar(std::span<const int> pred_a, std::span<const int> pred_b, std::span<const int> truth) {
  if (pred_a.size() != truth.size() || pred_b.size() != truth.size()) {
    throw std::invalid_argument("mcnemar: prediction vectors have mismatched lengths");
  }
  McNemarResult r;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool a_ok = pred_a[i] == truth[i], b_ok = pred_b[i] == truth[i];
    if (a_ok && !b_ok) ++r.b;
    if (!a_ok && b_ok) ++r.c;
  }
  const std::size_t n = r.b + r.c;
  if (n == 0) return r;
  const double diff = std::abs(static_cast<double>(r.b) - static_cast<double>(r.c));
  r.chi2 = (diff - 1.0) * (diff - 1.0) / static_cast<double>(n);
  if (n < 25) {
    r.method = McNemarMethod::exact_binomial;
    const std::size_t k = std::min(r.b, r.c);
    double tail = 0.0;
    const double log_half_n = static_cast<double>(n) * std::log(0.5);
    for (std::size_t i = 0; i <= k; ++i) {
      const double log_choose = std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(i) + 1) -
                                std::lgamma(static_cast<double>(n - i) + 1);
      tail += std::exp(log_choose + log_half_n);
    }
    r.p = std::min(1.0, 2.0 * tail);
  } else {
    r.method = McNemarMethod::chi2_corrected;
    r.p = special::chisq_sf(r.chi2, 1.0);
  }
  return r;
}

std::vector<std::size_t> resolve_feature_set(std::span<const std::size_t> one_based, std::size_t n_features) {
  if (one_based.empty()) throw InputError("feature set is empty");
  std::vector<std::size_t> cols;
  for (std::size_t f : one_based) {
    if (f < 1 || f > n_features) {
      throw InputError("feature index " + std::to_string(f) + " is outside 1.." + std::to_string(n_features));
    }
    cols.push_back(f - 1);
  }
  std::sort(cols.begin(), cols.end());
  if (std::adjacent_find(cols.begin(), cols.end()) != cols.end()) throw InputError("feature set has duplicates");
  return cols;
}

ClassifierEval evaluate(const GroupedData& data, const Split& split, std::span<const std::size_t> feature_set,
                        const ForestConfig& cfg) {
  const auto columns = resolve_feature_set(feature_set, data.n_features());
  const GroupedData train = data.subset(split.train);
  const GroupedData test = data.subset(split.test);
  const auto forest = RandomForest::fit(train.x, train.group, 2, columns, cfg);

  ClassifierEval eval;
  for (std::size_t c : columns) eval.feature_set.push_back(c + 1);
  eval.predictions = forest.predict(test.x);
  eval.n_test = test.n();
  for (std::size_t i = 0; i < test.n(); ++i) eval.correct += eval.predictions[i] == test.group[i] ? 1 : 0;
  eval.accuracy = static_cast<double>(eval.correct) / static_cast<double>(eval.n_test);
  eval.ci = wilson_ci(eval.correct, eval.n_test);
  return eval;
}

Comparison compare_models(const GroupedData& data, std::span<const std::size_t> full_set,
                          std::span<const std::size_t> reduced_set, const ForestConfig& cfg, const SplitPlan& plan) {
  Comparison cmp;
  cmp.split = stratified_split(data, plan);
  for (std::size_t i : cmp.split.test) cmp.truth.push_back(data.group[i]);
  cmp.full = evaluate(data, cmp.split, full_set, cfg);
  cmp.reduced = evaluate(data, cmp.split, reduced_set, cfg);
  cmp.mcnemar = mcnemar(cmp.full.predictions, cmp.reduced.predictions, cmp.truth);
  return cmp;
}

RepeatedComparison compare_models_repeated(const GroupedData& data, std::span<const std::size_t> full_set,
                                           std::span<const std::size_t> reduced_set, const ForestConfig& cfg,
                                           const SplitPlan& plan, std::size_t repeats) {
  if (repeats == 0) throw std::invalid_argument("repeats must be at least 1");
  RepeatedComparison out;
  for (std::size_t r = 0; r < repeats; ++r) {
    const std::uint64_t seed = plan.seed + r;
    ForestConfig fc = cfg;
    fc.seed = cfg.seed + r;
    SplitPlan sp = plan;
    sp.seed = seed;
    const Comparison cmp = compare_models(data, full_set, reduced_set, fc, sp);
    out.seeds.push_back(seed);
    out.full_accuracy.push_back(cmp.full.accuracy);
    out.reduced_accuracy.push_back(cmp.reduced.accuracy);
  }
  const auto full = stats::summarize(out.full_accuracy);
  const auto reduced = stats::summarize(out.reduced_accuracy);
  out.full_mean = full.mean;
  out.full_sd = full.sd;
  out.reduced_mean = reduced.mean;
  out.reduced_sd = reduced.sd;
  return out;
}

}  // namespace accentgram::ml
