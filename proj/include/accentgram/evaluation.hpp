#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "accentgram/dataset.hpp"
#include "accentgram/forest.hpp"

namespace accentgram::ml {

struct SplitPlan {
  double test_fraction = 0.30;
  std::uint64_t seed = 42;
};

struct Split {
  std::vector<std::size_t> train;  // row indices, ascending
  std::vector<std::size_t> test;
};

/// Per group, a seeded shuffle picks round(n_g · fraction) test rows. Every
/// group must keep at least 2 rows on each side.
Split stratified_split(const GroupedData& data, const SplitPlan& plan);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

Interval wilson_ci(std::size_t successes, std::size_t trials, double confidence = 0.95);

enum class McNemarMethod { none, chi2_corrected, exact_binomial };
const char* to_string(McNemarMethod m);

struct McNemarResult {
  std::size_t b = 0;  // A right, B wrong
  std::size_t c = 0;  // A wrong, B right
  double chi2 = 0.0;
  double p = 1.0;
  McNemarMethod method = McNemarMethod::none;
};

/// Exact two-sided binomial when b + c < 25, otherwise continuity-corrected χ².
McNemarResult mcnemar(std::span<const int> pred_a, std::span<const int> pred_b, std::span<const int> truth);

struct ClassifierEval {
  std::vector<std::size_t> feature_set;  // 1-based
  std::vector<int> predictions;          // aligned with the test rows
  std::size_t correct = 0;
  std::size_t n_test = 0;
  double accuracy = 0.0;
  Interval ci;
};

struct Comparison {
  Split split;
  std::vector<int> truth;
  ClassifierEval full;
  ClassifierEval reduced;
  McNemarResult mcnemar;  // A = full, B = reduced
};

/// 1-based feature numbers → 0-based columns; throws InputError when out of range.
std::vector<std::size_t> resolve_feature_set(std::span<const std::size_t> one_based, std::size_t n_features);

ClassifierEval evaluate(const GroupedData& data, const Split& split, std::span<const std::size_t> feature_set,
                        const ForestConfig& cfg);

/// One split, two forests trained on the same rows and scored on the same test items.
Comparison compare_models(const GroupedData& data, std::span<const std::size_t> full_set,
                          std::span<const std::size_t> reduced_set, const ForestConfig& cfg, const SplitPlan& plan);

struct RepeatedComparison {
  std::vector<std::uint64_t> seeds;
  std::vector<double> full_accuracy;
  std::vector<double> reduced_accuracy;
  double full_mean = 0.0, full_sd = 0.0;
  double reduced_mean = 0.0, reduced_sd = 0.0;
};

/// compare_models over `repeats` seeds (seed, seed+1, ...), for split and forest alike.
RepeatedComparison compare_models_repeated(const GroupedData& data, std::span<const std::size_t> full_set,
                                           std::span<const std::size_t> reduced_set, const ForestConfig& cfg,
                                           const SplitPlan& plan, std::size_t repeats);

}  // namespace accentgram::ml
