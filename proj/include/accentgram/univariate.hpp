#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "accentgram/dataset.hpp"

namespace accentgram::stats {

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample SD (n − 1 divisor)
};

Summary summarize(std::span<const double> x);

enum class TTestVariant { student, welch };
enum class Alternative { two_sided, less, greater };

const char* to_string(TTestVariant v);

/// Independent-samples t-test of mean(a) − mean(b).
struct TTestResult {
  Summary a, b;
  TTestVariant variant = TTestVariant::student;
  Alternative alternative = Alternative::two_sided;
  double diff = 0.0;  // mean_a − mean_b
  double se = 0.0;
  double t = 0.0;
  double df = 0.0;
  double p = 0.0;            // under `alternative`
  double p_two_sided = 0.0;
  double ci_low = 0.0;       // two-sided interval for diff
  double ci_high = 0.0;
};

TTestResult t_test(const Summary& a, const Summary& b, TTestVariant variant,
                   Alternative alternative = Alternative::two_sided, double confidence = 0.95);
TTestResult t_test(std::span<const double> a, std::span<const double> b, TTestVariant variant,
                   Alternative alternative = Alternative::two_sided, double confidence = 0.95);

/// (mean_a − mean_b) / pooled SD.
double cohens_d(const Summary& a, const Summary& b);
double cohens_d(std::span<const double> a, std::span<const double> b);

double bonferroni_threshold(double alpha, std::size_t m);

struct ShapiroWilkResult {
  double w = 0.0;
  double p = 0.0;
};

/// Royston's AS R94 algorithm; 3 ≤ n ≤ 5000.
ShapiroWilkResult shapiro_wilk(std::span<const double> x);

struct LillieforsResult {
  double d = 0.0;
  double p = 0.0;
};

/// Kolmogorov–Smirnov against a normal with estimated mean and SD, n ≥ 5.
LillieforsResult ks_lilliefors(std::span<const double> x);

struct LeveneResult {
  double w = 0.0;
  double p = 0.0;
};

/// Mean-centred Levene test for two groups.
LeveneResult levene(std::span<const double> a, std::span<const double> b);

struct TTestRow {
  std::size_t feature = 0;  // 1-based
  std::string label;
  TTestResult test;
  double p_one_sided = 0.0;  // smaller tail, in the observed direction
  double cohens_d = 0.0;
  double levene_p = 0.0;
  bool significant_bonferroni = false;
};

struct NormalityReport {
  std::size_t feature = 0;
  std::string group;
  std::size_t n = 0;
  double shapiro_w = 0.0, shapiro_p = 0.0;  // NaN when n is outside the test's range
  double ks_d = 0.0, ks_p = 0.0;
};

struct VarianceTestResult {
  std::size_t feature = 0;
  double levene_w = 0.0;
  double levene_p = 0.0;
};

struct Table1 {
  double alpha = 0.05;
  double threshold = 0.0;  // alpha / number of features
  std::array<std::string, 2> labels;
  std::vector<TTestRow> rows;
  std::vector<NormalityReport> normality;
  std::vector<VarianceTestResult> variance;
};

/// Per feature: Levene decides Student (p ≥ levene_alpha) or Welch, then
/// t-test, Cohen's d and the Bonferroni flag at alpha / n_features.
Table1 run_table1(const GroupedData& data, double alpha = 0.05, double levene_alpha = 0.05);

}  // namespace accentgram::stats
