#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

namespace accentgram::plot {

/// Tukey box summary: type-7 quartiles, whiskers at the most extreme points
/// within 1.5·IQR of the box, everything beyond is an outlier.
struct BoxStats {
  double q1 = 0.0, median = 0.0, q3 = 0.0;
  double whisker_low = 0.0, whisker_high = 0.0;
  std::vector<double> outliers;
};

BoxStats box_stats(std::span<const double> values);

struct GroupValues {
  std::string label;
  std::vector<double> values;
};

/// Two-group boxplot. Throws InputError if a group has fewer than 2 values.
std::string boxplot_svg(const std::string& title, const std::array<GroupValues, 2>& groups);

/// Canonical scores as a jittered strip plot, one row per group.
std::string strip_plot_svg(const std::string& title, const std::array<GroupValues, 2>& groups);

}  // namespace accentgram::plot
