#include "accentgram/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "accentgram/error.hpp"

namespace accentgram::plot {
namespace {

constexpr double kWidth = 480, kHeight = 360;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
constexpr const char* kColors[2] = {"#1f77b4", "#d62728"};

double quantile7(const std::vector<double>& sorted, double q) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

struct Axis {
  double lo, hi, px_lo, px_hi;
  double map(double v) const { return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo); }
};

Axis value_axis(const std::array<GroupValues, 2>& groups, double px_lo, double px_hi) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& g : groups)
    for (double v : g.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  if (!(hi > lo)) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad, px_lo, px_hi};
}

std::string header(const std::string& title) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
         "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n"
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
         "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
         xml_escape(title) + "</text>\n";
}

std::string ticks_vertical(const Axis& axis) {
  std::string out = "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) + "\" y2=\"" +
                    num(kHeight - kBottom) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = axis.lo + (axis.hi - axis.lo) * i / 4.0;
    const double y = axis.map(v);
    out += "<line x1=\"" + num(kLeft - 4) + "\" y1=\"" + num(y) + "\" x2=\"" + num(kLeft) + "\" y2=\"" + num(y) +
           "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(y + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + num(v) + "</text>\n";
  }
  return out;
}

void require_two(const std::array<GroupValues, 2>& groups) {
  for (const auto& g : groups)
    if (g.values.size() < 2) throw InputError("plot: group '" + g.label + "' needs at least 2 values");
}

}  // namespace

BoxStats box_stats(std::span<const double> values) {
  if (values.size() < 2) throw InputError("boxplot needs at least 2 values per group");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  BoxStats b;
  b.q1 = quantile7(v, 0.25);
  b.median = quantile7(v, 0.5);
  b.q3 = quantile7(v, 0.75);
  const double iqr = b.q3 - b.q1;
  const double lo_fence = b.q1 - 1.5 * iqr, hi_fence = b.q3 + 1.5 * iqr;
  b.whisker_low = b.q1;
  b.whisker_high = b.q3;
  for (double x : v) {
    if (x < lo_fence || x > hi_fence) {
      b.outliers.push_back(x);
    } else {
      b.whisker_low = std::min(b.whisker_low, x);
      b.whisker_high = std::max(b.whisker_high, x);
    }
  }
  return b;
}

std::string boxplot_svg(const std::string& title, const std::array<GroupValues, 2>& groups) {
  require_two(groups);
  const Axis axis = value_axis(groups, kHeight - kBottom, kTop);
  std::string svg = header(title) + ticks_vertical(axis);
  const double slot = (kWidth - kLeft - kRight) / 2.0;
  for (std::size_t g = 0; g < 2; ++g) {
    const BoxStats b = box_stats(groups[g].values);
    const double cx = kLeft + slot * (static_cast<double>(g) + 0.5);
    const double half = slot * 0.2;
    const std::string color = kColors[g];
    svg += "<g class=\"group\" data-label=\"" + xml_escape(groups[g].label) + "\">\n";
    svg += "<line x1=\"" + num(cx) + "\" y1=\"" + num(axis.map(b.whisker_low)) + "\" x2=\"" + num(cx) + "\" y2=\"" +
           num(axis.map(b.q1)) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + num(cx) + "\" y1=\"" + num(axis.map(b.q3)) + "\" x2=\"" + num(cx) + "\" y2=\"" +
           num(axis.map(b.whisker_high)) + "\" stroke=\"black\"/>\n";
    for (double w : {b.whisker_low, b.whisker_high}) {
      svg += "<line class=\"whisker-cap\" x1=\"" + num(cx - half / 2) + "\" y1=\"" + num(axis.map(w)) + "\" x2=\"" +
             num(cx + half / 2) + "\" y2=\"" + num(axis.map(w)) + "\" stroke=\"black\"/>\n";
    }
    svg += "<rect x=\"" + num(cx - half) + "\" y=\"" + num(axis.map(b.q3)) + "\" width=\"" + num(2 * half) +
           "\" height=\"" + num(axis.map(b.q1) - axis.map(b.q3)) + "\" fill=\"" + color +
           "\" fill-opacity=\"0.35\" stroke=\"" + color + "\"/>\n";
    svg += "<line x1=\"" + num(cx - half) + "\" y1=\"" + num(axis.map(b.median)) + "\" x2=\"" + num(cx + half) +
           "\" y2=\"" + num(axis.map(b.median)) + "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    for (double o : b.outliers) {
      svg += "<circle class=\"outlier\" cx=\"" + num(cx) + "\" cy=\"" + num(axis.map(o)) +
             "\" r=\"3\" fill=\"none\" stroke=\"" + color + "\"/>\n";
    }
    svg += "<text x=\"" + num(cx) + "\" y=\"" + num(kHeight - kBottom + 20) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + xml_escape(groups[g].label) +
           " (n=" + std::to_string(groups[g].values.size()) + ")</text>\n";
    svg += "</g>\n";
  }
  return svg + "</svg>\n";
}

std::string strip_plot_svg(const std::string& title, const std::array<GroupValues, 2>& groups) {
  require_two(groups);
  const Axis axis = value_axis(groups, kLeft, kWidth - kRight);
  std::string svg = header(title);
  const double base = kHeight - kBottom;
  svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(base) + "\" x2=\"" + num(kWidth - kRight) + "\" y2=\"" +
         num(base) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = axis.lo + (axis.hi - axis.lo) * i / 4.0;
    svg += "<text x=\"" + num(axis.map(v)) + "\" y=\"" + num(base + 16) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + num(v) + "</text>\n";
  }
  svg += "<text x=\"" + num((kLeft + kWidth - kRight) / 2) + "\" y=\"" + num(base + 36) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">Canonical function 1</text>\n";
  const double band = (base - kTop) / 2.0;
  for (std::size_t g = 0; g < 2; ++g) {
    const double cy = kTop + band * (static_cast<double>(g) + 0.5);
    svg += "<g class=\"group\" data-label=\"" + xml_escape(groups[g].label) + "\">\n";
    svg += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(cy + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" + xml_escape(groups[g].label) +
           "</text>\n";
    for (std::size_t i = 0; i < groups[g].values.size(); ++i) {
      // Deterministic jitter from the point index.
      const double jitter = (static_cast<double>((i * 7919) % 101) / 100.0 - 0.5) * band * 0.6;
      svg += "<circle cx=\"" + num(axis.map(groups[g].values[i])) + "\" cy=\"" + num(cy + jitter) +
             "\" r=\"3\" fill=\"" + kColors[g] + "\" fill-opacity=\"0.6\"/>\n";
    }
    double mean = 0.0;
    for (double v : groups[g].values) mean += v;
    mean /= static_cast<double>(groups[g].values.size());
    svg += "<line class=\"centroid\" x1=\"" + num(axis.map(mean)) + "\" y1=\"" + num(cy - band * 0.4) + "\" x2=\"" +
           num(axis.map(mean)) + "\" y2=\"" + num(cy + band * 0.4) + "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    svg += "</g>\n";
  }
  return svg + "</svg>\n";
}

}  // namespace accentgram::plot
