#include "accentgram/univariate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "accentgram/error.hpp"
#include "accentgram/special.hpp"

namespace accentgram::stats {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double poly(std::span<const double> c, double x) {
  double r = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i];
  return r;
}

void require_finite(std::span<const double> x, const char* what) {
  for (double v : x)
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite value");
}

}  // namespace

Summary summarize(std::span<const double> x) {
  Summary s;
  s.n = x.size();
  if (s.n == 0) return s;
  s.mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : x) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  return s;
}

const char* to_string(TTestVariant v) { return v == TTestVariant::student ? "student" : "welch"; }

TTestResult t_test(const Summary& a, const Summary& b, TTestVariant variant, Alternative alternative,
                   double confidence) {
  if (a.n < 2 || b.n < 2) throw std::invalid_argument("t_test: each group needs at least 2 observations");
  if (!(confidence > 0 && confidence < 1)) throw std::invalid_argument("t_test: confidence must be in (0, 1)");
  const double na = static_cast<double>(a.n), nb = static_cast<double>(b.n);
  const double va = a.sd * a.sd, vb = b.sd * b.sd;

  TTestResult r;
  r.a = a;
  r.b = b;
  r.variant = variant;
  r.alternative = alternative;
  r.diff = a.mean - b.mean;
  if (variant == TTestVariant::student) {
    const double pooled = ((na - 1) * va + (nb - 1) * vb) / (na + nb - 2);
    r.df = na + nb - 2;
    r.se = std::sqrt(pooled * (1.0 / na + 1.0 / nb));
  } else {
    const double qa = va / na, qb = vb / nb;
    r.se = std::sqrt(qa + qb);
    r.df = (qa + qb) * (qa + qb) / (qa * qa / (na - 1) + qb * qb / (nb - 1));
  }
  if (!(r.se > 0)) throw NumericalError("t_test: zero standard error");
  r.t = r.diff / r.se;
  r.p_two_sided = std::min(1.0, 2.0 * special::t_sf(std::abs(r.t), r.df));
  switch (alternative) {
    case Alternative::two_sided: r.p = r.p_two_sided; break;
    case Alternative::less: r.p = special::t_cdf(r.t, r.df); break;
    case Alternative::greater: r.p = special::t_sf(r.t, r.df); break;
  }
  const double crit = special::t_quantile(0.5 + confidence / 2.0, r.df);
  r.ci_low = r.diff - crit * r.se;
  r.ci_high = r.diff + crit * r.se;
  return r;
}

TTestResult t_test(std::span<const double> a, std::span<const double> b, TTestVariant variant,
                   Alternative alternative, double confidence) {
  require_finite(a, "t_test");
  require_finite(b, "t_test");
  return t_test(summarize(a), summarize(b), variant, alternative, confidence);
}

double cohens_d(const Summary& a, const Summary& b) {
  if (a.n < 2 || b.n < 2) throw std::invalid_argument("cohens_d: each group needs at least 2 observations");
  const double na = static_cast<double>(a.n), nb = static_cast<double>(b.n);
  const double pooled = ((na - 1) * a.sd * a.sd + (nb - 1) * b.sd * b.sd) / (na + nb - 2);
  if (a.mean == b.mean) return 0.0;
  if (!(pooled > 0)) throw NumericalError("cohens_d: zero pooled variance");
  return (a.mean - b.mean) / std::sqrt(pooled);
}

double cohens_d(std::span<const double> a, std::span<const double> b) {
  return cohens_d(summarize(a), summarize(b));
}

double bonferroni_threshold(double alpha, std::size_t m) {
  if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("bonferroni_threshold: alpha must be in (0, 1)");
  if (m == 0) throw std::invalid_argument("bonferroni_threshold: need at least one comparison");
  return alpha / static_cast<double>(m);
}

ShapiroWilkResult shapiro_wilk(std::span<const double> input) {
  const std::size_t n = input.size();
  if (n < 3 || n > 5000) throw std::invalid_argument("shapiro_wilk: n must be in [3, 5000]");
  require_finite(input, "shapiro_wilk");
  std::vector<double> x(input.begin(), input.end());
  std::sort(x.begin(), x.end());
  if (x.back() - x.front() <= 0.0) throw NumericalError("shapiro_wilk: zero variance, W is undefined");

  const double an = static_cast<double>(n);
  const std::size_t half = n / 2;
  // a[i] pairs with the i-th largest minus the i-th smallest order statistic.
  std::vector<double> a(half);
  if (n == 3) {
    a[0] = std::sqrt(0.5);
  } else {
    static constexpr double c1[] = {0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
    static constexpr double c2[] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
    std::vector<double> m(half);
    double summ2 = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
      m[i] = special::normal_quantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
      summ2 += m[i] * m[i];
    }
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(an);
    const double a1 = poly(c1, rsn) - m[0] / ssumm2;
    std::size_t first_scaled;
    double fac;
    if (n > 5) {
      first_scaled = 2;
      const double a2 = -m[1] / ssumm2 + poly(c2, rsn);
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
      a[1] = a2;
    } else {
      first_scaled = 1;
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
    }
    a[0] = a1;
    for (std::size_t i = first_scaled; i < half; ++i) a[i] = -m[i] / fac;
  }

  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / an;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  double numerator = 0.0;
  for (std::size_t i = 0; i < half; ++i) numerator += a[i] * (x[n - 1 - i] - x[i]);
  ShapiroWilkResult r;
  r.w = std::min(1.0, numerator * numerator / ss);

  if (n == 3) {
    constexpr double pi6 = 1.90985931710274;   // 6/π
    constexpr double stqr = 1.04719755119660;  // π/3
    r.p = std::max(0.0, pi6 * (std::asin(std::sqrt(r.w)) - stqr));
    return r;
  }
  const double w1 = 1.0 - r.w;
  if (w1 <= 0.0) {
    r.p = 1.0;
    return r;
  }
  double y = std::log(w1);
  double mu, sigma;
  if (n <= 11) {
    static constexpr double g[] = {-2.273, 0.459};
    static constexpr double c3[] = {0.544, -0.39978, 0.025054, -6.714e-4};
    static constexpr double c4[] = {1.3822, -0.77857, 0.062767, -0.0020322};
    const double gamma = poly(g, an);
    if (y >= gamma) {
      r.p = 1e-99;
      return r;
    }
    y = -std::log(gamma - y);
    mu = poly(c3, an);
    sigma = std::exp(poly(c4, an));
  } else {
    static constexpr double c5[] = {-1.5861, -0.31082, -0.083751, 0.0038915};
    static constexpr double c6[] = {-0.4803, -0.082676, 0.0030302};
    const double ln_n = std::log(an);
    mu = poly(c5, ln_n);
    sigma = std::exp(poly(c6, ln_n));
  }
  r.p = special::normal_sf((y - mu) / sigma);
  return r;
}

LillieforsResult ks_lilliefors(std::span<const double> input) {
  const std::size_t n = input.size();
  if (n < 5) throw std::invalid_argument("ks_lilliefors: need at least 5 observations");
  require_finite(input, "ks_lilliefors");
  std::vector<double> x(input.begin(), input.end());
  std::sort(x.begin(), x.end());
  const Summary s = summarize(x);
  if (!(s.sd > 0)) throw NumericalError("ks_lilliefors: zero variance");

  const double an = static_cast<double>(n);
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = special::normal_cdf((x[i] - s.mean) / s.sd);
    d = std::max({d, static_cast<double>(i + 1) / an - f, f - static_cast<double>(i) / an});
  }

  // Dallal–Wilkinson tail approximation; Stephens' modified statistic above p = 0.1.
  const double kd = n <= 100 ? d : d * std::pow(an / 100.0, 0.49);
  const double nd = n <= 100 ? an : 100.0;
  double p = std::exp(-7.01256 * kd * kd * (nd + 2.78019) + 2.99587 * kd * std::sqrt(nd + 2.78019) - 0.122119 +
                      0.974598 / std::sqrt(nd) + 1.67997 / nd);
  if (p > 0.1) {
    const double kk = (std::sqrt(an) - 0.01 + 0.85 / std::sqrt(an)) * d;
    if (kk <= 0.302) p = 1.0;
    else if (kk <= 0.5) p = 2.76773 - 19.828315 * kk + 80.709644 * kk * kk - 138.55152 * kk * kk * kk + 81.218052 * kk * kk * kk * kk;
    else if (kk <= 0.9) p = -4.901232 + 40.662806 * kk - 97.490286 * kk * kk + 94.029866 * kk * kk * kk - 32.355711 * kk * kk * kk * kk;
    else if (kk <= 1.31) p = 6.198765 - 19.558097 * kk + 23.186922 * kk * kk - 12.234627 * kk * kk * kk + 2.423045 * kk * kk * kk * kk;
    else p = 0.0;
  }
  return {d, std::clamp(p, 0.0, 1.0)};
}

LeveneResult levene(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("levene: each group needs at least 2 observations");
  require_finite(a, "levene");
  require_finite(b, "levene");
  const double ma = summarize(a).mean, mb = summarize(b).mean;
  std::vector<double> za, zb;
  for (double v : a) za.push_back(std::abs(v - ma));
  for (double v : b) zb.push_back(std::abs(v - mb));
  const Summary sa = summarize(za), sb = summarize(zb);
  const double na = static_cast<double>(sa.n), nb = static_cast<double>(sb.n), total = na + nb;
  const double grand = (na * sa.mean + nb * sb.mean) / total;
  const double between = na * (sa.mean - grand) * (sa.mean - grand) + nb * (sb.mean - grand) * (sb.mean - grand);
  const double within = (na - 1) * sa.sd * sa.sd + (nb - 1) * sb.sd * sb.sd;
  if (!(within > 0)) throw NumericalError("levene: absolute deviations have zero within-group variance");
  LeveneResult r;
  r.w = (total - 2.0) * between / within;
  r.p = special::f_sf(r.w, 1.0, total - 2.0);
  return r;
}

Table1 run_table1(const GroupedData& data, double alpha, double levene_alpha) {
  if (data.count(0) < 2 || data.count(1) < 2) {
    throw InputError("each group needs at least 2 speakers for t-tests");
  }
  Table1 table;
  table.alpha = alpha;
  table.labels = data.labels;
  table.threshold = bonferroni_threshold(alpha, data.n_features());
  for (std::size_t f = 0; f < data.n_features(); ++f) {
    const auto a = data.values(f, 0);
    const auto b = data.values(f, 1);

    const LeveneResult lev = levene(a, b);
    table.variance.push_back({f + 1, lev.w, lev.p});

    TTestRow row;
    row.feature = f + 1;
    row.label = feature_name(f + 1);
    row.levene_p = lev.p;
    const auto variant = lev.p < levene_alpha ? TTestVariant::welch : TTestVariant::student;
    row.test = t_test(a, b, variant);
    row.p_one_sided = row.test.p_two_sided / 2.0;
    row.cohens_d = cohens_d(row.test.a, row.test.b);
    row.significant_bonferroni = row.test.p_two_sided < table.threshold;
    table.rows.push_back(row);

    for (int g = 0; g < 2; ++g) {
      const auto& v = g == 0 ? a : b;
      NormalityReport rep;
      rep.feature = f + 1;
      rep.group = data.labels[static_cast<std::size_t>(g)];
      rep.n = v.size();
      rep.shapiro_w = rep.shapiro_p = rep.ks_d = rep.ks_p = kNaN;
      if (v.size() >= 3) {
        const auto sw = shapiro_wilk(v);
        rep.shapiro_w = sw.w;
        rep.shapiro_p = sw.p;
      }
      if (v.size() >= 5) {
        const auto ks = ks_lilliefors(v);
        rep.ks_d = ks.d;
        rep.ks_p = ks.p;
      }
      table.normality.push_back(rep);
    }
  }
  return table;
}

}  // namespace accentgram::stats
