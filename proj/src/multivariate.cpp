#include "accentgram/multivariate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "accentgram/error.hpp"
#include "accentgram/special.hpp"

namespace accentgram::mv {
namespace {

void add_outer(Matrix& m, std::span<const double> v, double weight) {
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) += weight * v[i] * v[j];
}

std::vector<double> column_means(const GroupedData& data, int g) {
  std::vector<double> mean(data.n_features(), 0.0);
  std::size_t count = 0;
  for (std::size_t r = 0; r < data.n(); ++r) {
    if (g >= 0 && data.group[r] != g) continue;
    const auto row = data.x.row(r);
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += row[j];
    ++count;
  }
  for (double& v : mean) v /= static_cast<double>(count);
  return mean;
}

void require_two_groups(const GroupedData& data) {
  for (int g : data.group)
    if (g != 0 && g != 1) throw std::invalid_argument("only two-group designs are supported");
  if (data.count(0) == 0 || data.count(1) == 0) throw InputError("both groups must be non-empty");
}

}  // namespace

ScatterMatrices scatter_matrices(const GroupedData& data) {
  require_two_groups(data);
  const std::size_t p = data.n_features();
  ScatterMatrices s;
  s.n = data.n();
  s.between = Matrix(p, p);
  s.within = Matrix(p, p);
  s.total = Matrix(p, p);
  const auto grand = column_means(data, -1);
  const std::array<std::vector<double>, 2> means = {column_means(data, 0), column_means(data, 1)};
  std::vector<double> d(p);
  for (int g = 0; g < 2; ++g) {
    for (std::size_t j = 0; j < p; ++j) d[j] = means[g][j] - grand[j];
    add_outer(s.between, d, static_cast<double>(data.count(g)));
  }
  for (std::size_t r = 0; r < data.n(); ++r) {
    const auto row = data.x.row(r);
    const auto& m = means[static_cast<std::size_t>(data.group[r])];
    for (std::size_t j = 0; j < p; ++j) d[j] = row[j] - m[j];
    add_outer(s.within, d, 1.0);
    for (std::size_t j = 0; j < p; ++j) d[j] = row[j] - grand[j];
    add_outer(s.total, d, 1.0);
  }
  if (s.n <= s.groups) throw InputError("need more observations than groups");
  s.pooled = s.within;
  s.pooled *= 1.0 / static_cast<double>(s.n - s.groups);
  return s;
}

ManovaResult pillai_f_approximation(double pillai_v, std::size_t n, std::size_t g, std::size_t p) {
  if (g < 2 || p < 1) throw std::invalid_argument("pillai: need g >= 2 and p >= 1");
  if (n <= g + p) throw InputError("MANOVA needs N > g + p (denominator degrees of freedom would be <= 0)");
  const double s = static_cast<double>(std::min(p, g - 1));
  const double m = (std::abs(static_cast<double>(p) - static_cast<double>(g) + 1.0) - 1.0) / 2.0;
  const double nn = (static_cast<double>(n) - static_cast<double>(g) - static_cast<double>(p) - 1.0) / 2.0;
  ManovaResult r;
  r.pillai_v = pillai_v;
  r.partial_eta_sq = pillai_v / s;
  r.df1 = s * (2.0 * m + s + 1.0);
  r.df2 = s * (2.0 * nn + s + 1.0);
  const double ratio = pillai_v / s;
  if (ratio >= 1.0) throw NumericalError("Pillai trace reached its upper bound; groups are perfectly separated");
  r.f_stat = ((2.0 * nn + s + 1.0) / (2.0 * m + s + 1.0)) * ratio / (1.0 - ratio);
  r.p = special::f_sf(r.f_stat, r.df1, r.df2);
  return r;
}

ManovaResult pillai_manova(const Matrix& between, const Matrix& within, std::size_t n, std::size_t g) {
  const Matrix total = between + within;
  // trace(B T⁻¹) = trace(T⁻¹ B)
  const Matrix x = lu_solve(total, between);
  return pillai_f_approximation(std::max(0.0, x.trace()), n, g, between.rows());
}

std::vector<double> discriminant_eigenvalues(const Matrix& between, const Matrix& within) {
  const Matrix l = cholesky(within);
  const Matrix left = forward_substitute(l, between);                  // L⁻¹ B
  const Matrix c = forward_substitute(l, left.transposed());           // L⁻¹ (L⁻¹ B)ᵀ = L⁻¹ B L⁻ᵀ
  Matrix sym = c;
  for (std::size_t i = 0; i < sym.rows(); ++i)
    for (std::size_t j = 0; j < sym.cols(); ++j) sym(i, j) = 0.5 * (c(i, j) + c(j, i));
  return sym_eigen(sym).values;
}

double pillai_from_eigenvalues(const Matrix& between, const Matrix& within) {
  double v = 0.0;
  for (double lambda : discriminant_eigenvalues(between, within)) {
    lambda = std::max(lambda, 0.0);
    v += lambda / (1.0 + lambda);
  }
  return v;
}

BoxMResult box_m(const GroupedData& data) {
  require_two_groups(data);
  const std::size_t p = data.n_features();
  const ScatterMatrices s = scatter_matrices(data);
  const double n = static_cast<double>(data.n());
  const double g = 2.0;

  double sum_log = 0.0;
  double sum_inv = 0.0;
  for (int grp = 0; grp < 2; ++grp) {
    const std::size_t ni = data.count(grp);
    if (ni <= p) {
      throw NumericalError("Box's M: group '" + data.labels[static_cast<std::size_t>(grp)] +
                           "' has n <= p, so its covariance matrix is singular");
    }
    const auto mean = column_means(data, grp);
    Matrix cov(p, p);
    std::vector<double> d(p);
    for (std::size_t r = 0; r < data.n(); ++r) {
      if (data.group[r] != grp) continue;
      const auto row = data.x.row(r);
      for (std::size_t j = 0; j < p; ++j) d[j] = row[j] - mean[j];
      add_outer(cov, d, 1.0 / static_cast<double>(ni - 1));
    }
    std::pair<int, double> ld;
    try {
      ld = det_log(cov);
    } catch (const NumericalError&) {
      throw NumericalError("Box's M: covariance matrix of group '" + data.labels[static_cast<std::size_t>(grp)] +
                           "' is singular");
    }
    if (ld.first <= 0) {
      throw NumericalError("Box's M: covariance of group '" + data.labels[static_cast<std::size_t>(grp)] +
                           "' is not positive definite");
    }
    sum_log += static_cast<double>(ni - 1) * ld.second;
    sum_inv += 1.0 / static_cast<double>(ni - 1);
  }
  const auto pooled_ld = det_log(s.pooled);
  const double pd = static_cast<double>(p);
  BoxMResult r;
  r.m = (n - g) * pooled_ld.second - sum_log;
  const double c1 = (sum_inv - 1.0 / (n - g)) * (2.0 * pd * pd + 3.0 * pd - 1.0) / (6.0 * (pd + 1.0) * (g - 1.0));
  r.chi2 = std::max(0.0, r.m * (1.0 - c1));
  r.df = pd * (pd + 1.0) * (g - 1.0) / 2.0;
  r.p = special::chisq_sf(r.chi2, r.df);
  return r;
}

ManovaResult manova(const GroupedData& data) {
  const ScatterMatrices s = scatter_matrices(data);
  ManovaResult r = pillai_manova(s.between, s.within, s.n, s.groups);
  const BoxMResult box = box_m(data);
  r.box_m = box.m;
  r.box_chi2 = box.chi2;
  r.box_df = box.df;
  r.box_p = box.p;
  return r;
}

CdaResult cda(const GroupedData& data) {
  const ScatterMatrices s = scatter_matrices(data);
  const std::size_t p = data.n_features();
  Matrix l;
  try {
    l = cholesky(s.within);
  } catch (const NumericalError&) {
    throw NumericalError("CDA: within-group scatter matrix is singular");
  }
  const Matrix left = forward_substitute(l, s.between);
  const Matrix c = forward_substitute(l, left.transposed());
  Matrix sym = c;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) sym(i, j) = 0.5 * (c(i, j) + c(j, i));
  const SymmetricEigen eig = sym_eigen(sym);

  Matrix v(p, 1);
  for (std::size_t i = 0; i < p; ++i) v(i, 0) = eig.vectors(i, 0);
  const Matrix a = back_substitute_transposed(l, v);  // aᵀ W a = 1

  CdaResult r;
  r.eigenvalue = std::max(0.0, eig.values[0]);
  r.canonical_correlation = std::sqrt(r.eigenvalue / (1.0 + r.eigenvalue));
  const double scale = std::sqrt(static_cast<double>(s.n - s.groups));  // aᵀ S_pooled a = 1
  r.raw_coeffs.resize(p);
  r.std_coeffs.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    r.raw_coeffs[j] = a(j, 0) * scale;
    r.std_coeffs[j] = r.raw_coeffs[j] * std::sqrt(s.pooled(j, j));
  }
  std::size_t lead = 0;
  for (std::size_t j = 1; j < p; ++j)
    if (std::abs(r.std_coeffs[j]) > std::abs(r.std_coeffs[lead])) lead = j;
  if (r.std_coeffs[lead] < 0) {
    for (double& v2 : r.raw_coeffs) v2 = -v2;
    for (double& v2 : r.std_coeffs) v2 = -v2;
  }

  const auto grand = column_means(data, -1);
  r.scores.resize(data.n());
  std::array<double, 2> sums{};
  for (std::size_t i = 0; i < data.n(); ++i) {
    const auto row = data.x.row(i);
    double score = 0.0;
    for (std::size_t j = 0; j < p; ++j) score += r.raw_coeffs[j] * (row[j] - grand[j]);
    r.scores[i] = score;
    sums[static_cast<std::size_t>(data.group[i])] += score;
  }
  for (int g = 0; g < 2; ++g) r.centroids[static_cast<std::size_t>(g)] = sums[static_cast<std::size_t>(g)] / static_cast<double>(data.count(g));
  return r;
}

}  // namespace accentgram::mv
