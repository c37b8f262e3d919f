#pragma once

namespace accentgram::special {

/// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

/// Regularized lower incomplete gamma P(a, x) and its complement Q(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

double normal_cdf(double z);
double normal_sf(double z);
/// Φ⁻¹(p) for p in (0, 1).
double normal_quantile(double p);

double t_cdf(double t, double df);
double t_sf(double t, double df);
/// Quantile by bisection on t_cdf.
double t_quantile(double p, double df);

double chisq_cdf(double x, double df);
double chisq_sf(double x, double df);

double f_cdf(double x, double df1, double df2);
double f_sf(double x, double df1, double df2);

}  // namespace accentgram::special
