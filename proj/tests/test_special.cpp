#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "doctest.h"

#include "accentgram/rng.hpp"
#include "accentgram/special.hpp"

using namespace accentgram;
namespace bm = boost::math;

namespace {

// Relative error with an absolute floor, so tails near zero compare sensibly.
bool close(double got, double want, double rel = 1e-8, double abs_floor = 1e-300) {
  return std::abs(got - want) <= rel * std::max(std::abs(want), abs_floor);
}

}  // namespace

TEST_CASE("incomplete beta against Boost") {
  Rng rng(1);
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const double a = 0.05 + 200.0 * rng.uniform() * rng.uniform();
    const double b = 0.05 + 200.0 * rng.uniform() * rng.uniform();
    const double x = rng.uniform();
    const double want = bm::ibeta(a, b, x);
    const double got = special::incomplete_beta(a, b, x);
    if (!close(got, want, 1e-8, 1e-280)) {
      ++bad;
      INFO("a=" << a << " b=" << b << " x=" << x << " got " << got << " want " << want);
      CHECK(false);
    }
  }
  CHECK(bad == 0);
  CHECK(special::incomplete_beta(2.0, 3.0, 0.0) == 0.0);
  CHECK(special::incomplete_beta(2.0, 3.0, 1.0) == 1.0);
}

TEST_CASE("incomplete gamma against Boost") {
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const double a = 0.05 + 150.0 * rng.uniform() * rng.uniform();
    const double x = 3.0 * a * rng.uniform() + 0.01 * rng.uniform();
    const double p = special::gamma_p(a, x);
    const double q = special::gamma_q(a, x);
    INFO("a=" << a << " x=" << x);
    CHECK(close(p, bm::gamma_p(a, x), 1e-8, 1e-280));
    CHECK(close(q, bm::gamma_q(a, x), 1e-8, 1e-280));
  }
}

TEST_CASE("normal distribution") {
  bm::normal n01;
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double z = -30.0 + 60.0 * rng.uniform();
    INFO("z=" << z);
    CHECK(close(special::normal_cdf(z), bm::cdf(n01, z), 1e-12));
    CHECK(close(special::normal_sf(z), bm::cdf(bm::complement(n01, z)), 1e-12));
  }
  for (int i = 0; i < 1000; ++i) {
    const double p = std::pow(10.0, -15.0 * rng.uniform()) * (rng.uniform() < 0.5 ? 1.0 : 0.5);
    const double pp = rng.uniform() < 0.5 ? p : 1.0 - p;
    if (pp <= 0.0 || pp >= 1.0) continue;
    INFO("p=" << pp);
    CHECK(close(special::normal_quantile(pp), bm::quantile(n01, pp), 1e-10, 1e-10));
  }
  CHECK(special::normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-14));
  CHECK(special::normal_quantile(0.5) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("Student t distribution") {
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const double df = 0.5 + 300.0 * rng.uniform() * rng.uniform();
    const double t = -12.0 + 24.0 * rng.uniform();
    bm::students_t dist(df);
    INFO("df=" << df << " t=" << t);
    CHECK(close(special::t_cdf(t, df), bm::cdf(dist, t), 1e-8, 1e-280));
    CHECK(close(special::t_sf(t, df), bm::cdf(bm::complement(dist, t)), 1e-8, 1e-280));
  }
  for (int i = 0; i < 300; ++i) {
    const double df = 1.0 + 200.0 * rng.uniform();
    const double p = 0.001 + 0.998 * rng.uniform();
    INFO("df=" << df << " p=" << p);
    CHECK(close(special::t_quantile(p, df), bm::quantile(bm::students_t(df), p), 1e-8, 1e-8));
  }
  // Table value t_{0.975, 10}.
  CHECK(special::t_quantile(0.975, 10.0) == doctest::Approx(2.228138851986274).epsilon(1e-10));
}

TEST_CASE("chi-square and F distributions") {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double df = 0.5 + 100.0 * rng.uniform() * rng.uniform();
    const double x = 4.0 * df * rng.uniform();
    bm::chi_squared dist(df);
    INFO("df=" << df << " x=" << x);
    CHECK(close(special::chisq_cdf(x, df), bm::cdf(dist, x), 1e-8, 1e-280));
    CHECK(close(special::chisq_sf(x, df), bm::cdf(bm::complement(dist, x)), 1e-8, 1e-280));
  }
  for (int i = 0; i < 1000; ++i) {
    const double d1 = 0.5 + 60.0 * rng.uniform();
    const double d2 = 0.5 + 400.0 * rng.uniform() * rng.uniform();
    const double x = 8.0 * rng.uniform() * rng.uniform();
    bm::fisher_f dist(d1, d2);
    INFO("d1=" << d1 << " d2=" << d2 << " x=" << x);
    CHECK(close(special::f_cdf(x, d1, d2), bm::cdf(dist, x), 1e-8, 1e-280));
    CHECK(close(special::f_sf(x, d1, d2), bm::cdf(bm::complement(dist, x)), 1e-8, 1e-280));
  }
  CHECK(special::chisq_sf(0.0, 3.0) == 1.0);
  CHECK(special::f_sf(0.0, 3.0, 10.0) == 1.0);
}
