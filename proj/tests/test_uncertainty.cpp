#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "daopf/errors.hpp"
#include "daopf/uncertainty.hpp"

using namespace daopf;

namespace {

// independent closed-form oracle for the normal CDF band
double normal_band_erf(double mu, double sigma, double lo, double hi) {
  auto cdf = [&](double x) { return 0.5 * (1.0 + std::erf((x - mu) / (sigma * std::sqrt(2.0)))); };
  return cdf(hi) - cdf(lo);
}

double mc_weibull_mixture_mean(const BimodalWeibull& m, int samples, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::weibull_distribution<double> d1(m.k1, m.c1), d2(m.k2, m.c2);
  double sum = 0.0;
  for (int i = 0; i < samples; ++i) sum += (unif(rng) < m.w1 ? d1(rng) : d2(rng));
  return m.power_scale() * sum / samples;
}

}  // namespace

TEST_CASE("irradiance and power pdfs integrate to one") {
  BimodalWeibull m;
  double zg = integrate([&](double g) { return m.pdf_irradiance(g); }, 0.0, 20.0, 1e-10);
  CHECK(std::abs(zg - 1.0) < 1e-6);
  double zp = integrate([&](double p) { return m.pdf_power(p); }, 0.0, 20.0 * m.power_scale(),
                        1e-10);
  CHECK(std::abs(zp - 1.0) < 1e-6);
}

TEST_CASE("single-mode Weibull peaks at the analytic mode") {
  BimodalWeibull m;
  m.w1 = 1.0;
  m.w2 = 0.0;
  m.c1 = 0.5;
  m.k1 = 3.0;
  double mode = m.c1 * std::pow((m.k1 - 1.0) / m.k1, 1.0 / m.k1);
  double at_mode = m.pdf_irradiance(mode);
  for (double g : {mode * 0.8, mode * 0.95, mode * 1.05, mode * 1.2})
    CHECK(m.pdf_irradiance(g) < at_mode);
}

TEST_CASE("mixture mean matches a 1e6-sample Monte Carlo within 0.5%") {
  BimodalWeibull m;
  double analytic = m.mean_power_mw();
  double mc = mc_weibull_mixture_mean(m, 1000000, 12345);
  CHECK(std::abs(analytic - mc) / analytic < 0.005);
}

TEST_CASE("scaled_to_mean hits the target mean and keeps the shape") {
  BimodalWeibull m;
  BimodalWeibull s = m.scaled_to_mean(37.5);
  CHECK(s.mean_power_mw() == doctest::Approx(37.5).epsilon(1e-9));
  CHECK(s.k1 == m.k1);
  CHECK(s.k2 == m.k2);
  CHECK(s.w1 == m.w1);
  // scale parameters move together
  CHECK(s.c1 / m.c1 == doctest::Approx(s.c2 / m.c2));
}

TEST_CASE("normal band mu +/- 1.96 sigma carries 95% confidence") {
  NormalLoad n{250.0, 12.5};
  double got = confidence(n, n.mu_mw - 1.96 * n.sigma_mw, n.mu_mw + 1.96 * n.sigma_mw);
  CHECK(std::abs(got - 0.95) < 1e-3);
  CHECK(std::abs(got - normal_band_erf(n.mu_mw, n.sigma_mw, n.mu_mw - 1.96 * n.sigma_mw,
                                       n.mu_mw + 1.96 * n.sigma_mw)) < 1e-8);
}

TEST_CASE("quadrature matches the erf oracle across arbitrary bands") {
  NormalLoad n{283.4, 28.34};
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unif(-4.0, 4.0);
  for (int t = 0; t < 25; ++t) {
    double a = n.mu_mw + unif(rng) * n.sigma_mw;
    double b = n.mu_mw + unif(rng) * n.sigma_mw;
    if (a > b) std::swap(a, b);
    CHECK(std::abs(confidence(n, a, b) - normal_band_erf(n.mu_mw, n.sigma_mw, a, b)) < 1e-8);
  }
}

TEST_CASE("full-support bands integrate to one") {
  NormalLoad n{100.0, 5.0};
  CHECK(std::abs(confidence(n, n.mu_mw - 50.0 * n.sigma_mw, n.mu_mw + 50.0 * n.sigma_mw) - 1.0) <
        1e-8);
  BimodalWeibull m;
  CHECK(std::abs(confidence(m, 0.0, 1e4) - 1.0) < 1e-6);
}

TEST_CASE("confidence in a fixed band falls as sigma grows") {
  double mu = 209.3;
  double lo = mu - 8.0, hi = mu + 8.0;
  double prev = 1.1;
  for (double pct : {2.0, 5.0, 10.0}) {
    double c = confidence(NormalLoad{mu, mu * pct / 100.0}, lo, hi);
    CHECK(c < prev);
    prev = c;
  }
}

TEST_CASE("Weibull band confidence matches Monte Carlo within 3 standard errors") {
  BimodalWeibull m = BimodalWeibull{}.scaled_to_mean(30.0);
  double lo = 20.0, hi = 45.0;
  double quad = confidence(m, lo, hi);
  const int samples = 400000;
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::weibull_distribution<double> d1(m.k1, m.c1), d2(m.k2, m.c2);
  int in_band = 0;
  for (int i = 0; i < samples; ++i) {
    double p = m.power_scale() * (unif(rng) < m.w1 ? d1(rng) : d2(rng));
    if (p >= lo && p <= hi) ++in_band;
  }
  double mc = static_cast<double>(in_band) / samples;
  double se = std::sqrt(mc * (1.0 - mc) / samples);
  CHECK(std::abs(quad - mc) < 3.0 * se + 1e-6);
}

TEST_CASE("confidence is monotone in the band and bounded in [0, 1]") {
  BimodalWeibull m = BimodalWeibull{}.scaled_to_mean(25.0);
  double prev = -1.0;
  for (double half : {2.0, 5.0, 10.0, 20.0, 40.0}) {
    double c = confidence(m, std::max(0.0, 25.0 - half), 25.0 + half);
    CHECK(c >= prev);
    CHECK(c >= 0.0);
    CHECK(c <= 1.0 + 1e-9);
    prev = c;
  }
}

TEST_CASE("integrate solves known integrals to the requested tolerance") {
  CHECK(std::abs(integrate([](double x) { return x * x; }, 0.0, 3.0, 1e-10) - 9.0) < 1e-8);
  CHECK(std::abs(integrate([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-10) - 2.0) < 1e-8);
  // sharply peaked integrand exercises the adaptive refinement
  double peak = integrate([](double x) { return std::exp(-1000.0 * (x - 0.7) * (x - 0.7)); },
                          0.0, 1.0, 1e-10);
  CHECK(std::abs(peak - std::sqrt(M_PI / 1000.0)) < 1e-8);
}

TEST_CASE("model validation rejects broken parameters") {
  BimodalWeibull m;
  m.w1 = 0.7;  // weights no longer sum to one
  CHECK_THROWS_AS(validate(m), ValidationError);
  BimodalWeibull m2;
  m2.k1 = 0.0;
  CHECK_THROWS_AS(validate(m2), ValidationError);
  BimodalWeibull m3;
  m3.c2 = -0.1;
  CHECK_THROWS_AS(validate(m3), ValidationError);
  NormalLoad n{100.0, 0.0};
  CHECK_THROWS_AS(validate(n), ValidationError);
}
