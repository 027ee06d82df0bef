#include <cmath>

#include "doctest.h"
#include "imbreg/error.hpp"
#include "imbreg/imbalance.hpp"
#include "imbreg/random.hpp"
#include "oracles.hpp"

using namespace imbreg;

namespace {

Vector quantiles(double lo, double hi, int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * (i + 0.5) / n;
  return v;
}

Vector constant(double c, int n) { return Vector::Constant(n, c); }

std::vector<double> as_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

HistogramRelevance random_histogram(Rng& rng) {
  std::vector<double> edges{rng.uniform(-3, 0)};
  std::vector<double> masses;
  const int bins = 2 + static_cast<int>(rng.below(8));
  for (int b = 0; b < bins; ++b) {
    edges.push_back(edges.back() + rng.uniform(0.1, 1.5));
    masses.push_back(rng.uniform(0, 1));
  }
  masses[0] += 0.2;
  return std::get<HistogramRelevance>(normalize(HistogramRelevance(edges, masses)));
}

}  // namespace

TEST_CASE("kolmogorov examples") {
  const RelevanceMeasure u01 = UniformRelevance(0, 1);
  for (int n : {10, 100, 1000})
    CHECK(kolmogorov_distance(u01, EmpiricalCdf(quantiles(0, 1, n))) ==
          doctest::Approx(0.5 / n).epsilon(1e-9));
  CHECK(kolmogorov_distance(PointMassRelevance({0}, {1}), EmpiricalCdf(constant(1, 5))) == 1.0);
  const int n = 4000;
  CHECK(std::abs(kolmogorov_distance(u01, EmpiricalCdf(quantiles(0.5, 1.5, n))) - 0.5) <=
        2.0 / std::sqrt(n));
}

TEST_CASE("wasserstein examples") {
  const auto sample = quantiles(-1, 2, 37);
  const EmpiricalCdf e(sample);
  CHECK(wasserstein_distance(e.as_measure(), e) <= 1e-10);
  for (double c : {0.5, 2.0, 17.0})
    CHECK(std::abs(wasserstein_distance(PointMassRelevance({0}, {1}), EmpiricalCdf(constant(c, 9))) - c) <= 1e-9);
  CHECK(std::abs(wasserstein_distance(UniformRelevance(0, 1), EmpiricalCdf(quantiles(1, 2, 1000))) - 1.0) <= 0.01);
}

TEST_CASE("wasserstein shift against a trapezoid oracle") {
  const auto sample = quantiles(1, 2, 1000);
  const auto s = as_std(sample);
  const RelevanceMeasure mu = UniformRelevance(0, 1);
  const int grid = 100000;
  double trap = 0.0;
  const double lo = 0.0, hi = 2.0, h = (hi - lo) / grid;
  for (int i = 0; i < grid; ++i) {
    const double a = lo + i * h, b = a + h;
    trap += 0.5 * h * (std::abs(oracle::measure_cdf(mu, a) - oracle::ecdf(s, a)) +
                       std::abs(oracle::measure_cdf(mu, b) - oracle::ecdf(s, b)));
  }
  CHECK(wasserstein_distance(mu, EmpiricalCdf(sample)) == doctest::Approx(trap).epsilon(1e-3));
}

TEST_CASE("normal wasserstein against a point mass uses the closed-form integral") {
  // W(N(m, s), delta_c) = int_{-inf}^{c} Phi + int_c^{inf} (1 - Phi).
  const double m = 0.4, sd = 1.3, c = 1.1;
  const double left = oracle::normal_cdf_integral(m - 40 * sd, c, m, sd);
  const double right = (m + 40 * sd - c) - oracle::normal_cdf_integral(c, m + 40 * sd, m, sd);
  const auto r = imbalance_report(NormalRelevance(m, sd), EmpiricalCdf(constant(c, 3)));
  CHECK(std::abs(r.wasserstein - (left + right)) <= r.wasserstein_truncation_bound + 1e-10);
  CHECK(r.wasserstein_truncation_bound < 1e-4);
}

TEST_CASE("unnormalized input is rejected") {
  const EmpiricalCdf e(quantiles(0, 1, 10));
  CHECK_THROWS_AS(kolmogorov_distance(UniformRelevance(0, 2), e), DataError);
  CHECK_THROWS_AS(wasserstein_distance(HistogramRelevance({0, 1}, {3}), e), DataError);
}

TEST_CASE("minimal imbalance: zero exactly when the cdfs agree") {
  Rng rng(31);
  for (int t = 0; t < 30; ++t) {
    Vector v(1 + rng.below(50));
    for (auto& x : v) x = std::round(rng.normal(0, 3) * 2) / 2;
    const EmpiricalCdf e(v);
    const RelevanceMeasure m = e.as_measure();
    CHECK(kolmogorov_distance(m, e) <= 1e-12);
    CHECK(wasserstein_distance(m, e) <= 1e-12);
    const auto h = random_histogram(rng);
    CHECK(kolmogorov_distance(h, h) == 0.0);
    CHECK(wasserstein_distance(h, h) <= 1e-12);
  }
  // Differ on an interval of positive length.
  const RelevanceMeasure a = UniformRelevance(0, 1);
  const RelevanceMeasure b = UniformRelevance(0, 1.01, 1 / 1.01);
  CHECK(kolmogorov_distance(a, b) > 0.0);
  CHECK(wasserstein_distance(a, b) > 0.0);
}

TEST_CASE("kolmogorov approaches its upper bound 1") {
  const RelevanceMeasure measures[] = {NormalRelevance(0, 1), UniformRelevance(-2, 3, 0.2),
                                       HistogramRelevance({0, 1, 4}, {0.3, 0.7})};
  for (const auto& mu : measures) {
    for (int n : {10, 100, 1000}) {
      double x = 0.0;
      while (cdf(mu, x) < 1.0 - 1.0 / n) x += 0.01;
      const double d = kolmogorov_distance(mu, EmpiricalCdf(constant(x, 1)));
      CHECK(d >= 1.0 - 1.0 / n - 1e-12);
      CHECK(d <= 1.0);
    }
  }
}

TEST_CASE("wasserstein grows at least linearly with the displacement") {
  const RelevanceMeasure measures[] = {NormalRelevance(0, 1), UniformRelevance(0, 1),
                                       HistogramRelevance({-1, 0, 2}, {0.5, 0.5})};
  for (const auto& mu : measures)
    for (double eps : {1.0, 10.0, 100.0}) {
      const double x0 = std::get_if<NormalRelevance>(&mu) ? 0.0 : 1.0;
      const double d = wasserstein_distance(mu, EmpiricalCdf(constant(x0 + eps, 1)));
      CHECK(d >= 0.9 * eps);
    }
}

TEST_CASE("both metrics are symmetric on histogram pairs") {
  Rng rng(32);
  for (int t = 0; t < 100; ++t) {
    const auto a = random_histogram(rng);
    const auto b = random_histogram(rng);
    CHECK(kolmogorov_distance(a, b) == doctest::Approx(kolmogorov_distance(b, a)).epsilon(1e-12));
    CHECK(wasserstein_distance(a, b) == doctest::Approx(wasserstein_distance(b, a)).epsilon(1e-9));
  }
}

TEST_CASE("histogram measures against random samples match a 1e6-point brute force") {
  Rng rng(33);
  for (int t = 0; t < 12; ++t) {
    const RelevanceMeasure mu = random_histogram(rng);
    std::vector<double> s(50);
    for (auto& x : s) x = rng.normal(0, 1.5);
    const EmpiricalCdf e(Eigen::Map<const Vector>(s.data(), 50));
    CHECK(std::abs(kolmogorov_distance(mu, e) - oracle::brute_kolmogorov(mu, s)) <= 1e-6);
    const double wo = oracle::brute_wasserstein(mu, s);
    CHECK(std::abs(wasserstein_distance(mu, e) - wo) <= 1e-4 * wo);
  }
}

TEST_CASE("normal and point-mass measures match the brute force too") {
  Rng rng(34);
  for (int t = 0; t < 12; ++t) {
    const RelevanceMeasure mu = t % 2 ? RelevanceMeasure(NormalRelevance(rng.uniform(-2, 2), rng.uniform(0.3, 2)))
                                      : normalize(PointMassRelevance({-1, 0, 0.5, 2}, {1, 2, 1, 3}));
    std::vector<double> s(40);
    for (auto& x : s) x = std::round(rng.normal(0, 1.5) * 2) / 2;
    const EmpiricalCdf e(Eigen::Map<const Vector>(s.data(), 40));
    CHECK(std::abs(kolmogorov_distance(mu, e) - oracle::brute_kolmogorov(mu, s)) <= 1e-6);
    const double wo = oracle::brute_wasserstein(mu, s);
    CHECK(std::abs(wasserstein_distance(mu, e) - wo) <= 1e-4 * wo);
  }
}

TEST_CASE("measure-vs-measure kolmogorov handles density crossings") {
  // N(0,1) vs N(0,2): sup at the crossing of the cdfs' difference derivative.
  const RelevanceMeasure a = NormalRelevance(0, 1), b = NormalRelevance(0, 2);
  double brute = 0.0;
  for (double x = -10; x <= 10; x += 1e-5)
    brute = std::max(brute, std::abs(oracle::normal_cdf(x, 0, 1) - oracle::normal_cdf(x, 0, 2)));
  CHECK(kolmogorov_distance(a, b) == doctest::Approx(brute).epsilon(1e-9));
  // Normal vs uniform.
  const RelevanceMeasure u = UniformRelevance(-1, 1, 0.5);
  brute = 0.0;
  for (double x = -10; x <= 10; x += 1e-5)
    brute = std::max(brute, std::abs(oracle::normal_cdf(x, 0, 1) - oracle::measure_cdf(u, x)));
  CHECK(kolmogorov_distance(a, u) == doctest::Approx(brute).epsilon(1e-9));
}

TEST_CASE("imbalance report carries the truncation bound") {
  const auto r = imbalance_report(NormalRelevance(0, 1), EmpiricalCdf(quantiles(-1, 1, 20)));
  CHECK(r.n_samples == 20);
  CHECK(r.wasserstein_truncation_bound > 0.0);
  CHECK(r.wasserstein_truncation_bound < 1e-4);
  const auto r2 = imbalance_report(UniformRelevance(0, 1), EmpiricalCdf(quantiles(0, 1, 20)));
  CHECK(r2.wasserstein_truncation_bound == 0.0);
}

TEST_CASE("balance check examples") {
  const std::vector<double> edges{0, 1, 2};
  // mu = P_Y: always balanced with epsilon 0.
  const RelevanceMeasure mu = HistogramRelevance({0, 1, 2, 3}, {0.2, 0.5, 0.3});
  CHECK(mu_balance_check(mu, mu, {0, 0.5, 1, 2, 3}, 0.0).balanced);
  // Uniform(0,2) vs a point mass at 0.5.
  const auto r = mu_balance_check(UniformRelevance(0, 2), PointMassRelevance({0.5}, {1}), edges, 0.0);
  CHECK_FALSE(r.balanced);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].s == 0);
  CHECK(r.violations[0].s_prime == 1);
  CHECK(r.violations[0].p_s == doctest::Approx(1.0));
  // Count measure on two classes, uniform class distribution.
  CHECK(mu_balance_check(PointMassRelevance({0, 1}, {1, 1}), PointMassRelevance({0, 1}, {0.5, 0.5}),
                         {-0.5, 0.5, 1.5}, 0.0)
            .balanced);
  CHECK_THROWS(mu_balance_check(mu, mu, {0, 1}, 0.0));
}

TEST_CASE("balance check against an empirical sample uses 2/sqrt(n) by default") {
  Vector v(100);
  for (int i = 0; i < 100; ++i) v[i] = i < 80 ? 0.5 : 1.5;
  const auto r = mu_balance_check(UniformRelevance(0, 2), EmpiricalCdf(v), {0, 1, 2});
  CHECK(r.epsilon == doctest::Approx(0.2));
  CHECK(r.epsilon_is_default);
  CHECK(r.balanced);  // equal relevance cells are never compared strictly
  const auto strict = mu_balance_check(HistogramRelevance({0, 1, 2}, {1, 3}), EmpiricalCdf(v), {0, 1, 2}, 0.0);
  CHECK_FALSE(strict.balanced);
  CHECK(strict.balanced == strict.violations.empty());
}

TEST_CASE("classification imbalance factor") {
  CHECK(classification_imbalance_factor(std::vector<int>{0, 0, 1, 1}) == 1.0);
  std::vector<int> labels(2000, 0);
  labels.resize(2100, 1);
  CHECK(classification_imbalance_factor(labels) == 20.0);
  CHECK(classification_imbalance_factor(std::vector<int>{0, 0, 0, 1}) == 3.0);
  CHECK_THROWS_AS(classification_imbalance_factor(std::vector<int>{1, 1}), DataError);
}
