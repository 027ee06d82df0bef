#include <cmath>
#include <limits>

#include "doctest.h"
#include "imbreg/error.hpp"
#include "imbreg/measures.hpp"
#include "imbreg/random.hpp"
#include "oracles.hpp"

using namespace imbreg;

namespace {

RelevanceMeasure random_measure(Rng& rng, int kind) {
  switch (kind) {
    case 0:
      return NormalRelevance(rng.uniform(-5, 5), rng.uniform(0.1, 4));
    case 1: {
      const double lo = rng.uniform(-5, 5);
      return UniformRelevance(lo, lo + rng.uniform(0.1, 5), rng.uniform(0.2, 3));
    }
    case 2: {
      std::vector<double> edges{rng.uniform(-5, 0)};
      std::vector<double> masses;
      const int bins = 1 + static_cast<int>(rng.below(8));
      for (int b = 0; b < bins; ++b) {
        edges.push_back(edges.back() + rng.uniform(0.05, 2));
        masses.push_back(rng.uniform(0, 3));
      }
      masses[0] += 0.1;
      return HistogramRelevance(edges, masses);
    }
    default: {
      std::vector<double> loc{rng.uniform(-5, 0)};
      std::vector<double> masses{rng.uniform(0.1, 2)};
      const int k = static_cast<int>(rng.below(6));
      for (int i = 0; i < k; ++i) {
        loc.push_back(loc.back() + rng.uniform(0.01, 2));
        masses.push_back(rng.uniform(0, 2));
      }
      return PointMassRelevance(loc, masses);
    }
  }
}

bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

TEST_CASE("interval masses") {
  CHECK(measure_interval(NormalRelevance(0, 1), -std::numeric_limits<double>::infinity(), 0.0) ==
        doctest::Approx(0.5).epsilon(1e-15));
  CHECK(measure_interval(NormalRelevance(0, 1), 3, 3) == 0.0);
  CHECK(measure_interval(UniformRelevance(0, 1), 3, 3) == 0.0);
  CHECK(measure_interval(PointMassRelevance({3}, {1}), 3, 3) == 0.0);
  CHECK(measure_interval(HistogramRelevance({0, 1, 2}, {1, 3}), 0, 1) == doctest::Approx(1.0));
  // Lebesgue measure on a bounded interval: natural lengths.
  CHECK(measure_interval(UniformRelevance(0, 10), 2, 5.5) == doctest::Approx(3.5));
  CHECK_THROWS_AS(measure_interval(NormalRelevance(0, 1), 1, 0), UsageError);
}

TEST_CASE("cdf values") {
  CHECK(cdf(NormalRelevance(0, 1), 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(cdf(normalize(UniformRelevance(0, 2)), 1) == doctest::Approx(0.5));
  CHECK(cdf(normalize(PointMassRelevance({1, 2}, {1, 1})), 1.5) == doctest::Approx(0.5));
  CHECK(cdf(PointMassRelevance({1, 2}, {1, 1}), 1.0) == 1.0);
  CHECK(cdf_left(PointMassRelevance({1, 2}, {1, 1}), 1.0) == 0.0);
}

TEST_CASE("normal cdf matches the complementary error function to 1e-12") {
  for (double x = -30; x <= 30; x += 0.173)
    CHECK(std::abs(cdf(NormalRelevance(0.3, 1.7), x) - oracle::normal_cdf(x, 0.3, 1.7)) <= 1e-12);
}

TEST_CASE("normalize") {
  const auto u = normalize(UniformRelevance(0, 2));
  CHECK(total_mass(u) == doctest::Approx(1.0));
  const auto h = std::get<HistogramRelevance>(normalize(HistogramRelevance({0, 1, 2}, {2, 2})));
  CHECK(h.masses()[0] == doctest::Approx(0.5));
  CHECK(h.masses()[1] == doctest::Approx(0.5));
  const auto h2 = std::get<HistogramRelevance>(normalize(HistogramRelevance({0, 1, 2}, {1, 3})));
  CHECK(h2.masses()[0] == doctest::Approx(0.25));
  CHECK(h2.masses()[1] == doctest::Approx(0.75));
  CHECK_THROWS_AS(normalize(HistogramRelevance({0, 1}, {0})), DataError);
}

TEST_CASE("relevance function") {
  CHECK(relevance_function(NormalRelevance(3, 2), 3) == doctest::Approx(1.0));
  CHECK(relevance_function(UniformRelevance(-1, 4), 0.7) == doctest::Approx(1.0));
  CHECK(relevance_function(NormalRelevance(0, 1), 1) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  CHECK(relevance_function(NormalRelevance(0, 1), 1) == doctest::Approx(0.6065).epsilon(1e-4));
  CHECK(relevance_function(HistogramRelevance({0, 1, 3}, {1, 1}), 2) == doctest::Approx(0.5));
  CHECK_THROWS_AS(relevance_function(PointMassRelevance({0}, {1}), 0), DataError);
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(NormalRelevance(0, 0), UsageError);
  CHECK_THROWS_AS(NormalRelevance(0, -1), UsageError);
  CHECK_THROWS_AS(UniformRelevance(1, 1), UsageError);
  CHECK_THROWS_AS(HistogramRelevance({0, 1}, {1, 2}), UsageError);
  CHECK_THROWS_AS(HistogramRelevance({0, 1}, {-1}), UsageError);
  CHECK_THROWS_AS(HistogramRelevance({1, 0}, {1}), UsageError);
  CHECK_THROWS_AS(HistogramRelevance({0, 1}, {std::numeric_limits<double>::infinity()}), UsageError);
  CHECK_THROWS_AS(PointMassRelevance({1, 1}, {1, 1}), UsageError);
  CHECK_THROWS_AS(PointMassRelevance({2, 1}, {1, 1}), UsageError);
}

TEST_CASE("non-negativity, finite additivity and cdf consistency on random measures") {
  Rng rng(11);
  for (int t = 0; t < 400; ++t) {
    const auto m = random_measure(rng, t % 4);
    double a = rng.uniform(-8, 8);
    double b = a + rng.uniform(0, 8);
    if (t % 7 == 0) {
      // Land on atoms and edges too.
      const auto bp = breakpoints(m);
      if (!bp.empty()) a = bp[rng.below(bp.size())];
      b = std::max(a, b);
    }
    const double whole = measure_interval(m, a, b);
    CHECK(whole >= 0.0);
    CHECK(rel_close(whole, cdf(m, b) - cdf(m, a), 1e-9));
    std::vector<double> cuts{a, b};
    const int k = 1 + static_cast<int>(rng.below(6));
    for (int i = 0; i < k; ++i) cuts.push_back(rng.uniform(a, b));
    std::sort(cuts.begin(), cuts.end());
    double parts = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double piece = measure_interval(m, cuts[i], cuts[i + 1]);
      CHECK(piece >= 0.0);
      parts += piece;
    }
    CHECK(rel_close(parts, whole, 1e-9));
  }
}

TEST_CASE("cdf agrees with an independent evaluation") {
  Rng rng(12);
  for (int t = 0; t < 200; ++t) {
    const auto m = normalize(random_measure(rng, t % 4));
    for (int i = 0; i < 20; ++i) {
      const double x = rng.uniform(-10, 10);
      CHECK(std::abs(cdf(m, x) - oracle::measure_cdf(m, x)) <= 1e-12);
    }
  }
}

TEST_CASE("cdf is monotone with limits 0 and total mass") {
  Rng rng(13);
  for (int t = 0; t < 100; ++t) {
    const auto m = random_measure(rng, t % 4);
    double prev = 0.0;
    for (double x = -60; x <= 60; x += 0.37) {
      const double v = cdf(m, x);
      CHECK(v >= prev - 1e-15);
      prev = v;
    }
    CHECK(cdf(m, -1e9) == doctest::Approx(0.0));
    CHECK(cdf(m, 1e9) == doctest::Approx(total_mass(m)));
  }
}

TEST_CASE("normalize is idempotent") {
  Rng rng(14);
  for (int t = 0; t < 100; ++t) {
    const auto once = normalize(random_measure(rng, t % 4));
    const auto twice = normalize(once);
    for (double x = -10; x <= 10; x += 0.25) CHECK(std::abs(cdf(once, x) - cdf(twice, x)) <= 1e-12);
  }
}

TEST_CASE("cdf integral matches closed forms") {
  CHECK(cdf_integral(NormalRelevance(1, 2), -3, 4) ==
        doctest::Approx(oracle::normal_cdf_integral(-3, 4, 1, 2)).epsilon(1e-12));
  CHECK(cdf_integral(NormalRelevance(0, 0.5), -40, 40) ==
        doctest::Approx(oracle::normal_cdf_integral(-40, 40, 0, 0.5)).epsilon(1e-12));
  // Uniform(0,1): integral of x over [0,1] plus 1 over [1,2].
  CHECK(cdf_integral(UniformRelevance(0, 1), 0, 2) == doctest::Approx(1.5));
  CHECK(cdf_integral(PointMassRelevance({1}, {1}), 0, 3) == doctest::Approx(2.0));
}

TEST_CASE("kind names") {
  CHECK(std::string(kind_name(NormalRelevance(0, 1))) == "normal");
  CHECK(std::string(kind_name(PointMassRelevance({0}, {1}))) == "pointmass");
}
