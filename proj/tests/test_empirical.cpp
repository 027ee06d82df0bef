#include <cmath>

#include "doctest.h"
#include "imbreg/empirical.hpp"
#include "imbreg/error.hpp"
#include "imbreg/random.hpp"
#include "oracles.hpp"

using namespace imbreg;

namespace {
Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}
}  // namespace

TEST_CASE("sample keeps sorted values and the permutation back") {
  const Sample s(vec({3, 1, 2}));
  CHECK(s.sorted() == std::vector<double>{1, 2, 3});
  CHECK(s.original_index() == std::vector<std::size_t>{1, 2, 0});
  CHECK(s.min() == 1);
  CHECK(s.max() == 3);
  CHECK_THROWS_AS(Sample(Vector(0)), DataError);
  CHECK_THROWS_AS(Sample(vec({1, NAN})), DataError);
}

TEST_CASE("ecdf evaluation") {
  const EmpiricalCdf e(vec({1, 2, 3}));
  CHECK(ecdf_eval(e, 2) == doctest::Approx(2.0 / 3));
  CHECK(ecdf_eval(e, 0) == 0.0);
  CHECK(ecdf_eval(e, 3) == 1.0);
  CHECK(ecdf_eval(EmpiricalCdf(vec({1, 1, 2})), 1) == doctest::Approx(2.0 / 3));
}

TEST_CASE("ecdf as point masses merges ties") {
  const auto m = EmpiricalCdf(vec({2, 1, 1, 5})).as_measure();
  CHECK(m.locations() == std::vector<double>{1, 2, 5});
  CHECK(m.masses()[0] == doctest::Approx(0.5));
  CHECK(m.masses()[1] == doctest::Approx(0.25));
}

TEST_CASE("histogram assignment rule") {
  auto h = build_histogram(Sample(vec({0, 0.5, 1})), 2);
  CHECK(h.counts() == std::vector<std::size_t>{1, 2});
  h = build_histogram(Sample(vec({0, 1})), 1);
  CHECK(h.counts() == std::vector<std::size_t>{2});
  h = build_histogram(Sample(vec({5})), 7);
  CHECK(h.counts() == std::vector<std::size_t>{1});
  CHECK(h.bins() == 1);
  CHECK(h.width(0) == doctest::Approx(1.0));
  CHECK(h.center(0) == doctest::Approx(5.0));
}

TEST_CASE("histogram with an explicit range counts outsiders separately") {
  const auto h = build_histogram(Sample(vec({-1, 0.2, 0.7, 3})), 2, std::pair{0.0, 1.0});
  CHECK(h.counts() == std::vector<std::size_t>{1, 1});
  CHECK(h.in_range() == 2);
  CHECK(h.out_of_range() == 2);
  CHECK_THROWS(build_histogram(Sample(vec({1})), 0));
  CHECK_THROWS(build_histogram(Sample(vec({1})), 2, std::pair{1.0, 1.0}));
}

TEST_CASE("density values") {
  const HistogramDensity flat({0, 0.5, 1}, {5, 5}, 10);
  CHECK(density_at(flat, 0.1) == doctest::Approx(1.0));
  CHECK(density_at(flat, 0.9) == doctest::Approx(1.0));
  CHECK(density_at(flat, 1.0) == doctest::Approx(1.0));
  CHECK(density_at(flat, -0.1) == 0.0);
  CHECK(density_at(flat, 1.5) == 0.0);
  const HistogramDensity spike({0, 0.5, 1}, {4, 0}, 4);
  CHECK(density_at(spike, 0.25) == doctest::Approx(2.0));
}

TEST_CASE("histogram mass conservation") {
  Rng rng(21);
  for (int t = 0; t < 50; ++t) {
    Vector v(200);
    for (auto& x : v) x = rng.normal(0, 2);
    const Sample s(v);
    const auto h = build_histogram(s, 1 + rng.below(30), std::pair{-3.0, 3.0});
    double by_bins = 0.0, midpoint = 0.0;
    for (std::size_t b = 0; b < h.bins(); ++b) {
      by_bins += density_at(h, h.center(b)) * h.width(b);
      midpoint += density_at(h, h.center(b)) * h.width(b);
    }
    const double expected = static_cast<double>(h.in_range()) / static_cast<double>(h.n());
    CHECK(std::abs(by_bins - expected) <= 1e-12);
    CHECK(std::abs(midpoint - expected) <= 1e-12);
    const auto m = as_measure(h);
    CHECK(total_mass(m) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("ecdf converges to the normal cdf") {
  int within = 0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    Rng rng(1000 + static_cast<std::uint64_t>(t));
    Vector v(10000);
    for (auto& x : v) x = rng.normal();
    const EmpiricalCdf e(v);
    const auto& s = e.sorted_values();
    double sup = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double f = oracle::normal_cdf(s[i], 0, 1);
      sup = std::max({sup, std::abs(f - static_cast<double>(i + 1) / 1e4),
                      std::abs(f - static_cast<double>(i) / 1e4)});
    }
    if (sup < 0.03) ++within;
  }
  CHECK(within >= 99);
}

TEST_CASE("equal width edges end exactly at hi") {
  const auto e = equal_width_edges(0.1, 0.7, 3);
  REQUIRE(e.size() == 4);
  CHECK(e.front() == 0.1);
  CHECK(e.back() == 0.7);
}
