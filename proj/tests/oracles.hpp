#pragma once
// Independent reference computations for the test suites. Nothing here calls
// the library's CDF, distance or integration code; measures are only read
// through their accessors.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <variant>
#include <vector>

#include "imbreg/measures.hpp"

namespace oracle {

inline double normal_cdf(double x, double mean, double sd) {
  return 0.5 * std::erfc(-(x - mean) / (sd * std::numbers::sqrt2));
}

/// Closed-form integral of the standard normal CDF scaled to N(mean, sd):
/// antiderivative sd * (z Phi(z) + phi(z)).
inline double normal_cdf_integral(double a, double b, double mean, double sd) {
  const auto anti = [&](double x) {
    const double z = (x - mean) / sd;
    const double phi = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    return sd * (z * 0.5 * std::erfc(-z / std::numbers::sqrt2) + phi);
  };
  return anti(b) - anti(a);
}

/// Total mass, computed from the raw parameters.
inline double mass(const imbreg::RelevanceMeasure& m) {
  using namespace imbreg;
  if (std::holds_alternative<NormalRelevance>(m)) return 1.0;
  if (const auto* u = std::get_if<UniformRelevance>(&m)) return u->density() * (u->hi() - u->lo());
  if (const auto* h = std::get_if<HistogramRelevance>(&m)) {
    double s = 0.0;
    for (double v : h->masses()) s += v;
    return s;
  }
  double s = 0.0;
  for (double v : std::get<PointMassRelevance>(m).masses()) s += v;
  return s;
}

/// Normalized CDF; `left` gives the limit from the left.
inline double measure_cdf(const imbreg::RelevanceMeasure& m, double x, bool left = false) {
  using namespace imbreg;
  const double total = mass(m);
  if (const auto* n = std::get_if<NormalRelevance>(&m)) return normal_cdf(x, n->mean(), n->stddev());
  if (const auto* u = std::get_if<UniformRelevance>(&m)) {
    if (x <= u->lo()) return 0.0;
    if (x >= u->hi()) return 1.0;
    return (x - u->lo()) / (u->hi() - u->lo());
  }
  if (const auto* h = std::get_if<HistogramRelevance>(&m)) {
    double acc = 0.0;
    const auto& e = h->edges();
    for (std::size_t i = 0; i + 1 < e.size(); ++i) {
      if (x >= e[i + 1])
        acc += h->masses()[i];
      else if (x > e[i])
        acc += h->masses()[i] * (x - e[i]) / (e[i + 1] - e[i]);
    }
    return acc / total;
  }
  const auto& p = std::get<PointMassRelevance>(m);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.locations().size(); ++i)
    if (left ? p.locations()[i] < x : p.locations()[i] <= x) acc += p.masses()[i];
  return acc / total;
}

inline double ecdf(const std::vector<double>& sample, double x, bool left = false) {
  std::size_t c = 0;
  for (double v : sample)
    if (left ? v < x : v <= x) ++c;
  return static_cast<double>(c) / static_cast<double>(sample.size());
}

/// Sorted-sample ECDF in O(log n).
struct SortedEcdf {
  std::vector<double> s;
  explicit SortedEcdf(std::vector<double> v) : s(std::move(v)) { std::sort(s.begin(), s.end()); }
  double operator()(double x, bool left = false) const {
    const auto it = left ? std::lower_bound(s.begin(), s.end(), x)
                         : std::upper_bound(s.begin(), s.end(), x);
    return static_cast<double>(it - s.begin()) / static_cast<double>(s.size());
  }
};

/// Points where either CDF can jump or bend.
inline std::vector<double> special_points(const imbreg::RelevanceMeasure& m,
                                          const std::vector<double>& sample) {
  using namespace imbreg;
  std::vector<double> pts(sample);
  if (const auto* u = std::get_if<UniformRelevance>(&m)) {
    pts.push_back(u->lo());
    pts.push_back(u->hi());
  } else if (const auto* h = std::get_if<HistogramRelevance>(&m)) {
    pts.insert(pts.end(), h->edges().begin(), h->edges().end());
  } else if (const auto* p = std::get_if<PointMassRelevance>(&m)) {
    pts.insert(pts.end(), p->locations().begin(), p->locations().end());
  }
  return pts;
}

/// Integration window outside which both CDFs agree (0 or 1) to double precision.
inline std::pair<double, double> window(const imbreg::RelevanceMeasure& m,
                                        const std::vector<double>& sample) {
  auto pts = special_points(m, sample);
  double lo = *std::min_element(pts.begin(), pts.end());
  double hi = *std::max_element(pts.begin(), pts.end());
  if (const auto* n = std::get_if<imbreg::NormalRelevance>(&m)) {
    lo = std::min(lo, n->mean() - 12.0 * n->stddev());
    hi = std::max(hi, n->mean() + 12.0 * n->stddev());
  }
  return {lo, hi};
}

/// Sup of |F_mu - F_n| over a uniform grid of `grid` points plus both one-sided
/// limits at every special point.
inline double brute_kolmogorov(const imbreg::RelevanceMeasure& m, const std::vector<double>& sample,
                               std::size_t grid = 1'000'000) {
  const SortedEcdf f(sample);
  const auto [lo, hi] = window(m, sample);
  double best = 0.0;
  for (double x : special_points(m, sample)) {
    best = std::max(best, std::abs(measure_cdf(m, x) - f(x)));
    best = std::max(best, std::abs(measure_cdf(m, x, true) - f(x, true)));
  }
  if (std::holds_alternative<imbreg::PointMassRelevance>(m)) grid = std::min<std::size_t>(grid, 20000);
  for (std::size_t i = 0; i <= grid; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid);
    best = std::max(best, std::abs(measure_cdf(m, x) - f(x)));
  }
  return best;
}

/// Midpoint rule for the integral of |F_mu - F_n| on a grid refined with all
/// special points, so the step function is constant on every cell.
inline double brute_wasserstein(const imbreg::RelevanceMeasure& m, const std::vector<double>& sample,
                                std::size_t grid = 1'000'000) {
  const SortedEcdf f(sample);
  const auto [lo, hi] = window(m, sample);
  if (std::holds_alternative<imbreg::PointMassRelevance>(m)) grid = std::min<std::size_t>(grid, 2000);
  std::vector<double> pts = special_points(m, sample);
  pts.reserve(pts.size() + grid + 1);
  for (std::size_t i = 0; i <= grid; ++i)
    pts.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid));
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double mid = 0.5 * (pts[i] + pts[i + 1]);
    sum += std::abs(measure_cdf(m, mid) - f(mid)) * (pts[i + 1] - pts[i]);
  }
  return sum;
}

}  // namespace oracle
