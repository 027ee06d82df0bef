#pragma once

#include <utility>
#include <variant>
#include <vector>

namespace imbreg {

// Relevance measures: finite, non-negative, additive set functions on the real
// target line. Every query is phrased over half-open intervals (a, b], so
// adjacent intervals partition exactly. Objects are immutable once built.

/// Normal distribution N(mean, stddev^2); always total mass 1.
class NormalRelevance {
public:
  NormalRelevance(double mean, double stddev);

  double mean() const noexcept { return mean_; }
  double stddev() const noexcept { return stddev_; }

private:
  double mean_;
  double stddev_;
};

/// Constant density on [lo, hi]. With the default density of 1 this is the
/// Lebesgue measure restricted to the interval: (a, b] gets its overlap length.
class UniformRelevance {
public:
  UniformRelevance(double lo, double hi, double density = 1.0);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double density() const noexcept { return density_; }

private:
  double lo_;
  double hi_;
  double density_;
};

/// Piecewise-constant density: masses[i] is spread uniformly over
/// [edges[i], edges[i+1]].
class HistogramRelevance {
public:
  HistogramRelevance(std::vector<double> edges, std::vector<double> masses);

  const std::vector<double>& edges() const noexcept { return edges_; }
  const std::vector<double>& masses() const noexcept { return masses_; }

private:
  std::vector<double> edges_;
  std::vector<double> masses_;
};

/// Atoms at strictly increasing locations. Unit masses give the count measure.
class PointMassRelevance {
public:
  PointMassRelevance(std::vector<double> locations, std::vector<double> masses);

  const std::vector<double>& locations() const noexcept { return locations_; }
  const std::vector<double>& masses() const noexcept { return masses_; }

private:
  std::vector<double> locations_;
  std::vector<double> masses_;
};

using RelevanceMeasure =
    std::variant<NormalRelevance, UniformRelevance, HistogramRelevance, PointMassRelevance>;

double total_mass(const RelevanceMeasure& m);

/// True when the total mass is 1 within `tol`.
bool is_normalized(const RelevanceMeasure& m, double tol = 1e-9);

/// mu((a, b]). Requires a <= b; an empty interval has mass 0.
double measure_interval(const RelevanceMeasure& m, double a, double b);

/// mu((-inf, x]).
double cdf(const RelevanceMeasure& m, double x);

/// mu((-inf, x)), the left limit of cdf at x.
double cdf_left(const RelevanceMeasure& m, double x);

/// Rescales to total mass 1. Throws DataError for zero or non-finite mass.
RelevanceMeasure normalize(const RelevanceMeasure& m);

/// Whether the measure is absolutely continuous (everything but PointMass).
bool has_density(const RelevanceMeasure& m) noexcept;

/// Density with respect to Lebesgue measure. Throws DataError for PointMass.
double density(const RelevanceMeasure& m, double x);

/// Largest value the density attains.
double max_density(const RelevanceMeasure& m);

/// Density rescaled so its maximum is 1; values lie in [0, 1].
double relevance_function(const RelevanceMeasure& m, double x);

/// Points where the CDF is not smooth: atoms, histogram edges, interval ends.
std::vector<double> breakpoints(const RelevanceMeasure& m);

/// Interval [L, U] outside which each tail carries less than `tail_eps` of the
/// normalized mass. Exact support for bounded measures.
std::pair<double, double> effective_support(const RelevanceMeasure& m, double tail_eps);

/// Integral of the CDF over [a, b]. Closed form for the piecewise measures;
/// composite Gauss-Legendre for the normal.
double cdf_integral(const RelevanceMeasure& m, double a, double b);

/// Human-readable kind tag: "normal", "uniform", "histogram", "pointmass".
const char* kind_name(const RelevanceMeasure& m) noexcept;

}  // namespace imbreg
