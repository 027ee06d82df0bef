#include "imbreg/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "imbreg/error.hpp"
#include "imbreg/quadrature.hpp"

namespace imbreg {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double normal_cdf(double mean, double stddev, double x) {
  return 0.5 * std::erfc(-(x - mean) / (stddev * std::numbers::sqrt2));
}

// Index of the bin containing x under [e_i, e_{i+1}), last bin closed; -1 if outside.
std::ptrdiff_t bin_index(const std::vector<double>& edges, double x) {
  if (!(x >= edges.front()) || x > edges.back()) return -1;
  if (x == edges.back()) return static_cast<std::ptrdiff_t>(edges.size()) - 2;
  const auto it = std::upper_bound(edges.begin(), edges.end(), x);
  return std::distance(edges.begin(), it) - 1;
}

double histogram_cdf(const HistogramRelevance& h, double x) {
  const auto& e = h.edges();
  const auto& w = h.masses();
  if (x <= e.front()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (x >= e[i + 1]) {
      acc += w[i];
    } else {
      acc += w[i] * (x - e[i]) / (e[i + 1] - e[i]);
      break;
    }
  }
  return acc;
}

// Integral over [a, b] of the histogram CDF, assuming a <= b.
double histogram_cdf_integral(const HistogramRelevance& h, double a, double b) {
  const auto& e = h.edges();
  const auto& w = h.masses();
  double result = 0.0;
  double below = 0.0;  // mass of all bins left of bin i
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double lo = std::max(a, e[i]);
    const double hi = std::min(b, e[i + 1]);
    if (hi > lo) {
      // F(x) = below + w_i (x - e_i) / width on this bin
      const double width = e[i + 1] - e[i];
      const double slope = w[i] / width;
      const double u0 = lo - e[i];
      const double u1 = hi - e[i];
      result += below * (hi - lo) + 0.5 * slope * (u1 * u1 - u0 * u0);
    }
    below += w[i];
  }
  if (b > e.back()) result += below * (b - std::max(a, e.back()));
  return result;
}

double normal_cdf_integral(const NormalRelevance& n, double a, double b) {
  // Beyond 10 standard deviations the CDF is 0 or 1 to double precision.
  const double lo_cut = n.mean() - 10.0 * n.stddev();
  const double hi_cut = n.mean() + 10.0 * n.stddev();
  double result = 0.0;
  if (b > hi_cut) {
    result += b - std::max(a, hi_cut);
    b = std::max(a, hi_cut);
  }
  a = std::max(a, lo_cut);
  if (b <= a) return result;
  const auto& rule = gauss_legendre_64();
  const auto panels = static_cast<int>(std::ceil((b - a) / n.stddev()));
  const double width = (b - a) / panels;
  const auto f = [&](double x) { return normal_cdf(n.mean(), n.stddev(), x); };
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double hi = (p + 1 == panels) ? b : lo + width;
    result += rule.integrate(f, lo, hi);
  }
  return result;
}

}  // namespace

NormalRelevance::NormalRelevance(double mean, double stddev) : mean_(mean), stddev_(stddev) {
  if (!std::isfinite(mean) || !std::isfinite(stddev) || !(stddev > 0.0))
    throw UsageError("normal relevance needs a finite mean and std > 0");
}

UniformRelevance::UniformRelevance(double lo, double hi, double density)
    : lo_(lo), hi_(hi), density_(density) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
    throw UsageError("uniform relevance needs finite lo < hi");
  if (!std::isfinite(density) || density < 0.0)
    throw UsageError("uniform relevance needs a finite non-negative density");
}

HistogramRelevance::HistogramRelevance(std::vector<double> edges, std::vector<double> masses)
    : edges_(std::move(edges)), masses_(std::move(masses)) {
  if (edges_.size() < 2 || masses_.size() != edges_.size() - 1)
    throw UsageError("histogram relevance needs len(masses) == len(edges) - 1 >= 1");
  if (!all_finite(edges_) || !all_finite(masses_))
    throw UsageError("histogram relevance values must be finite");
  if (std::adjacent_find(edges_.begin(), edges_.end(), std::greater_equal<>()) != edges_.end())
    throw UsageError("histogram edges must be strictly ascending");
  if (std::any_of(masses_.begin(), masses_.end(), [](double w) { return w < 0.0; }))
    throw UsageError("histogram masses must be non-negative");
}

PointMassRelevance::PointMassRelevance(std::vector<double> locations, std::vector<double> masses)
    : locations_(std::move(locations)), masses_(std::move(masses)) {
  if (locations_.empty() || locations_.size() != masses_.size())
    throw UsageError("point-mass relevance needs one mass per location");
  if (!all_finite(locations_) || !all_finite(masses_))
    throw UsageError("point-mass relevance values must be finite");
  if (std::adjacent_find(locations_.begin(), locations_.end(), std::greater_equal<>()) !=
      locations_.end())
    throw UsageError("point-mass locations must be strictly ascending");
  if (std::any_of(masses_.begin(), masses_.end(), [](double w) { return w < 0.0; }))
    throw UsageError("point masses must be non-negative");
}

double total_mass(const RelevanceMeasure& m) {
  return std::visit(
      overloaded{
          [](const NormalRelevance&) { return 1.0; },
          [](const UniformRelevance& u) { return u.density() * (u.hi() - u.lo()); },
          [](const HistogramRelevance& h) {
            return std::accumulate(h.masses().begin(), h.masses().end(), 0.0);
          },
          [](const PointMassRelevance& p) {
            return std::accumulate(p.masses().begin(), p.masses().end(), 0.0);
          },
      },
      m);
}

bool is_normalized(const RelevanceMeasure& m, double tol) {
  return std::abs(total_mass(m) - 1.0) <= tol;
}

double cdf(const RelevanceMeasure& m, double x) {
  return std::visit(
      overloaded{
          [x](const NormalRelevance& n) { return normal_cdf(n.mean(), n.stddev(), x); },
          [x](const UniformRelevance& u) {
            return u.density() * std::clamp(x - u.lo(), 0.0, u.hi() - u.lo());
          },
          [x](const HistogramRelevance& h) { return histogram_cdf(h, x); },
          [x](const PointMassRelevance& p) {
            const auto end = std::upper_bound(p.locations().begin(), p.locations().end(), x);
            const auto k = std::distance(p.locations().begin(), end);
            return std::accumulate(p.masses().begin(), p.masses().begin() + k, 0.0);
          },
      },
      m);
}

double cdf_left(const RelevanceMeasure& m, double x) {
  if (const auto* p = std::get_if<PointMassRelevance>(&m)) {
    const auto end = std::lower_bound(p->locations().begin(), p->locations().end(), x);
    const auto k = std::distance(p->locations().begin(), end);
    return std::accumulate(p->masses().begin(), p->masses().begin() + k, 0.0);
  }
  return cdf(m, x);
}

double measure_interval(const RelevanceMeasure& m, double a, double b) {
  if (!(a <= b)) throw UsageError("measure_interval requires a <= b");
  if (a == b) return 0.0;
  if (const auto* h = std::get_if<HistogramRelevance>(&m)) {
    // Sum bin overlaps directly; avoids cancellation in F(b) - F(a).
    const auto& e = h->edges();
    double acc = 0.0;
    for (std::size_t i = 0; i < h->masses().size(); ++i) {
      const double lo = std::max(a, e[i]);
      const double hi = std::min(b, e[i + 1]);
      if (hi > lo) acc += h->masses()[i] * (hi - lo) / (e[i + 1] - e[i]);
    }
    return acc;
  }
  if (const auto* n = std::get_if<NormalRelevance>(&m)) {
    // Use the upper tail when both ends are right of the mean.
    if (a > n->mean()) {
      const auto upper = [&](double x) {
        return 0.5 * std::erfc((x - n->mean()) / (n->stddev() * std::numbers::sqrt2));
      };
      return std::max(0.0, upper(a) - upper(b));
    }
  }
  return std::max(0.0, cdf(m, b) - cdf(m, a));
}

RelevanceMeasure normalize(const RelevanceMeasure& m) {
  const double total = total_mass(m);
  if (!std::isfinite(total) || !(total > 0.0))
    throw DataError("relevance measure has zero or non-finite total mass and cannot be normalized");
  return std::visit(
      overloaded{
          [](const NormalRelevance& n) -> RelevanceMeasure { return n; },
          [](const UniformRelevance& u) -> RelevanceMeasure {
            return UniformRelevance(u.lo(), u.hi(), 1.0 / (u.hi() - u.lo()));
          },
          [total](const HistogramRelevance& h) -> RelevanceMeasure {
            auto w = h.masses();
            for (auto& x : w) x /= total;
            return HistogramRelevance(h.edges(), std::move(w));
          },
          [total](const PointMassRelevance& p) -> RelevanceMeasure {
            auto w = p.masses();
            for (auto& x : w) x /= total;
            return PointMassRelevance(p.locations(), std::move(w));
          },
      },
      m);
}

bool has_density(const RelevanceMeasure& m) noexcept {
  return !std::holds_alternative<PointMassRelevance>(m);
}

double density(const RelevanceMeasure& m, double x) {
  return std::visit(
      overloaded{
          [x](const NormalRelevance& n) {
            const double z = (x - n.mean()) / n.stddev();
            return std::exp(-0.5 * z * z) / (n.stddev() * std::sqrt(2.0 * std::numbers::pi));
          },
          [x](const UniformRelevance& u) {
            return (x >= u.lo() && x <= u.hi()) ? u.density() : 0.0;
          },
          [x](const HistogramRelevance& h) {
            const auto i = bin_index(h.edges(), x);
            if (i < 0) return 0.0;
            const auto k = static_cast<std::size_t>(i);
            return h.masses()[k] / (h.edges()[k + 1] - h.edges()[k]);
          },
          [](const PointMassRelevance&) -> double {
            throw DataError("point-mass relevance has no density");
          },
      },
      m);
}

double max_density(const RelevanceMeasure& m) {
  return std::visit(
      overloaded{
          [](const NormalRelevance& n) {
            return 1.0 / (n.stddev() * std::sqrt(2.0 * std::numbers::pi));
          },
          [](const UniformRelevance& u) { return u.density(); },
          [](const HistogramRelevance& h) {
            double best = 0.0;
            for (std::size_t i = 0; i < h.masses().size(); ++i)
              best = std::max(best, h.masses()[i] / (h.edges()[i + 1] - h.edges()[i]));
            return best;
          },
          [](const PointMassRelevance&) -> double {
            throw DataError("point-mass relevance has no density");
          },
      },
      m);
}

double relevance_function(const RelevanceMeasure& m, double x) {
  if (const auto* n = std::get_if<NormalRelevance>(&m)) {
    const double z = (x - n->mean()) / n->stddev();
    return std::exp(-0.5 * z * z);
  }
  const double top = max_density(m);
  if (!(top > 0.0)) throw DataError("relevance measure has zero density everywhere");
  return std::min(1.0, density(m, x) / top);
}

std::vector<double> breakpoints(const RelevanceMeasure& m) {
  return std::visit(
      overloaded{
          [](const NormalRelevance&) { return std::vector<double>{}; },
          [](const UniformRelevance& u) { return std::vector<double>{u.lo(), u.hi()}; },
          [](const HistogramRelevance& h) { return h.edges(); },
          [](const PointMassRelevance& p) { return p.locations(); },
      },
      m);
}

std::pair<double, double> effective_support(const RelevanceMeasure& m, double tail_eps) {
  return std::visit(
      overloaded{
          [tail_eps](const NormalRelevance& n) {
            // Smallest z with P(Z > z) < tail_eps, by bisection on erfc.
            double lo = 0.0;
            double hi = 40.0;
            for (int i = 0; i < 200; ++i) {
              const double mid = 0.5 * (lo + hi);
              if (0.5 * std::erfc(mid / std::numbers::sqrt2) < tail_eps)
                hi = mid;
              else
                lo = mid;
            }
            return std::pair{n.mean() - hi * n.stddev(), n.mean() + hi * n.stddev()};
          },
          [](const UniformRelevance& u) { return std::pair{u.lo(), u.hi()}; },
          [](const HistogramRelevance& h) { return std::pair{h.edges().front(), h.edges().back()}; },
          [](const PointMassRelevance& p) {
            return std::pair{p.locations().front(), p.locations().back()};
          },
      },
      m);
}

double cdf_integral(const RelevanceMeasure& m, double a, double b) {
  if (!(a <= b)) throw UsageError("cdf_integral requires a <= b");
  return std::visit(
      overloaded{
          [a, b](const NormalRelevance& n) { return normal_cdf_integral(n, a, b); },
          [a, b](const UniformRelevance& u) {
            return histogram_cdf_integral(
                HistogramRelevance({u.lo(), u.hi()}, {u.density() * (u.hi() - u.lo())}), a, b);
          },
          [a, b](const HistogramRelevance& h) { return histogram_cdf_integral(h, a, b); },
          [a, b](const PointMassRelevance& p) {
            // Piecewise constant: sum F over each gap between atoms.
            double result = 0.0;
            double level = 0.0;
            double from = a;
            for (std::size_t i = 0; i < p.locations().size(); ++i) {
              const double x = p.locations()[i];
              if (x > a) {
                const double to = std::min(x, b);
                if (to > from) result += level * (to - from);
                from = std::max(from, to);
                if (x >= b) return result;
              }
              level += p.masses()[i];
            }
            if (b > from) result += level * (b - from);
            return result;
          },
      },
      m);
}

const char* kind_name(const RelevanceMeasure& m) noexcept {
  return std::visit(overloaded{
                        [](const NormalRelevance&) { return "normal"; },
                        [](const UniformRelevance&) { return "uniform"; },
                        [](const HistogramRelevance&) { return "histogram"; },
                        [](const PointMassRelevance&) { return "pointmass"; },
                    },
                    m);
}

}  // namespace imbreg
