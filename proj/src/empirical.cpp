#include "imbreg/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "imbreg/error.hpp"

namespace imbreg {

Sample::Sample(const VectorRef& values) {
  if (values.size() < 1) throw DataError("sample must contain at least one value");
  if (!values.allFinite()) throw DataError("sample contains non-finite values");
  const auto n = static_cast<std::size_t>(values.size());
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
    return values[static_cast<Eigen::Index>(a)] < values[static_cast<Eigen::Index>(b)];
  });
  sorted_.reserve(n);
  for (auto i : order_) sorted_.push_back(values[static_cast<Eigen::Index>(i)]);
}

EmpiricalCdf::EmpiricalCdf(const Sample& sample) : sorted_(sample.sorted()) {}

EmpiricalCdf::EmpiricalCdf(const VectorRef& values) : EmpiricalCdf(Sample(values)) {}

PointMassRelevance EmpiricalCdf::as_measure() const {
  std::vector<double> locations;
  std::vector<double> masses;
  const double unit = 1.0 / static_cast<double>(sorted_.size());
  for (double v : sorted_) {
    if (!locations.empty() && locations.back() == v) {
      masses.back() += unit;
    } else {
      locations.push_back(v);
      masses.push_back(unit);
    }
  }
  return PointMassRelevance(std::move(locations), std::move(masses));
}

double ecdf_eval(const EmpiricalCdf& e, double x) {
  const auto& v = e.sorted_values();
  const auto k = std::distance(v.begin(), std::upper_bound(v.begin(), v.end(), x));
  return static_cast<double>(k) / static_cast<double>(v.size());
}

HistogramDensity::HistogramDensity(std::vector<double> edges, std::vector<std::size_t> counts,
                                   std::size_t n)
    : edges_(std::move(edges)), counts_(std::move(counts)), n_(n) {
  if (edges_.size() < 2 || counts_.size() + 1 != edges_.size())
    throw UsageError("histogram needs len(counts) == len(edges) - 1 >= 1");
  if (std::adjacent_find(edges_.begin(), edges_.end(), std::greater_equal<>()) != edges_.end())
    throw UsageError("histogram edges must be strictly ascending");
  if (in_range() > n_) throw UsageError("histogram counts exceed the sample size");
}

std::size_t HistogramDensity::in_range() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), std::size_t{0});
}

std::optional<std::size_t> HistogramDensity::bin_of(double x) const {
  if (!(x >= edges_.front()) || x > edges_.back()) return std::nullopt;
  if (x == edges_.back()) return counts_.size() - 1;
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
  return static_cast<std::size_t>(std::distance(edges_.begin(), it) - 1);
}

std::vector<double> equal_width_edges(double lo, double hi, std::size_t n_bins) {
  if (n_bins < 1) throw UsageError("histogram needs at least one bin");
  if (!(lo < hi)) throw UsageError("histogram range needs lo < hi");
  std::vector<double> edges(n_bins + 1);
  const double step = (hi - lo) / static_cast<double>(n_bins);
  for (std::size_t i = 0; i < n_bins; ++i) edges[i] = lo + step * static_cast<double>(i);
  edges[n_bins] = hi;
  return edges;
}

HistogramDensity build_histogram(const Sample& s, std::size_t n_bins,
                                 std::optional<std::pair<double, double>> range) {
  if (n_bins < 1) throw UsageError("histogram needs at least one bin");
  std::vector<double> edges;
  if (range) {
    edges = equal_width_edges(range->first, range->second, n_bins);
  } else if (s.min() == s.max()) {
    edges = {s.min() - 0.5, s.min() + 0.5};
  } else {
    edges = equal_width_edges(s.min(), s.max(), n_bins);
  }
  HistogramDensity shape(edges, std::vector<std::size_t>(edges.size() - 1, 0), s.size());
  std::vector<std::size_t> counts(edges.size() - 1, 0);
  for (double v : s.sorted())
    if (auto bin = shape.bin_of(v)) ++counts[*bin];
  return HistogramDensity(std::move(edges), std::move(counts), s.size());
}

double density_at(const HistogramDensity& h, double y) {
  const auto bin = h.bin_of(y);
  if (!bin) return 0.0;
  return static_cast<double>(h.counts()[*bin]) /
         (static_cast<double>(h.n()) * h.width(*bin));
}

HistogramRelevance as_measure(const HistogramDensity& h) {
  std::vector<double> masses;
  masses.reserve(h.bins());
  for (auto c : h.counts()) masses.push_back(static_cast<double>(c) / static_cast<double>(h.n()));
  return HistogramRelevance(h.edges(), std::move(masses));
}

}  // namespace imbreg
