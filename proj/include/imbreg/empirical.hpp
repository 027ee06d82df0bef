#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "imbreg/measures.hpp"

namespace imbreg {

using Vector = Eigen::VectorXd;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

/// Target sample kept in ascending order, with the permutation back to the
/// caller's row order.
class Sample {
public:
  explicit Sample(const VectorRef& values);

  std::size_t size() const noexcept { return sorted_.size(); }
  const std::vector<double>& sorted() const noexcept { return sorted_; }
  /// original_index()[k] is the input row of sorted()[k].
  const std::vector<std::size_t>& original_index() const noexcept { return order_; }
  double min() const noexcept { return sorted_.front(); }
  double max() const noexcept { return sorted_.back(); }

private:
  std::vector<double> sorted_;
  std::vector<std::size_t> order_;
};

/// Right-continuous step function F_n(x) = #{y_i <= x} / n.
class EmpiricalCdf {
public:
  explicit EmpiricalCdf(const Sample& sample);
  explicit EmpiricalCdf(const VectorRef& values);

  std::size_t size() const noexcept { return sorted_.size(); }
  const std::vector<double>& sorted_values() const noexcept { return sorted_; }

  /// Same distribution as a normalized point-mass measure (ties merged).
  PointMassRelevance as_measure() const;

private:
  std::vector<double> sorted_;
};

double ecdf_eval(const EmpiricalCdf& e, double x);

/// Equal-width histogram. Bin i holds edges[i] <= x < edges[i+1]; the last bin
/// also holds its right edge. Values outside the range are only counted in
/// out_of_range().
class HistogramDensity {
public:
  HistogramDensity(std::vector<double> edges, std::vector<std::size_t> counts, std::size_t n);

  const std::vector<double>& edges() const noexcept { return edges_; }
  const std::vector<std::size_t>& counts() const noexcept { return counts_; }
  std::size_t bins() const noexcept { return counts_.size(); }
  /// Total sample size the density is normalized by, in-range or not.
  std::size_t n() const noexcept { return n_; }
  std::size_t in_range() const noexcept;
  std::size_t out_of_range() const noexcept { return n_ - in_range(); }
  double width(std::size_t bin) const { return edges_[bin + 1] - edges_[bin]; }
  double center(std::size_t bin) const { return 0.5 * (edges_[bin] + edges_[bin + 1]); }

  /// Bin of x under the assignment rule above, or nullopt outside the range.
  std::optional<std::size_t> bin_of(double x) const;

private:
  std::vector<double> edges_;
  std::vector<std::size_t> counts_;
  std::size_t n_;
};

/// Equal-width edges over [lo, hi]; the last edge is exactly hi.
std::vector<double> equal_width_edges(double lo, double hi, std::size_t n_bins);

/// Default range is [min, max] of the sample. A degenerate sample (min == max,
/// no range given) yields one bin of width 1 centred on the value.
HistogramDensity build_histogram(const Sample& s, std::size_t n_bins,
                                 std::optional<std::pair<double, double>> range = std::nullopt);

/// counts[bin(y)] / (n * width); zero outside the range.
double density_at(const HistogramDensity& h, double y);

/// The histogram as a relevance measure with mass count/n per bin.
HistogramRelevance as_measure(const HistogramDensity& h);

}  // namespace imbreg
