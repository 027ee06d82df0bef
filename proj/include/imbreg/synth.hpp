#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "imbreg/empirical.hpp"

namespace imbreg {

using Matrix = Eigen::MatrixXd;

/// Rows of features with a real target. mode_labels[i] == (targets[i] >= 0.5).
struct Dataset {
  Matrix features;
  Vector targets;
  std::vector<int> mode_labels;

  std::size_t size() const noexcept { return static_cast<std::size_t>(targets.size()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(features.cols()); }
};

/// Builds a dataset and derives mode labels from the targets.
Dataset make_dataset(Matrix features, Vector targets);

/// Rows `rows` of `d`, in the given order.
Dataset subset(const Dataset& d, const std::vector<std::size_t>& rows);

/// Two target modes at 0 and 1. Mode 1 keeps n_minority rows; mode 0 gets
/// round(imbalance_factor * n_minority) rows.
struct BimodalSpec {
  std::size_t n_minority = 500;
  double imbalance_factor = 1.0;
  double mode_std = 0.02;
  std::size_t feature_dim = 4;
  double feature_cluster_spread = 0.75;
  std::uint64_t seed = 0;

  std::size_t n_majority() const;
  void validate() const;
};

/// Mode m contributes features ~ N(m * 1, spread^2 I) and targets ~ N(m, mode_std^2).
/// Rows are ordered mode 0 first, then mode 1. Each mode draws from its own
/// seed stream.
Dataset generate_bimodal(const BimodalSpec& spec);

struct ClassificationData {
  Matrix features;
  std::vector<int> labels;
};

/// The mode-prediction task: labels are the mode labels (target >= 0.5 is 1).
ClassificationData to_classification(const Dataset& d);

/// Seeded shuffle within each stratum, then the first round(fraction * size)
/// rows of every stratum go to the test side. Returned row indices are sorted.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split_indices(
    const std::vector<int>& strata, double test_fraction, std::uint64_t seed);

/// (train, test), stratified on mode labels.
std::pair<Dataset, Dataset> train_test_split(const Dataset& d, double test_fraction,
                                             std::uint64_t seed);

/// (train, test), stratified on `groups` target quantile groups; for
/// continuous targets where mode labels carry no information.
std::pair<Dataset, Dataset> train_test_split_by_target(const Dataset& d, double test_fraction,
                                                       std::uint64_t seed,
                                                       std::size_t groups = 5);

/// Right-skewed, integer-valued regression data shaped like shellfish age
/// records (mode near 9, sparse tail up to ~30). Seven features saturate as
/// the target grows, so the tail is hard to predict. Stand-in when no real
/// CSV is at hand.
Dataset generate_skewed(std::size_t n, std::uint64_t seed);

}  // namespace imbreg
