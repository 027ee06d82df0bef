#include "imbreg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "imbreg/error.hpp"
#include "imbreg/random.hpp"

namespace imbreg {
namespace {

// Marsaglia-Tsang; shape >= 1.
double gamma_draw(Rng& rng, double shape, double scale) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
  }
}

}  // namespace

Dataset make_dataset(Matrix features, Vector targets) {
  if (features.rows() != targets.size())
    throw UsageError("dataset: feature rows and targets differ in length");
  Dataset d{std::move(features), std::move(targets), {}};
  d.mode_labels.resize(d.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    d.mode_labels[i] = d.targets[static_cast<Eigen::Index>(i)] >= 0.5 ? 1 : 0;
  return d;
}

Dataset subset(const Dataset& d, const std::vector<std::size_t>& rows) {
  Dataset out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), d.features.cols());
  out.targets.resize(static_cast<Eigen::Index>(rows.size()));
  out.mode_labels.resize(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto r = static_cast<Eigen::Index>(rows[k]);
    const auto kk = static_cast<Eigen::Index>(k);
    out.features.row(kk) = d.features.row(r);
    out.targets[kk] = d.targets[r];
    out.mode_labels[k] = d.mode_labels[rows[k]];
  }
  return out;
}

std::size_t BimodalSpec::n_majority() const {
  return static_cast<std::size_t>(std::llround(imbalance_factor * static_cast<double>(n_minority)));
}

void BimodalSpec::validate() const {
  if (n_minority < 1) throw UsageError("n_minority must be at least 1");
  if (!std::isfinite(imbalance_factor) || imbalance_factor < 1.0)
    throw UsageError("imbalance factor must be >= 1");
  if (!(mode_std > 0.0) || !std::isfinite(mode_std)) throw UsageError("mode_std must be > 0");
  if (feature_dim < 1) throw UsageError("feature_dim must be at least 1");
  if (!(feature_cluster_spread > 0.0) || !std::isfinite(feature_cluster_spread))
    throw UsageError("feature cluster spread must be > 0");
}

Dataset generate_bimodal(const BimodalSpec& spec) {
  spec.validate();
  const std::size_t counts[2] = {spec.n_majority(), spec.n_minority};
  const auto n = static_cast<Eigen::Index>(counts[0] + counts[1]);
  const auto dim = static_cast<Eigen::Index>(spec.feature_dim);
  Matrix features(n, dim);
  Vector targets(n);
  Eigen::Index row = 0;
  for (int mode = 0; mode < 2; ++mode) {
    Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(mode)));
    const double center = static_cast<double>(mode);
    for (std::size_t i = 0; i < counts[mode]; ++i, ++row) {
      for (Eigen::Index j = 0; j < dim; ++j)
        features(row, j) = rng.normal(center, spec.feature_cluster_spread);
      targets[row] = rng.normal(center, spec.mode_std);
    }
  }
  return make_dataset(std::move(features), std::move(targets));
}

ClassificationData to_classification(const Dataset& d) { return {d.features, d.mode_labels}; }

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split_indices(
    const std::vector<int>& strata, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw UsageError("test fraction must lie strictly between 0 and 1");
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < strata.size(); ++i) groups[strata[i]].push_back(i);
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  Rng rng(seed);
  for (auto& [label, rows] : groups) {
    if (rows.size() < 2)
      throw DataError("stratum " + std::to_string(label) + " has fewer than 2 samples");
    rng.shuffle(std::span<std::size_t>(rows));
    auto n_test = static_cast<std::size_t>(
        std::llround(test_fraction * static_cast<double>(rows.size())));
    n_test = std::clamp<std::size_t>(n_test, 1, rows.size() - 1);
    test.insert(test.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_test));
    train.insert(train.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_test), rows.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {std::move(train), std::move(test)};
}

std::pair<Dataset, Dataset> train_test_split(const Dataset& d, double test_fraction,
                                             std::uint64_t seed) {
  auto [train, test] = stratified_split_indices(d.mode_labels, test_fraction, seed);
  return {subset(d, train), subset(d, test)};
}

std::pair<Dataset, Dataset> train_test_split_by_target(const Dataset& d, double test_fraction,
                                                       std::uint64_t seed, std::size_t groups) {
  if (groups < 1) throw UsageError("need at least one target group");
  const Sample sample(d.targets);
  std::vector<int> strata(d.size(), 0);
  // Rank-based quantile groups; ties may straddle a boundary, which is harmless.
  for (std::size_t k = 0; k < sample.size(); ++k)
    strata[sample.original_index()[k]] = static_cast<int>(k * groups / sample.size());
  auto [train, test] = stratified_split_indices(strata, test_fraction, seed);
  return {subset(d, train), subset(d, test)};
}

Dataset generate_skewed(std::size_t n, std::uint64_t seed) {
  if (n < 10) throw UsageError("skewed dataset needs at least 10 rows");
  // Feature j saturates as scale_j * (1 - exp(-age / tau_j)) with additive noise.
  constexpr int kFeatures = 7;
  constexpr double kTau[kFeatures] = {5.0, 6.0, 7.0, 8.0, 6.5, 9.0, 5.5};
  constexpr double kScale[kFeatures] = {0.8, 0.65, 0.25, 2.5, 1.1, 0.55, 0.75};
  constexpr double kNoise[kFeatures] = {0.09, 0.08, 0.04, 0.45, 0.2, 0.11, 0.11};
  Rng rng(derive_seed(seed, 0x5EED));
  Matrix features(static_cast<Eigen::Index>(n), kFeatures);
  Vector targets(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < targets.size(); ++i) {
    const double age = 4.1 + gamma_draw(rng, 3.25, 1.79);
    targets[i] = std::max(1.0, std::round(age));
    for (int j = 0; j < kFeatures; ++j)
      features(i, j) = kScale[j] * (1.0 - std::exp(-age / kTau[j])) + rng.normal(0.0, kNoise[j]);
  }
  return make_dataset(std::move(features), std::move(targets));
}

}  // namespace imbreg
