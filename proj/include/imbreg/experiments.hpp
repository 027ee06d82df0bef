#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "imbreg/empirical.hpp"
#include "imbreg/evaluation.hpp"
#include "imbreg/imbalance.hpp"
#include "imbreg/learner.hpp"
#include "imbreg/measures.hpp"
#include "imbreg/synth.hpp"

namespace imbreg {

// ---------------------------------------------------------------------------
// Relevance sweeps and correlation
// ---------------------------------------------------------------------------

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

/// Straight line in (mean, std) space from the data statistics to an endpoint.
struct SweepSpec {
  MeanStd start;
  MeanStd end;
  std::size_t n_points = 20;
};

/// Point k is Normal(lerp(start, end, k / (n - 1))).
std::vector<NormalRelevance> relevance_sweep(const SweepSpec& spec);

/// Sample Pearson correlation; nullopt when either side has zero variance.
std::optional<double> pearson(const VectorRef& xs, const VectorRef& ys);

/// Named sweep endpoints for the public benchmark datasets.
std::optional<MeanStd> endpoint_preset(const std::string& name);

// ---------------------------------------------------------------------------
// Shared training helper
// ---------------------------------------------------------------------------

/// Z-scores features on `train`, fits an MLP and returns predictions on
/// `test`. For BCE the labels are the mode labels and predictions are
/// probabilities.
Vector fit_predict(const Dataset& train, const Dataset& test, MlpConfig config);

// ---------------------------------------------------------------------------
// Degeneration vs imbalance factor
// ---------------------------------------------------------------------------

struct DegenerationConfig {
  std::vector<double> imbalance_factors{1.0, 3.0, 10.0, 20.0};
  std::size_t runs = 10;
  BimodalSpec data;  // imbalance_factor and seed are overridden per job
  MlpConfig mlp;     // input_dim, loss and seed are overridden per job
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
  std::size_t threads = 0;  // 0: hardware concurrency
};

/// Metrics of one (imbalance factor, run) job.
struct DegenerationRun {
  double accuracy = 0.0;
  double tnr = 0.0;
  double tpr = 0.0;
  double f1 = 0.0;
  double mae = 0.0;
  double mae_mode0 = 0.0;
  double mae_mode1 = 0.0;
};

struct DegenerationRow {
  double imbalance_factor = 1.0;
  MeanStd accuracy, tnr, tpr, f1, mae, mae_mode0, mae_mode1;
  std::vector<DegenerationRun> runs;
};

struct DegenerationReport {
  DegenerationConfig config;
  std::vector<DegenerationRow> rows;
};

/// Per factor and run: generate, split (stratified on mode), train a BCE
/// classifier and an MAE regressor on the same split, score the test side.
/// Spreads are population standard deviations over runs.
DegenerationReport run_degeneration(const DegenerationConfig& config);

// ---------------------------------------------------------------------------
// Imbalance metric vs evaluation metric correlation
// ---------------------------------------------------------------------------

struct CorrelationConfig {
  MeanStd endpoint;
  std::size_t runs = 10;
  std::size_t n_points = 20;
  MlpConfig mlp;
  double test_fraction = 0.2;
  double t_rel = 0.5;
  double t_err = 10.0;
  double beta = 1.0;
  int k = 1;  // recorded for provenance, not used by the thresholded P/R
  std::size_t density_bins = 20;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
};

struct CorrelationRow {
  std::size_t point = 0;
  std::size_t run = 0;
  MeanStd measure;
  double kolmogorov = 0.0;
  double wasserstein = 0.0;
  double weighted_mae = 0.0;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

inline constexpr std::array<const char*, 2> kImbalanceMetrics{"kolmogorov", "wasserstein"};
inline constexpr std::array<const char*, 4> kEvalMetrics{"weighted_mae", "precision", "recall",
                                                         "f1"};

struct PearsonEntry {
  std::string imbalance_metric;
  std::string eval_metric;
  std::optional<double> r;
  std::size_t used_rows = 0;
  std::size_t excluded_rows = 0;  // rows where the evaluation metric was undefined
};

struct CorrelationReport {
  CorrelationConfig config;
  MeanStd start;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::vector<CorrelationRow> rows;  // n_points * runs, point-major
  std::vector<PearsonEntry> pearson;

  std::optional<double> r(const std::string& imbalance_metric, const std::string& eval_metric) const;
};

/// One fixed stratified split; one regressor per run. Imbalance scores use the
/// training targets, evaluation metrics the test predictions. Pearson pools all
/// (sweep point, run) rows.
CorrelationReport run_correlation(const Dataset& dataset, const CorrelationConfig& config);

// ---------------------------------------------------------------------------
// Binned audit
// ---------------------------------------------------------------------------

struct AuditReport {
  HistogramDensity histogram;
  ImbalanceReport imbalance;
  BalanceCheckResult balance;
  std::optional<BinnedReport> binned;
  std::optional<double> overall_mae;
};

/// Histogram and imbalance scores of `targets` against `mu` (normalized
/// internally); with predictions also the per-bin MAE on the same bin edges.
/// The edges span every target seen, in `targets` and in `predictions`.
AuditReport audit_binned(const VectorRef& targets, const RelevanceMeasure& mu,
                         const std::optional<PredictionSet>& predictions,
                         std::size_t n_bins = 20);

}  // namespace imbreg
