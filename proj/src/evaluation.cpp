#include "imbreg/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "imbreg/error.hpp"

namespace imbreg {
namespace {

double log_density(const RelevanceMeasure& m, double x) {
  if (const auto* n = std::get_if<NormalRelevance>(&m)) {
    const double z = (x - n->mean()) / n->stddev();
    return -0.5 * z * z - std::log(n->stddev() * std::sqrt(2.0 * std::numbers::pi));
  }
  const double d = density(m, x);
  return d > 0.0 ? std::log(d) : -std::numeric_limits<double>::infinity();
}

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

PredictionSet::PredictionSet(Vector y_true, Vector y_pred)
    : y_true_(std::move(y_true)), y_pred_(std::move(y_pred)) {
  if (y_true_.size() != y_pred_.size())
    throw UsageError("prediction set: y_true and y_pred differ in length");
  if (y_true_.size() < 1) throw UsageError("prediction set must not be empty");
  if (!y_true_.allFinite() || !y_pred_.allFinite())
    throw DataError("prediction set contains non-finite values");
}

double overall_mae(const PredictionSet& p) {
  return (p.y_true() - p.y_pred()).cwiseAbs().mean();
}

BinnedReport binned_mae(const PredictionSet& p, const std::vector<double>& edges) {
  const HistogramDensity grid(edges, std::vector<std::size_t>(edges.size() - 1, 0), 0);
  std::vector<double> sums(grid.bins(), 0.0);
  std::vector<std::size_t> counts(grid.bins(), 0);
  for (Eigen::Index i = 0; i < p.y_true().size(); ++i) {
    const auto bin = grid.bin_of(p.y_true()[i]);
    if (!bin)
      throw DataError("binned_mae: true target " + std::to_string(p.y_true()[i]) +
                      " lies outside the bin edges");
    sums[*bin] += std::abs(p.y_true()[i] - p.y_pred()[i]);
    ++counts[*bin];
  }
  BinnedReport report{edges, {}, counts};
  report.mae.reserve(counts.size());
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] == 0)
      report.mae.emplace_back(std::nullopt);
    else
      report.mae.emplace_back(sums[j] / static_cast<double>(counts[j]));
  }
  return report;
}

double weighted_mae(const PredictionSet& p, const RelevanceMeasure& mu, std::size_t n_bins) {
  if (!has_density(mu)) throw DataError("weighted MAE needs a relevance measure with a density");
  const Sample targets(p.y_true());
  const auto hist = build_histogram(targets, n_bins);
  const auto n = static_cast<Eigen::Index>(p.size());
  // Weights in the log domain so far-away relevance measures do not underflow.
  Vector log_w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double y = p.y_true()[i];
    log_w[i] = log_density(mu, y) - std::log(density_at(hist, y));
  }
  const double top = log_w.maxCoeff();
  if (!std::isfinite(top))
    throw DataError("relevance measure has zero density at every true target");
  const Vector w = (log_w.array() - top).exp().matrix();
  const Vector err = (p.y_true() - p.y_pred()).cwiseAbs();
  return w.dot(err) / w.sum();
}

RegPRReport regression_precision_recall(const PredictionSet& p, const RelevanceFn& phi,
                                        double t_rel, double t_err, double beta) {
  if (!(t_rel >= 0.0 && t_rel <= 1.0)) throw UsageError("relevance threshold must lie in [0, 1]");
  if (!(t_err > 0.0)) throw UsageError("error threshold must be positive");
  if (!(beta > 0.0)) throw UsageError("beta must be positive");
  std::size_t relevant_true = 0;
  std::size_t relevant_true_hits = 0;
  std::size_t relevant_pred = 0;
  std::size_t relevant_pred_hits = 0;
  for (Eigen::Index i = 0; i < p.y_true().size(); ++i) {
    const double y = p.y_true()[i];
    const double yhat = p.y_pred()[i];
    const bool accurate = std::abs(y - yhat) <= t_err;
    if (phi(y) >= t_rel) {
      ++relevant_true;
      if (accurate) ++relevant_true_hits;
    }
    if (phi(yhat) >= t_rel) {
      ++relevant_pred;
      if (accurate) ++relevant_pred_hits;
    }
  }
  RegPRReport report;
  report.t_rel = t_rel;
  report.t_err = t_err;
  report.beta = beta;
  report.precision = ratio(relevant_pred_hits, relevant_pred);
  report.recall = ratio(relevant_true_hits, relevant_true);
  if (report.precision && report.recall)
    report.f_beta = f_score(*report.precision, *report.recall, beta);
  return report;
}

RegPRReport regression_precision_recall(const PredictionSet& p, const RelevanceMeasure& mu,
                                        double t_rel, double t_err, double beta) {
  return regression_precision_recall(
      p, [&mu](double y) { return relevance_function(mu, y); }, t_rel, t_err, beta);
}

double f_score(double precision, double recall, double beta) {
  if (!(precision >= 0.0 && precision <= 1.0 && recall >= 0.0 && recall <= 1.0))
    throw UsageError("precision and recall must lie in [0, 1]");
  if (!(beta > 0.0)) throw UsageError("beta must be positive");
  if (precision == 0.0 && recall == 0.0) return 0.0;
  const double b2 = beta * beta;
  return (1.0 + b2) * precision * recall / (b2 * precision + recall);
}

ClassificationMetrics classification_metrics(std::span<const int> y_true,
                                             std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size()) throw UsageError("label arrays differ in length");
  if (y_true.empty()) throw UsageError("label arrays must not be empty");
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i];
    const int q = y_pred[i];
    if ((t != 0 && t != 1) || (q != 0 && q != 1)) throw DataError("labels must be 0 or 1");
    if (t == 1 && q == 1) ++tp;
    if (t == 0 && q == 0) ++tn;
    if (t == 0 && q == 1) ++fp;
    if (t == 1 && q == 0) ++fn;
  }
  ClassificationMetrics m;
  m.accuracy = static_cast<double>(tp + tn) / static_cast<double>(y_true.size());
  m.tpr = ratio(tp, tp + fn);
  m.tnr = ratio(tn, tn + fp);
  m.precision = ratio(tp, tp + fp);
  // 2TP / (2TP + FP + FN): equals the harmonic mean of precision and TPR
  // and stays defined (as 0) when nothing is predicted positive.
  m.f1 = ratio(2 * tp, 2 * tp + fp + fn);
  return m;
}

}  // namespace imbreg
