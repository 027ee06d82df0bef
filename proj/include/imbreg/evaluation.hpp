#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "imbreg/empirical.hpp"
#include "imbreg/measures.hpp"

namespace imbreg {

/// Paired true targets and predictions of equal, non-zero length.
class PredictionSet {
public:
  PredictionSet(Vector y_true, Vector y_pred);

  const Vector& y_true() const noexcept { return y_true_; }
  const Vector& y_pred() const noexcept { return y_pred_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(y_true_.size()); }

private:
  Vector y_true_;
  Vector y_pred_;
};

/// Per-bin MAE over bins of the true target. Empty bins carry nullopt.
struct BinnedReport {
  std::vector<double> edges;
  std::vector<std::optional<double>> mae;
  std::vector<std::size_t> counts;

  std::size_t bins() const noexcept { return counts.size(); }
  double center(std::size_t bin) const { return 0.5 * (edges[bin] + edges[bin + 1]); }
};

struct RegPRReport {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f_beta;
  double t_rel = 0.5;
  double t_err = 10.0;
  double beta = 1.0;
};

struct ClassificationMetrics {
  double accuracy = 0.0;
  std::optional<double> tpr;
  std::optional<double> tnr;
  std::optional<double> precision;
  std::optional<double> f1;
};

double overall_mae(const PredictionSet& p);

/// MAE_j over samples whose TRUE target lies in bin j (edges[j] <= y < edges[j+1],
/// last bin closed). Throws DataError if a true target falls outside the edges.
BinnedReport binned_mae(const PredictionSet& p, const std::vector<double>& edges);

/// Weighted MAE with w_i = p_mu(y_i) / p_Y(y_i), p_Y estimated by an n_bins
/// histogram of the true targets over their own range. Normalized by sum(w).
double weighted_mae(const PredictionSet& p, const RelevanceMeasure& mu, std::size_t n_bins = 20);

using RelevanceFn = std::function<double(double)>;

/// Thresholded precision/recall for regression. A sample is accurate when
/// |y - pred| <= t_err; recall runs over samples with phi(y) >= t_rel,
/// precision over samples with phi(pred) >= t_rel.
RegPRReport regression_precision_recall(const PredictionSet& p, const RelevanceFn& phi,
                                        double t_rel = 0.5, double t_err = 10.0,
                                        double beta = 1.0);
RegPRReport regression_precision_recall(const PredictionSet& p, const RelevanceMeasure& mu,
                                        double t_rel = 0.5, double t_err = 10.0,
                                        double beta = 1.0);

/// (1 + beta^2) P R / (beta^2 P + R); 0 when P = R = 0.
double f_score(double precision, double recall, double beta = 1.0);

/// Binary labels in {0, 1}; 1 is the positive class. Rates without support
/// are nullopt.
ClassificationMetrics classification_metrics(std::span<const int> y_true,
                                             std::span<const int> y_pred);

}  // namespace imbreg
