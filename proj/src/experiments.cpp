#include "imbreg/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "imbreg/error.hpp"
#include "imbreg/random.hpp"

namespace imbreg {
namespace {

// Runs fn(0..jobs-1) on a small worker pool. Each job writes only its own
// output slot, so results do not depend on scheduling. The first exception is
// rethrown on the calling thread.
template <typename Fn>
void parallel_for(std::size_t jobs, std::size_t threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, jobs);
  if (threads <= 1) {
    for (std::size_t i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < jobs; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

MeanStd summarize(const std::vector<double>& values) {
  MeanStd out;
  if (values.empty()) return out;
  const auto n = static_cast<double>(values.size());
  for (double v : values) out.mean += v;
  out.mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.std = std::sqrt(ss / n);
  return out;
}

std::vector<int> threshold_labels(const Vector& probabilities) {
  std::vector<int> labels(static_cast<std::size_t>(probabilities.size()));
  for (Eigen::Index i = 0; i < probabilities.size(); ++i)
    labels[static_cast<std::size_t>(i)] = probabilities[i] >= 0.5 ? 1 : 0;
  return labels;
}

std::optional<double> eval_metric(const CorrelationRow& row, const std::string& name) {
  if (name == "weighted_mae") return row.weighted_mae;
  if (name == "precision") return row.precision;
  if (name == "recall") return row.recall;
  if (name == "f1") return row.f1;
  throw UsageError("unknown evaluation metric '" + name + "'");
}

double imbalance_metric(const CorrelationRow& row, const std::string& name) {
  if (name == "kolmogorov") return row.kolmogorov;
  if (name == "wasserstein") return row.wasserstein;
  throw UsageError("unknown imbalance metric '" + name + "'");
}

}  // namespace

std::vector<NormalRelevance> relevance_sweep(const SweepSpec& spec) {
  if (spec.n_points < 2) throw UsageError("a relevance sweep needs at least 2 points");
  std::vector<NormalRelevance> sweep;
  sweep.reserve(spec.n_points);
  const auto last = static_cast<double>(spec.n_points - 1);
  for (std::size_t k = 0; k < spec.n_points; ++k) {
    const double t = static_cast<double>(k) / last;
    const double mean = spec.start.mean + t * (spec.end.mean - spec.start.mean);
    const double std = spec.start.std + t * (spec.end.std - spec.start.std);
    if (!(std > 0.0))
      throw UsageError("relevance sweep point " + std::to_string(k) + " has std <= 0");
    sweep.emplace_back(mean, std);
  }
  return sweep;
}

std::optional<double> pearson(const VectorRef& xs, const VectorRef& ys) {
  if (xs.size() != ys.size()) throw UsageError("pearson: inputs differ in length");
  if (xs.size() < 2) throw UsageError("pearson needs at least two pairs");
  const Vector dx = xs.array() - xs.mean();
  const Vector dy = ys.array() - ys.mean();
  const double sxx = dx.squaredNorm();
  const double syy = dy.squaredNorm();
  if (!(sxx > 0.0) || !(syy > 0.0)) return std::nullopt;
  return std::clamp(dx.dot(dy) / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::optional<MeanStd> endpoint_preset(const std::string& name) {
  if (name == "abalone") return MeanStd{18.0, 5.0};
  if (name == "warfarin") return MeanStd{80.0, 10.0};
  if (name == "parkinson") return MeanStd{50.0, 7.0};
  return std::nullopt;
}

Vector fit_predict(const Dataset& train_set, const Dataset& test_set, MlpConfig config) {
  const auto scaler = FeatureScaler::fit(train_set.features);
  const Eigen::MatrixXd x_train = scaler.transform(train_set.features);
  const Eigen::MatrixXd x_test = scaler.transform(test_set.features);
  config.input_dim = train_set.dim();
  Vector y = train_set.targets;
  if (config.loss == Loss::BinaryCrossEntropy)
    for (std::size_t i = 0; i < train_set.size(); ++i)
      y[static_cast<Eigen::Index>(i)] = train_set.mode_labels[i];
  auto fitted = train(Mlp<double>::init(config, config.seed), x_train, y, config);
  return fitted.model.predict(x_test);
}

DegenerationReport run_degeneration(const DegenerationConfig& config) {
  if (config.imbalance_factors.empty()) throw UsageError("no imbalance factors given");
  if (config.runs < 1) throw UsageError("runs must be at least 1");
  config.data.validate();
  const std::size_t n_factors = config.imbalance_factors.size();
  std::vector<DegenerationRun> results(n_factors * config.runs);

  parallel_for(results.size(), config.threads, [&](std::size_t job) {
    const std::size_t f = job / config.runs;
    const std::size_t run = job % config.runs;
    const std::uint64_t run_seed = config.seed + run;

    BimodalSpec spec = config.data;
    spec.imbalance_factor = config.imbalance_factors[f];
    spec.seed = run_seed;
    const Dataset data = generate_bimodal(spec);
    const auto [train, test] = train_test_split(data, config.test_fraction, derive_seed(run_seed, 1));

    MlpConfig clf = config.mlp;
    clf.loss = Loss::BinaryCrossEntropy;
    clf.seed = derive_seed(run_seed, 2);
    const auto labels = threshold_labels(fit_predict(train, test, clf));
    const auto cm = classification_metrics(test.mode_labels, labels);

    MlpConfig reg = config.mlp;
    reg.loss = Loss::MeanAbsoluteError;
    reg.seed = derive_seed(run_seed, 3);
    const Vector pred = fit_predict(train, test, reg);
    double sum[2] = {0.0, 0.0};
    std::size_t count[2] = {0, 0};
    for (std::size_t i = 0; i < test.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      const int mode = test.mode_labels[i];
      sum[mode] += std::abs(test.targets[k] - pred[k]);
      ++count[mode];
    }
    DegenerationRun& out = results[job];
    out.accuracy = cm.accuracy;
    out.tnr = cm.tnr.value_or(0.0);
    out.tpr = cm.tpr.value_or(0.0);
    out.f1 = cm.f1.value_or(0.0);
    out.mae = (sum[0] + sum[1]) / static_cast<double>(test.size());
    out.mae_mode0 = count[0] ? sum[0] / static_cast<double>(count[0]) : 0.0;
    out.mae_mode1 = count[1] ? sum[1] / static_cast<double>(count[1]) : 0.0;
  });

  DegenerationReport report;
  report.config = config;
  for (std::size_t f = 0; f < n_factors; ++f) {
    DegenerationRow row;
    row.imbalance_factor = config.imbalance_factors[f];
    row.runs.assign(results.begin() + static_cast<std::ptrdiff_t>(f * config.runs),
                    results.begin() + static_cast<std::ptrdiff_t>((f + 1) * config.runs));
    const auto column = [&](double DegenerationRun::*field) {
      std::vector<double> v;
      for (const auto& r : row.runs) v.push_back(r.*field);
      return summarize(v);
    };
    row.accuracy = column(&DegenerationRun::accuracy);
    row.tnr = column(&DegenerationRun::tnr);
    row.tpr = column(&DegenerationRun::tpr);
    row.f1 = column(&DegenerationRun::f1);
    row.mae = column(&DegenerationRun::mae);
    row.mae_mode0 = column(&DegenerationRun::mae_mode0);
    row.mae_mode1 = column(&DegenerationRun::mae_mode1);
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::optional<double> CorrelationReport::r(const std::string& imbalance_metric,
                                           const std::string& eval_metric) const {
  for (const auto& e : pearson)
    if (e.imbalance_metric == imbalance_metric && e.eval_metric == eval_metric) return e.r;
  throw UsageError("no correlation entry for " + imbalance_metric + " / " + eval_metric);
}

CorrelationReport run_correlation(const Dataset& dataset, const CorrelationConfig& config) {
  if (config.runs < 1) throw UsageError("runs must be at least 1");
  const auto [train, test] =
      train_test_split_by_target(dataset, config.test_fraction, derive_seed(config.seed, 0xC0));

  CorrelationReport report;
  report.config = config;
  report.n_train = train.size();
  report.n_test = test.size();
  report.start.mean = train.targets.mean();
  report.start.std =
      std::sqrt((train.targets.array() - report.start.mean).square().mean());
  const auto sweep = relevance_sweep({report.start, config.endpoint, config.n_points});

  const EmpiricalCdf train_cdf(train.targets);
  const RelevanceMeasure train_dist = train_cdf.as_measure();
  std::vector<double> kol(sweep.size());
  std::vector<double> wst(sweep.size());
  for (std::size_t k = 0; k < sweep.size(); ++k) {
    kol[k] = kolmogorov_distance(sweep[k], train_dist);
    wst[k] = wasserstein_distance(sweep[k], train_dist);
  }

  report.rows.resize(sweep.size() * config.runs);
  parallel_for(config.runs, config.threads, [&](std::size_t run) {
    MlpConfig reg = config.mlp;
    reg.loss = Loss::MeanAbsoluteError;
    reg.seed = derive_seed(config.seed + run, 3);
    const PredictionSet predictions(test.targets, fit_predict(train, test, reg));
    for (std::size_t k = 0; k < sweep.size(); ++k) {
      const RelevanceMeasure mu = sweep[k];
      const auto pr =
          regression_precision_recall(predictions, mu, config.t_rel, config.t_err, config.beta);
      CorrelationRow& row = report.rows[k * config.runs + run];
      row.point = k;
      row.run = run;
      row.measure = {sweep[k].mean(), sweep[k].stddev()};
      row.kolmogorov = kol[k];
      row.wasserstein = wst[k];
      row.weighted_mae = weighted_mae(predictions, mu, config.density_bins);
      row.precision = pr.precision;
      row.recall = pr.recall;
      row.f1 = pr.f_beta;
    }
  });

  for (const char* im : kImbalanceMetrics) {
    for (const char* em : kEvalMetrics) {
      std::vector<double> xs;
      std::vector<double> ys;
      PearsonEntry entry{im, em, std::nullopt, 0, 0};
      for (const auto& row : report.rows) {
        const auto y = eval_metric(row, em);
        if (!y) {
          ++entry.excluded_rows;
          continue;
        }
        xs.push_back(imbalance_metric(row, im));
        ys.push_back(*y);
      }
      entry.used_rows = xs.size();
      if (xs.size() >= 2)
        entry.r = pearson(Eigen::Map<const Vector>(xs.data(), static_cast<Eigen::Index>(xs.size())),
                          Eigen::Map<const Vector>(ys.data(), static_cast<Eigen::Index>(ys.size())));
      report.pearson.push_back(std::move(entry));
    }
  }
  return report;
}

AuditReport audit_binned(const VectorRef& targets, const RelevanceMeasure& mu,
                         const std::optional<PredictionSet>& predictions, std::size_t n_bins) {
  if (n_bins < 1) throw UsageError("audit needs at least one bin");
  const Sample sample(targets);
  double lo = sample.min();
  double hi = sample.max();
  if (predictions) {
    lo = std::min(lo, predictions->y_true().minCoeff());
    hi = std::max(hi, predictions->y_true().maxCoeff());
  }
  std::pair<double, double> range{lo, hi};
  std::size_t bins = n_bins;
  if (lo == hi) {
    range = {lo - 0.5, lo + 0.5};
    bins = 1;
  }
  auto histogram = build_histogram(sample, bins, range);
  const RelevanceMeasure mu_n = normalize(mu);
  const EmpiricalCdf ecdf(sample);
  AuditReport report{
      .histogram = histogram,
      .imbalance = imbalance_report(mu_n, ecdf),
      .balance = {},
      .binned = std::nullopt,
      .overall_mae = std::nullopt,
  };
  if (histogram.bins() >= 2) report.balance = mu_balance_check(mu_n, ecdf, histogram.edges());
  if (predictions) {
    report.binned = binned_mae(*predictions, histogram.edges());
    report.overall_mae = overall_mae(*predictions);
  }
  return report;
}

}  // namespace imbreg
