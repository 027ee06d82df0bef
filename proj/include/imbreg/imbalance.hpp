#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "imbreg/empirical.hpp"
#include "imbreg/measures.hpp"

namespace imbreg {

inline constexpr double kDefaultTailEps = 1e-6;

/// Imbalance of a target sample with respect to a relevance measure.
struct ImbalanceReport {
  double kolmogorov = 0.0;
  double wasserstein = 0.0;
  /// Upper bound on the mass-tail truncation error of `wasserstein`.
  double wasserstein_truncation_bound = 0.0;
  std::size_t n_samples = 0;
  RelevanceMeasure measure;
};

/// sup_x |F_mu(x) - F_nu(x)|. Exact: the supremum is taken over both one-sided
/// limits at every breakpoint and at every interior point where the densities
/// cross. Both arguments must be normalized.
double kolmogorov_distance(const RelevanceMeasure& mu, const RelevanceMeasure& nu);
double kolmogorov_distance(const RelevanceMeasure& mu, const EmpiricalCdf& e);

/// Integral of |F_mu - F_nu| over [L, U], where each tail of a normal measure
/// beyond [L, U] carries less than `tail_eps` mass and [L, U] covers every
/// breakpoint. Piecewise-linear stretches are integrated in closed form; normal
/// CDFs with composite 64-point Gauss-Legendre, split at sign changes.
double wasserstein_distance(const RelevanceMeasure& mu, const RelevanceMeasure& nu,
                            double tail_eps = kDefaultTailEps);
double wasserstein_distance(const RelevanceMeasure& mu, const EmpiricalCdf& e,
                            double tail_eps = kDefaultTailEps);

ImbalanceReport imbalance_report(const RelevanceMeasure& mu, const EmpiricalCdf& e,
                                 double tail_eps = kDefaultTailEps);

/// One ordered pair of partition cells (S, S') breaking
/// mu(S) <= mu(S') - eps  =>  P(S) <= P(S') + eps.
struct BalanceViolation {
  std::size_t s = 0;        // cell index of S; cell i is (edges[i], edges[i+1]]
  std::size_t s_prime = 0;  // cell index of S'
  double mu_s = 0.0;
  double mu_s_prime = 0.0;
  double p_s = 0.0;
  double p_s_prime = 0.0;
};

struct BalanceCheckResult {
  bool balanced = true;
  std::vector<BalanceViolation> violations;
  double epsilon = 0.0;
  bool epsilon_is_default = false;
  std::vector<double> edges;
};

/// mu-balance restricted to the cells of a finite partition, all ordered pairs.
/// With an empirical P the default tolerance is 2/sqrt(n).
BalanceCheckResult mu_balance_check(const RelevanceMeasure& mu, const EmpiricalCdf& p,
                                    const std::vector<double>& edges,
                                    std::optional<double> epsilon = std::nullopt);
BalanceCheckResult mu_balance_check(const RelevanceMeasure& mu, const RelevanceMeasure& p,
                                    const std::vector<double>& edges, double epsilon = 0.0);

/// Count of the most common label over the count of the least common one.
double classification_imbalance_factor(std::span<const int> labels);

}  // namespace imbreg
