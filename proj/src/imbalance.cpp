#include "imbreg/imbalance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "imbreg/error.hpp"

namespace imbreg {
namespace {

void require_normalized(const RelevanceMeasure& m, const char* what) {
  if (!is_normalized(m))
    throw DataError(std::string(what) + " must be normalized (total mass 1) before computing distances");
}

// Constant density levels of a piecewise-uniform measure.
std::vector<double> density_levels(const RelevanceMeasure& m) {
  if (const auto* u = std::get_if<UniformRelevance>(&m)) return {u->density()};
  if (const auto* h = std::get_if<HistogramRelevance>(&m)) {
    std::vector<double> levels;
    for (std::size_t i = 0; i < h->masses().size(); ++i)
      levels.push_back(h->masses()[i] / (h->edges()[i + 1] - h->edges()[i]));
    return levels;
  }
  return {};
}

// Points where a normal density equals the constant c.
void normal_level_crossings(const NormalRelevance& n, double c, std::vector<double>& out) {
  if (!(c > 0.0)) return;
  const double arg = -2.0 * std::log(c * n.stddev() * std::sqrt(2.0 * std::numbers::pi));
  if (arg < 0.0) return;
  const double z = std::sqrt(arg);
  out.push_back(n.mean() - z * n.stddev());
  out.push_back(n.mean() + z * n.stddev());
}

// Points where two normal densities coincide (roots of a quadratic in x).
void normal_normal_crossings(const NormalRelevance& p, const NormalRelevance& q,
                             std::vector<double>& out) {
  const double v1 = p.stddev() * p.stddev();
  const double v2 = q.stddev() * q.stddev();
  const double a = 0.5 / v2 - 0.5 / v1;
  const double b = p.mean() / v1 - q.mean() / v2;
  const double c = 0.5 * q.mean() * q.mean() / v2 - 0.5 * p.mean() * p.mean() / v1 +
                   std::log(q.stddev() / p.stddev());
  if (std::abs(a) < 1e-300) {
    if (b != 0.0) out.push_back(-c / b);
    return;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return;
  const double s = std::sqrt(disc);
  out.push_back((-b - s) / (2.0 * a));
  out.push_back((-b + s) / (2.0 * a));
}

// Every interior point where the density difference may change sign.
std::vector<double> density_crossings(const RelevanceMeasure& mu, const RelevanceMeasure& nu) {
  std::vector<double> out;
  const auto* n1 = std::get_if<NormalRelevance>(&mu);
  const auto* n2 = std::get_if<NormalRelevance>(&nu);
  if (n1 && n2) {
    normal_normal_crossings(*n1, *n2, out);
  } else if (n1 || n2) {
    const auto& normal = n1 ? *n1 : *n2;
    for (double c : density_levels(n1 ? nu : mu)) normal_level_crossings(normal, c, out);
  }
  return out;
}

// Sorted evaluation grid: breakpoints of both measures, density crossings and
// the tail cut-offs. Between consecutive grid points F_mu - F_nu is continuous
// and monotone.
std::vector<double> evaluation_points(const RelevanceMeasure& mu, const RelevanceMeasure& nu,
                                      double tail_eps) {
  std::vector<double> pts = breakpoints(mu);
  const auto b2 = breakpoints(nu);
  pts.insert(pts.end(), b2.begin(), b2.end());
  const auto crossings = density_crossings(mu, nu);
  pts.insert(pts.end(), crossings.begin(), crossings.end());
  for (const auto* m : {&mu, &nu}) {
    const auto [lo, hi] = effective_support(*m, tail_eps);
    pts.push_back(lo);
    pts.push_back(hi);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

double truncation_bound(const RelevanceMeasure& mu, const RelevanceMeasure& nu, double tail_eps,
                        double range) {
  const bool unbounded =
      std::holds_alternative<NormalRelevance>(mu) || std::holds_alternative<NormalRelevance>(nu);
  return unbounded ? tail_eps * range : 0.0;
}

}  // namespace

double kolmogorov_distance(const RelevanceMeasure& mu, const RelevanceMeasure& nu) {
  require_normalized(mu, "relevance measure");
  require_normalized(nu, "comparison measure");
  double sup = 0.0;
  for (double x : evaluation_points(mu, nu, kDefaultTailEps)) {
    sup = std::max(sup, std::abs(cdf(mu, x) - cdf(nu, x)));
    sup = std::max(sup, std::abs(cdf_left(mu, x) - cdf_left(nu, x)));
  }
  return std::min(sup, 1.0);
}

double kolmogorov_distance(const RelevanceMeasure& mu, const EmpiricalCdf& e) {
  return kolmogorov_distance(mu, RelevanceMeasure(e.as_measure()));
}

double wasserstein_distance(const RelevanceMeasure& mu, const RelevanceMeasure& nu,
                            double tail_eps) {
  require_normalized(mu, "relevance measure");
  require_normalized(nu, "comparison measure");
  if (!(tail_eps > 0.0 && tail_eps < 0.5)) throw UsageError("tail_eps must lie in (0, 0.5)");
  const auto pts = evaluation_points(mu, nu, tail_eps);
  const auto diff = [&](double x) { return cdf(mu, x) - cdf(nu, x); };
  const auto integral = [&](double a, double b) {
    return cdf_integral(mu, a, b) - cdf_integral(nu, a, b);
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = pts[i];
    const double b = pts[i + 1];
    const double da = diff(a);  // right limit at a
    const double db = cdf_left(mu, b) - cdf_left(nu, b);
    if (da * db >= 0.0) {
      total += std::abs(integral(a, b));
      continue;
    }
    // One sign change on a monotone stretch: locate it and split.
    double lo = a;
    double hi = b;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if ((diff(mid) > 0.0) == (da > 0.0))
        lo = mid;
      else
        hi = mid;
    }
    const double root = 0.5 * (lo + hi);
    total += std::abs(integral(a, root)) + std::abs(integral(root, b));
  }
  return total;
}

double wasserstein_distance(const RelevanceMeasure& mu, const EmpiricalCdf& e, double tail_eps) {
  return wasserstein_distance(mu, RelevanceMeasure(e.as_measure()), tail_eps);
}

ImbalanceReport imbalance_report(const RelevanceMeasure& mu, const EmpiricalCdf& e,
                                 double tail_eps) {
  const RelevanceMeasure nu = e.as_measure();
  ImbalanceReport report{
      .kolmogorov = kolmogorov_distance(mu, nu),
      .wasserstein = wasserstein_distance(mu, nu, tail_eps),
      .wasserstein_truncation_bound = 0.0,
      .n_samples = e.size(),
      .measure = mu,
  };
  const auto pts = evaluation_points(mu, nu, tail_eps);
  report.wasserstein_truncation_bound =
      truncation_bound(mu, nu, tail_eps, pts.back() - pts.front());
  return report;
}

namespace {

BalanceCheckResult check_cells(const RelevanceMeasure& mu, const RelevanceMeasure& p,
                               const std::vector<double>& edges, double epsilon) {
  if (edges.size() < 3) throw UsageError("balance check needs a partition with at least 2 cells");
  if (std::adjacent_find(edges.begin(), edges.end(), std::greater_equal<>()) != edges.end())
    throw UsageError("partition edges must be strictly ascending");
  if (!(epsilon >= 0.0)) throw UsageError("balance tolerance must be non-negative");
  const std::size_t cells = edges.size() - 1;
  std::vector<double> mu_mass(cells);
  std::vector<double> p_mass(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    mu_mass[i] = measure_interval(mu, edges[i], edges[i + 1]);
    p_mass[i] = measure_interval(p, edges[i], edges[i + 1]);
  }
  BalanceCheckResult result;
  result.epsilon = epsilon;
  result.edges = edges;
  for (std::size_t s = 0; s < cells; ++s) {
    for (std::size_t t = 0; t < cells; ++t) {
      if (s == t) continue;
      if (mu_mass[s] <= mu_mass[t] - epsilon && p_mass[s] > p_mass[t] + epsilon)
        result.violations.push_back({s, t, mu_mass[s], mu_mass[t], p_mass[s], p_mass[t]});
    }
  }
  result.balanced = result.violations.empty();
  return result;
}

}  // namespace

BalanceCheckResult mu_balance_check(const RelevanceMeasure& mu, const EmpiricalCdf& p,
                                    const std::vector<double>& edges,
                                    std::optional<double> epsilon) {
  const double eps = epsilon.value_or(2.0 / std::sqrt(static_cast<double>(p.size())));
  auto result = check_cells(normalize(mu), p.as_measure(), edges, eps);
  result.epsilon_is_default = !epsilon.has_value();
  return result;
}

BalanceCheckResult mu_balance_check(const RelevanceMeasure& mu, const RelevanceMeasure& p,
                                    const std::vector<double>& edges, double epsilon) {
  return check_cells(normalize(mu), normalize(p), edges, epsilon);
}

double classification_imbalance_factor(std::span<const int> labels) {
  std::map<int, std::size_t> counts;
  for (int y : labels) ++counts[y];
  if (counts.size() < 2) throw DataError("imbalance factor needs at least two distinct labels");
  std::size_t most = 0;
  std::size_t least = labels.size();
  for (const auto& [label, count] : counts) {
    most = std::max(most, count);
    least = std::min(least, count);
  }
  return static_cast<double>(most) / static_cast<double>(least);
}

}  // namespace imbreg
