#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>

namespace imbreg {

/// Nodes and weights of the N-point Gauss-Legendre rule on [-1, 1].
template <std::size_t N>
struct GaussLegendre {
  std::array<double, N> nodes{};
  std::array<double, N> weights{};

  GaussLegendre() {
    constexpr double n = static_cast<double>(N);
    for (std::size_t i = 0; i < (N + 1) / 2; ++i) {
      // Tricomi's initial guess, then Newton on P_N.
      double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = x;
        for (std::size_t k = 2; k <= N; ++k) {
          const double kk = static_cast<double>(k);
          const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      nodes[i] = -x;
      nodes[N - 1 - i] = x;
      weights[i] = w;
      weights[N - 1 - i] = w;
    }
  }

  /// Integral of f over [a, b] with a single panel.
  template <typename F>
  double integrate(F&& f, double a, double b) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) sum += weights[i] * f(mid + half * nodes[i]);
    return sum * half;
  }
};

/// Shared 64-point rule.
inline const GaussLegendre<64>& gauss_legendre_64() {
  static const GaussLegendre<64> rule;
  return rule;
}

}  // namespace imbreg
