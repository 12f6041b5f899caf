#pragma once

#include <cmath>
#include <numbers>
#include <vector>

namespace gnsharp {

/// Tanh-sinh nodes and weights on [-1, 1] with step 2^{-level}.
/// Handles algebraic endpoint singularities with double-exponential convergence.
struct TanhSinhRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit TanhSinhRule(int level) {
    const double h = std::ldexp(1.0, -level);
    constexpr double half_pi = std::numbers::pi / 2.0;
    // |t| = 3.2 already puts 1 − |x| below 1e-16.
    const int kmax = static_cast<int>(std::ceil(3.2 / h));
    for (int k = -kmax; k <= kmax; ++k) {
      const double t = k * h;
      const double u = half_pi * std::sinh(t);
      const double x = std::tanh(u);
      const double c = std::cosh(u);
      const double w = h * half_pi * std::cosh(t) / (c * c);
      if (w < 1e-300 || std::abs(x) >= 1.0) continue;
      nodes.push_back(x);
      weights.push_back(w);
    }
  }

  template <typename F>
  double integrate(F&& f, double a, double b) const {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(mid + half * nodes[i]);
    return half * sum;
  }
};

/// Gauss–Legendre nodes/weights on [-1, 1] (Newton on the three-term recurrence).
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendreRule(int n) : nodes(n), weights(n) {
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        if (n == 1) p0 = 1.0;
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }

  template <typename F>
  double integrate(F&& f, double a, double b) const {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(mid + half * nodes[i]);
    return half * sum;
  }
};

}  // namespace gnsharp
