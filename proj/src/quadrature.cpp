#include "steklov/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace steklov {

namespace {

// Legendre polynomial P_n and its derivative at x.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

LineRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  LineRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(n, x).second;
    rule.nodes[n - 1 - i] = 0.5 * (x + 1.0);
    rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

TriangleRule edge_midpoint_rule() {
  TriangleRule rule;
  rule.points = {{0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}, {0.5, 0.5, 0.0}};
  rule.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  return rule;
}

TriangleRule conical_rule(int n) {
  const LineRule g = gauss_legendre(n);
  TriangleRule rule;
  for (int i = 0; i < n; ++i) {
    const double u = g.nodes[i];
    for (int j = 0; j < n; ++j) {
      const double l1 = u;
      const double l2 = g.nodes[j] * (1.0 - u);
      rule.points.push_back({1.0 - l1 - l2, l1, l2});
      rule.weights.push_back(2.0 * g.weights[i] * g.weights[j] * (1.0 - u));
    }
  }
  return rule;
}

}  // namespace steklov
