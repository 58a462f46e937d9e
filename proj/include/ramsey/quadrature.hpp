#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace ramsey {

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendreRule(int n) : nodes(static_cast<std::size_t>(n)),
                                      weights(static_cast<std::size_t>(n)) {
    if (n < 1) throw std::invalid_argument("GaussLegendreRule: n must be >= 1");
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
      // Tricomi initial guess, then Newton on P_n
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = pk;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      // final derivative at the converged root
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      nodes[static_cast<std::size_t>(i)] = -x;
      nodes[static_cast<std::size_t>(n - 1 - i)] = x;
      weights[static_cast<std::size_t>(i)] = w;
      weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1) nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  }

  std::size_t size() const { return nodes.size(); }
};

// Composite rule: [a, b] split into equal panels, each with the same GL rule.
struct CompositeRule {
  std::vector<double> points;
  std::vector<double> weights;

  CompositeRule(double a, double b, int panels, const GaussLegendreRule& rule) {
    if (panels < 1) throw std::invalid_argument("CompositeRule: panels must be >= 1");
    const double width = (b - a) / panels;
    points.reserve(static_cast<std::size_t>(panels) * rule.size());
    weights.reserve(points.capacity());
    for (int p = 0; p < panels; ++p) {
      const double lo = a + width * p;
      const double mid = lo + 0.5 * width;
      for (std::size_t i = 0; i < rule.size(); ++i) {
        points.push_back(mid + 0.5 * width * rule.nodes[i]);
        weights.push_back(0.5 * width * rule.weights[i]);
      }
    }
  }

  template <typename F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) sum += weights[i] * f(points[i]);
    return sum;
  }
};

}  // namespace ramsey
