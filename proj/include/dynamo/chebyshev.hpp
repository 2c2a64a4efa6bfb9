#pragma once
// Chebyshev-Gauss-Lobatto collocation on [0, 1].

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace dynamo {

struct ChebyshevGrid {
  Eigen::VectorXd r;   // r_0 = 0 < r_1 < ... < r_N = 1
  Eigen::MatrixXd d1;  // d/dr
  Eigen::MatrixXd d2;  // d^2/dr^2
};

/// Nodes r_j = sin^2(pi j / 2N) and differentiation matrices on [0, 1].
///
/// Off-diagonal node differences use the product-of-sines identity and the
/// diagonal is the negative row sum, which keeps D1 exact on constants.
inline ChebyshevGrid chebyshev_grid(int n) {
  const double h = std::numbers::pi / (2.0 * n);
  ChebyshevGrid g;
  g.r.resize(n + 1);
  for (int j = 0; j <= n; ++j) {
    const double s = std::sin(h * j);
    g.r(j) = s * s;
  }
  // Differentiation in x = cos(pi j / N) on [-1, 1]; r = (1 - x) / 2.
  Eigen::MatrixXd dx = Eigen::MatrixXd::Zero(n + 1, n + 1);
  auto weight = [n](int j) { return ((j == 0 || j == n) ? 2.0 : 1.0) * ((j % 2) ? -1.0 : 1.0); };
  for (int i = 0; i <= n; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j <= n; ++j) {
      if (i == j) continue;
      // x_i - x_j = -2 sin((i + j) h) sin((i - j) h)
      const double diff = -2.0 * std::sin((i + j) * h) * std::sin((i - j) * h);
      dx(i, j) = weight(i) / (weight(j) * diff);
      row_sum += dx(i, j);
    }
    dx(i, i) = -row_sum;
  }
  g.d1 = -2.0 * dx;
  g.d2 = g.d1 * g.d1;
  return g;
}

}  // namespace dynamo
