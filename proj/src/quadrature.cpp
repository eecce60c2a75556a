#include "gconv/quadrature.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace gconv {

QuadRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  QuadRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.weights[i] = half * w;
    rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

double trapezoid(const Eigen::VectorXd& axis, const Eigen::VectorXd& values) {
  const int n = static_cast<int>(axis.size());
  double acc = 0.0;
  for (int i = 0; i + 1 < n; ++i)
    acc += 0.5 * (values[i] + values[i + 1]) * (axis[i + 1] - axis[i]);
  return acc;
}

double trapezoid2d(const Eigen::VectorXd& x_axis, const Eigen::VectorXd& y_axis,
                   const Eigen::MatrixXd& values) {
  const int ny = static_cast<int>(y_axis.size());
  Eigen::VectorXd row_integrals(x_axis.size());
  for (int i = 0; i < x_axis.size(); ++i) {
    double acc = 0.0;
    for (int j = 0; j + 1 < ny; ++j)
      acc += 0.5 * (values(i, j) + values(i, j + 1)) * (y_axis[j + 1] - y_axis[j]);
    row_integrals[i] = acc;
  }
  return trapezoid(x_axis, row_integrals);
}

Eigen::VectorXd uniform_axis(double lo, double hi, int n) {
  Eigen::VectorXd axis(n);
  for (int i = 0; i < n; ++i) axis[i] = lo + (hi - lo) * i / (n - 1);
  return axis;
}

void parallel_for(int n, const std::function<void(int)>& fn, int threads) {
  if (threads <= 0)
    threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  threads = std::min(threads, n);
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace gconv
