#ifndef GCONV_QUADRATURE_HPP
#define GCONV_QUADRATURE_HPP

#include <Eigen/Dense>
#include <functional>

namespace gconv {

/// Gauss-Legendre rule on [a, b].
struct QuadRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

QuadRule gauss_legendre(int n, double a, double b);

/// Trapezoid integral of samples over a uniform axis.
double trapezoid(const Eigen::VectorXd& axis, const Eigen::VectorXd& values);

/// 2D trapezoid over a uniform grid, values(i, j) = f(x_i, y_j).
double trapezoid2d(const Eigen::VectorXd& x_axis, const Eigen::VectorXd& y_axis,
                   const Eigen::MatrixXd& values);

Eigen::VectorXd uniform_axis(double lo, double hi, int n);

/// Run fn(i) for i in [0, n) across hardware threads. Each index must be
/// independent; reductions belong to the caller.
void parallel_for(int n, const std::function<void(int)>& fn, int threads = 0);

}  // namespace gconv

#endif
