#include "gconv/wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gconv {

double xi_from_db(double db) { return -std::log(std::pow(10.0, db / 20.0)); }

Eigen::MatrixXd hermite_functions(const Eigen::VectorXd& q, int nmax) {
  const int npts = static_cast<int>(q.size());
  Eigen::MatrixXd phi(npts, nmax + 1);
  const double norm0 = std::pow(2.0 / M_PI, 0.25);
  for (int i = 0; i < npts; ++i) {
    const double x = std::sqrt(2.0) * q[i];
    const double gauss = norm0 * std::exp(-q[i] * q[i]);
    // h_n are the normalized Hermite polynomials; phi_n = gauss * h_n.
    double hm = 0.0, h = 1.0;
    phi(i, 0) = gauss;
    for (int n = 0; n < nmax; ++n) {
      double hp = (std::sqrt(2.0) * x * h - std::sqrt(double(n)) * hm) /
                  std::sqrt(double(n + 1));
      hm = h;
      h = hp;
      phi(i, n + 1) = gauss * h;
    }
  }
  return phi;
}

QuadWavefunction position_wavefunction(const FockVector& state) {
  CVector coeffs = state.amplitudes;
  const int nmax = state.cutoff;
  QuadWavefunction wf;
  wf.halfwidth = std::max(6.0, 1.5 * std::sqrt(double(nmax)) + 3.0);
  wf.eval = [coeffs, nmax](double q) -> Complex {
    const double x = std::sqrt(2.0) * q;
    const double gauss = std::pow(2.0 / M_PI, 0.25) * std::exp(-q * q);
    double hm = 0.0, h = 1.0;
    Complex acc = coeffs[0];
    for (int n = 0; n < nmax; ++n) {
      double hp = (std::sqrt(2.0) * x * h - std::sqrt(double(n)) * hm) /
                  std::sqrt(double(n + 1));
      hm = h;
      h = hp;
      acc += coeffs[n + 1] * h;
    }
    return acc * gauss;
  };
  return wf;
}

QuadWavefunction cubic_phase_wavefunction(double cubicity, double xi,
                                          double d) {
  const double norm = std::pow(2.0 / M_PI, 0.25) * std::exp(0.5 * xi);
  const double width = std::exp(2.0 * xi);
  QuadWavefunction wf;
  wf.halfwidth = std::max(8.0, 6.0 / std::sqrt(width));
  wf.eval = [=](double q) -> Complex {
    return norm * std::exp(Complex(-width * q * q,
                                   cubicity * q * q * q - q * d));
  };
  return wf;
}

QuadWavefunction displaced_squeezed_wavefunction(Complex xi, double q_beta,
                                                 double p_beta) {
  QuadWavefunction wf;
  if (std::abs(xi.imag()) < 1e-14) {
    const double x = xi.real();
    const double norm = std::pow(2.0 / M_PI, 0.25) * std::exp(0.5 * x);
    const double width = std::exp(2.0 * x);
    wf.halfwidth = std::max(8.0, std::abs(q_beta) + 6.0 / std::sqrt(width));
    wf.eval = [=](double q) -> Complex {
      const double dq = q - q_beta;
      return norm * std::exp(Complex(-width * dq * dq,
                                     2.0 * p_beta * q - p_beta * q_beta));
    };
    return wf;
  }
  const double mag = std::abs(xi);
  const Complex zeta = xi * (std::tanh(mag) / mag);
  const Complex width = (1.0 + zeta) / (1.0 - zeta);
  const Complex norm = std::pow(2.0 / M_PI, 0.25) *
                       std::pow(1.0 - std::norm(zeta), 0.25) /
                       std::sqrt(1.0 - zeta);
  wf.halfwidth = std::max(8.0, std::abs(q_beta) + 6.0 / std::sqrt(width.real()));
  wf.eval = [=](double q) -> Complex {
    const double dq = q - q_beta;
    return norm * std::exp(-width * dq * dq +
                           Complex(0, 2.0 * p_beta * (q - 0.5 * q_beta)));
  };
  return wf;
}

GkpComb gkp_plus_momentum(double delta, double weight_floor) {
  const double root_pi = std::sqrt(M_PI);
  std::vector<double> centers, weights;
  for (int s = 0;; ++s) {
    const double w = std::exp(-0.5 * delta * delta * M_PI * 4.0 * s * s);
    if (w < weight_floor) break;
    centers.push_back(2.0 * s * root_pi);
    weights.push_back(w);
    if (s > 0) {
      centers.push_back(-2.0 * s * root_pi);
      weights.push_back(w);
    }
  }
  std::vector<int> order(centers.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return centers[a] < centers[b]; });
  GkpComb comb;
  comb.delta = delta;
  comb.centers.resize(centers.size());
  comb.weights.resize(weights.size());
  for (size_t i = 0; i < order.size(); ++i) {
    comb.centers[i] = centers[order[i]];
    comb.weights[i] = weights[order[i]];
  }
  return comb;
}

}  // namespace gconv
