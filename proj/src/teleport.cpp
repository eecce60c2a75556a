#include "gconv/teleport.hpp"

#include <cmath>

#include "gconv/errors.hpp"
#include "gconv/quadrature.hpp"

namespace gconv {

FeedForwardCorrection commuted_corrections(double s, double q, double p) {
  FeedForwardCorrection c;
  c.s = s;
  c.disp_q = q;
  c.disp_p = p;
  c.d_phase_coeff = 2.0 * q;
  c.s_phase_coeff = 2.0 * (std::exp(s) - 1.0);
  c.s_phase_coeff_quadratic = 2.0 * (s + 0.5 * s * s);
  return c;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double comb_amplitude(const GkpComb& comb, double q) {
  double acc = 0.0;
  for (int s = 0; s < comb.centers.size(); ++s) {
    const double dq = q - comb.centers[s];
    acc += comb.weights[s] *
           std::exp(-0.5 * dq * dq / (comb.delta * comb.delta));
  }
  return acc;
}

QuadWavefunction teleported_wavefunction(const QuadWavefunction& ancilla,
                                         const GkpComb& comb) {
  const double hw = ancilla.halfwidth;
  QuadRule rule = gauss_legendre(800, -hw, hw);
  double norm2 = 0.0;
  for (int k = 0; k < rule.nodes.size(); ++k) {
    const double g = comb_amplitude(comb, rule.nodes[k]);
    norm2 += rule.weights[k] * std::norm(ancilla(rule.nodes[k])) * g * g;
  }
  if (norm2 < 1e-300)
    throw DegeneratePostselection("teleported state has zero norm");
  const double inv = 1.0 / std::sqrt(norm2);
  QuadWavefunction out;
  out.halfwidth = hw;
  out.eval = [ancilla, comb, inv](double q) -> Complex {
    return inv * ancilla(q) * comb_amplitude(comb, q);
  };
  return out;
}

double gate_error(const PositionKernel& ancilla, const QuadWavefunction& target,
                  const GkpComb& comb) {
  const int n = static_cast<int>(ancilla.nodes.size());
  Eigen::VectorXd g(n);
  CVector ideal(n);
  for (int k = 0; k < n; ++k) {
    g[k] = comb_amplitude(comb, ancilla.nodes[k]);
    ideal[k] = target(ancilla.nodes[k]) * g[k];
  }
  double ideal_norm2 = 0.0;
  for (int k = 0; k < n; ++k)
    ideal_norm2 += ancilla.weights[k] * std::norm(ideal[k]);
  // rho-tilde = comb * rho * comb, trace-normalized under the node weights.
  double trace = 0.0;
  for (int k = 0; k < n; ++k)
    trace += ancilla.weights[k] * g[k] * g[k] * ancilla.rho(k, k).real();
  if (trace < 1e-300 || ideal_norm2 < 1e-300)
    throw IntegrationError("gadget outputs carry no weight on the grid");
  Complex f = 0.0;
  for (int k = 0; k < n; ++k) {
    Complex row = 0.0;
    for (int l = 0; l < n; ++l)
      row += ancilla.weights[l] * g[l] * ancilla.rho(k, l) * ideal[l];
    f += ancilla.weights[k] * g[k] * std::conj(ideal[k]) * row;
  }
  const double fidelity = f.real() / (trace * ideal_norm2);
  return std::clamp(1.0 - fidelity, 0.0, 1.0);
}

double gate_error_pure(const QuadWavefunction& ancilla,
                       const QuadWavefunction& target, const GkpComb& comb,
                       int nodes, double halfwidth) {
  QuadRule rule = gauss_legendre(nodes, -halfwidth, halfwidth);
  Complex ov = 0.0;
  double na = 0.0, nt = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double q = rule.nodes[k];
    const double g = comb_amplitude(comb, q);
    const Complex a = ancilla(q) * g;
    const Complex t = target(q) * g;
    ov += rule.weights[k] * std::conj(t) * a;
    na += rule.weights[k] * std::norm(a);
    nt += rule.weights[k] * std::norm(t);
  }
  const double fidelity = std::norm(ov) / (na * nt);
  return std::clamp(1.0 - fidelity, 0.0, 1.0);
}

}  // namespace gconv
