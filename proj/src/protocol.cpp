#include "gconv/protocol.hpp"

#include <cmath>

#include "gconv/errors.hpp"
#include "gconv/quadrature.hpp"

namespace gconv {

namespace {

double checked_csc(double gamma) {
  const double s = std::sin(gamma);
  if (std::abs(s) < 1e-9)
    throw gconv::DomainError("rotation angle too close to a multiple of pi");
  return 1.0 / s;
}

Complex kernel_prefactor(double gamma) {
  // sqrt(2/pi) pi / sqrt(1 - e^{-2 i gamma}); the principal square root is
  // continuous away from gamma = 0 mod pi since Re(1 - e^{-2i gamma}) >= 0.
  return std::sqrt(2.0 / M_PI) * M_PI /
         std::sqrt(Complex(1.0, 0.0) - std::exp(Complex(0, -2.0 * gamma)));
}

// Phase matrix e^{-2 i csc(gamma) q0_i q2_j}; cached per thread since every
// objective evaluation at fixed gamma reuses it.
struct KernelCache {
  double gamma = std::nan("");
  int n0 = 0, n2 = 0;
  double hw = 0.0;
  CMatrix k;
};

const CMatrix& kernel_phase_matrix(const QuadRule& q0, const QuadRule& q2,
                                   double gamma, double hw) {
  thread_local KernelCache cache;
  const int n0 = static_cast<int>(q0.nodes.size());
  const int n2 = static_cast<int>(q2.nodes.size());
  if (cache.gamma != gamma || cache.n0 != n0 || cache.n2 != n2 ||
      cache.hw != hw) {
    const double csc = checked_csc(gamma);
    cache.k.resize(n0, n2);
    for (int i = 0; i < n0; ++i)
      for (int j = 0; j < n2; ++j)
        cache.k(i, j) = std::exp(Complex(0, -2.0 * csc * q0.nodes[i] * q2.nodes[j]));
    cache.gamma = gamma;
    cache.n0 = n0;
    cache.n2 = n2;
    cache.hw = hw;
  }
  return cache.k;
}

// Everything that does not depend on the measured value q: the q2 rule and
// the per-node weights v_j accumulating the target/rotation double integral.
struct OverlapEvaluator {
  QuadWavefunction input;
  QuadWavefunction ancilla;
  QuadRule q2rule;
  CVector v;
  double cos_t, sin_t;

  Complex operator()(double q) const {
    Complex acc = 0.0;
    for (int j = 0; j < q2rule.nodes.size(); ++j) {
      const double q2 = q2rule.nodes[j];
      acc += v[j] * input(q * cos_t + q2 * sin_t) *
             ancilla(-q * sin_t + q2 * cos_t);
    }
    return acc;
  }
};

OverlapEvaluator make_overlap_evaluator(const ProtocolSetup& setup,
                                        const CircuitParams& p) {
  const double hw = setup.quad.halfwidth;
  QuadRule q0rule = gauss_legendre(setup.quad.n_q0, -hw, hw);
  QuadRule q2rule = gauss_legendre(setup.quad.n_q2, -hw, hw);
  const double csc = checked_csc(p.gamma);
  const double cc = csc * std::cos(p.gamma);

  QuadWavefunction target = cubic_phase_wavefunction(setup.cubicity, setup.xi_target);
  CVector a(setup.quad.n_q0);
  for (int i = 0; i < setup.quad.n_q0; ++i) {
    const double q0 = q0rule.nodes[i];
    a[i] = q0rule.weights[i] * std::conj(target(q0)) *
           std::exp(Complex(0, q0 * p.d + cc * q0 * q0));
  }
  const CMatrix& k = kernel_phase_matrix(q0rule, q2rule, p.gamma, hw);
  CVector u = k.transpose() * a;

  OverlapEvaluator ev;
  ev.input = setup.input;
  ev.ancilla = displaced_squeezed_wavefunction(p.xi, p.q_beta, p.p_beta);
  ev.q2rule = q2rule;
  ev.cos_t = std::cos(p.theta);
  ev.sin_t = std::sin(p.theta);
  // The 1/pi from the coherent resolution of identity cancels against the
  // pi in the kernel prefactor.
  const Complex pref = kernel_prefactor(p.gamma) / M_PI;
  ev.v.resize(setup.quad.n_q2);
  for (int j = 0; j < setup.quad.n_q2; ++j) {
    const double q2 = q2rule.nodes[j];
    ev.v[j] = pref * q2rule.weights[j] * u[j] *
              std::exp(Complex(0, cc * q2 * q2));
  }
  return ev;
}

double joint_density_marginal(const ProtocolSetup& setup,
                              const CircuitParams& p,
                              const QuadWavefunction& ancilla,
                              const QuadRule& q2rule, double q) {
  const double c = std::cos(p.theta), s = std::sin(p.theta);
  double acc = 0.0;
  for (int j = 0; j < q2rule.nodes.size(); ++j) {
    const double q2 = q2rule.nodes[j];
    acc += q2rule.weights[j] * std::norm(setup.input(q * c + q2 * s)) *
           std::norm(ancilla(q2 * c - q * s));
  }
  return acc;
}

}  // namespace

Complex overlap_kernel(double q0, double q2, double gamma) {
  const double csc = checked_csc(gamma);
  return kernel_prefactor(gamma) *
         std::exp(Complex(0, csc * (-2.0 * q0 * q2 +
                                    (q0 * q0 + q2 * q2) * std::cos(gamma))));
}

Complex overlap(const ProtocolSetup& setup, const CircuitParams& params,
                double q) {
  return make_overlap_evaluator(setup, params)(q);
}

double success_probability(const ProtocolSetup& setup,
                           const CircuitParams& params) {
  if (!(params.delta > 0.0)) throw std::invalid_argument("bin half-width must be positive");
  QuadRule q2rule = gauss_legendre(setup.quad.n_q2, -setup.quad.halfwidth,
                                   setup.quad.halfwidth);
  QuadRule bin = gauss_legendre(setup.quad.n_bin, params.q_n - params.delta,
                                params.q_n + params.delta);
  QuadWavefunction ancilla =
      displaced_squeezed_wavefunction(params.xi, params.q_beta, params.p_beta);
  double acc = 0.0;
  for (int i = 0; i < bin.nodes.size(); ++i)
    acc += bin.weights[i] *
           joint_density_marginal(setup, params, ancilla, q2rule, bin.nodes[i]);
  return acc;
}

double conditional_fidelity(const ProtocolSetup& setup,
                            const CircuitParams& params) {
  const double prob = success_probability(setup, params);
  if (prob < 1e-12)
    throw DegeneratePostselection("selected bin has vanishing probability");
  OverlapEvaluator ev = make_overlap_evaluator(setup, params);
  QuadRule bin = gauss_legendre(setup.quad.n_bin, params.q_n - params.delta,
                                params.q_n + params.delta);
  double num = 0.0;
  for (int i = 0; i < bin.nodes.size(); ++i)
    num += bin.weights[i] * std::norm(ev(bin.nodes[i]));
  return std::clamp(num / prob, 0.0, 1.0 + 1e-6);
}

FidelityProbability conditional_fidelity_inefficient(
    const ProtocolSetup& setup, const CircuitParams& params) {
  if (!(params.eta > 0.0 && params.eta <= 1.0))
    throw std::invalid_argument("efficiency must lie in (0, 1]");
  if (params.eta > 1.0 - 1e-12)
    return {conditional_fidelity(setup, params),
            success_probability(setup, params)};
  const double var = (1.0 - params.eta) / (4.0 * params.eta);
  const double sigma = std::sqrt(var);
  const double norm = 1.0 / std::sqrt(2.0 * M_PI * var);

  QuadRule q2rule = gauss_legendre(setup.quad.n_q2, -setup.quad.halfwidth,
                                   setup.quad.halfwidth);
  QuadRule bin = gauss_legendre(setup.quad.n_bin, params.q_n - params.delta,
                                params.q_n + params.delta);
  QuadWavefunction ancilla =
      displaced_squeezed_wavefunction(params.xi, params.q_beta, params.p_beta);
  OverlapEvaluator ev = make_overlap_evaluator(setup, params);

  double prob = 0.0, num = 0.0;
  for (int i = 0; i < bin.nodes.size(); ++i) {
    const double qp = bin.nodes[i];
    QuadRule inner = gauss_legendre(setup.quad.n_eta, qp - 5.0 * sigma,
                                    qp + 5.0 * sigma);
    double p_acc = 0.0, f_acc = 0.0;
    for (int k = 0; k < inner.nodes.size(); ++k) {
      const double q = inner.nodes[k];
      const double gauss =
          inner.weights[k] * norm * std::exp(-0.5 * (q - qp) * (q - qp) / var);
      p_acc += gauss * joint_density_marginal(setup, params, ancilla, q2rule, q);
      f_acc += gauss * std::norm(ev(q));
    }
    prob += bin.weights[i] * p_acc;
    num += bin.weights[i] * f_acc;
  }
  if (prob < 1e-12)
    throw DegeneratePostselection("selected bin has vanishing probability");
  return {std::clamp(num / prob, 0.0, 1.0 + 1e-6), prob};
}

namespace {

// Output wavefunctions (unnormalized) for each measured value sampled across
// the bin, on the x quadrature nodes, displacement included.
struct ConditionalSamples {
  QuadRule xrule;
  QuadRule bin;
  std::vector<CVector> psi;  // psi[i][k] = Psi^{q_i}_out(x_k)
};

ConditionalSamples conditional_samples(const ProtocolSetup& setup,
                                       const CircuitParams& p) {
  const double hw = setup.quad.halfwidth;
  ConditionalSamples out;
  out.xrule = gauss_legendre(setup.quad.n_q0, -hw, hw);
  out.bin = gauss_legendre(setup.quad.n_bin, p.q_n - p.delta, p.q_n + p.delta);
  QuadRule q2rule = gauss_legendre(setup.quad.n_q2, -hw, hw);

  const double csc = checked_csc(p.gamma);
  const double cc = csc * std::cos(p.gamma);
  const Complex pref = kernel_prefactor(p.gamma) / M_PI;
  const int nx = setup.quad.n_q0, n2 = setup.quad.n_q2;

  // kx(k, j) = full rotation kernel between output position x_k and q2_j,
  // with the q2 weight and the final displacement e^{i x d} folded in.
  CMatrix kx(nx, n2);
  for (int k = 0; k < nx; ++k) {
    const double x = out.xrule.nodes[k];
    const Complex xphase =
        pref * std::exp(Complex(0, cc * x * x + x * p.d));
    for (int j = 0; j < n2; ++j) {
      const double q2 = q2rule.nodes[j];
      kx(k, j) = xphase * q2rule.weights[j] *
                 std::exp(Complex(0, -2.0 * csc * x * q2 + cc * q2 * q2));
    }
  }

  QuadWavefunction ancilla =
      displaced_squeezed_wavefunction(p.xi, p.q_beta, p.p_beta);
  const double c = std::cos(p.theta), s = std::sin(p.theta);
  out.psi.resize(out.bin.nodes.size());
  for (int i = 0; i < out.bin.nodes.size(); ++i) {
    const double q = out.bin.nodes[i];
    CVector b(n2);
    for (int j = 0; j < n2; ++j) {
      const double q2 = q2rule.nodes[j];
      b[j] = setup.input(q * c + q2 * s) * ancilla(-q * s + q2 * c);
    }
    out.psi[i] = kx * b;
  }
  return out;
}

}  // namespace

ConditionalState output_conditional_state(const ProtocolSetup& setup,
                                          const CircuitParams& params,
                                          int cutoff, int threads) {
  ConditionalSamples samples = conditional_samples(setup, params);
  Eigen::MatrixXd phi = hermite_functions(samples.xrule.nodes, cutoff);
  // Weighted projection: c_n = sum_k w_k phi_n(x_k) Psi(x_k).
  Eigen::MatrixXd phi_w = samples.xrule.weights.asDiagonal() * phi;

  CMatrix rho = CMatrix::Zero(cutoff + 1, cutoff + 1);
  for (size_t i = 0; i < samples.psi.size(); ++i) {
    CVector c = phi_w.transpose() * samples.psi[i];
    rho += samples.bin.weights[static_cast<int>(i)] * (c * c.adjoint());
  }
  ConditionalState state;
  state.probability = success_probability(setup, params);
  const double trace = rho.trace().real();
  if (trace < 1e-14)
    throw DegeneratePostselection("conditional state has vanishing weight");
  state.rho.matrix = rho / trace;
  state.rho.cutoff = cutoff;
  Eigen::VectorXd axis = default_wigner_axis();
  state.wigner = wigner_laguerre(state.rho, axis, axis, threads);
  state.mana = mana(state.wigner);
  return state;
}

PositionKernel conditional_position_kernel(const ProtocolSetup& setup,
                                           const CircuitParams& params) {
  ConditionalSamples samples = conditional_samples(setup, params);
  const int nx = static_cast<int>(samples.xrule.nodes.size());
  CMatrix rho = CMatrix::Zero(nx, nx);
  for (size_t i = 0; i < samples.psi.size(); ++i)
    rho += samples.bin.weights[static_cast<int>(i)] *
           (samples.psi[i] * samples.psi[i].adjoint());
  double trace = 0.0;
  for (int k = 0; k < nx; ++k)
    trace += samples.xrule.weights[k] * rho(k, k).real();
  PositionKernel kernel;
  kernel.nodes = samples.xrule.nodes;
  kernel.weights = samples.xrule.weights;
  kernel.rho = rho / trace;
  return kernel;
}

Bounds prob_default_bounds(bool free_gamma) {
  Bounds b;
  const int dim = free_gamma ? 5 : 4;
  b.lower.resize(dim);
  b.upper.resize(dim);
  // xi may go negative: the ancilla can be squeezed in either quadrature.
  b.lower.head(4) << 0.0, 0.0, -1.6, -3.0;  // theta, q_beta, xi, d
  b.upper.head(4) << M_PI / 2.0, 2.0, 1.6, 0.0;
  if (free_gamma) {
    b.lower[4] = -M_PI + 0.15;
    b.upper[4] = -0.15;
  }
  return b;
}

ProbResult optimize_probabilistic(const ProtocolSetup& setup,
                                  const ProbOptimizeOptions& options) {
  Bounds bounds = prob_default_bounds(options.free_gamma);
  auto params_from = [&](const Eigen::VectorXd& x) {
    CircuitParams p;
    p.theta = x[0];
    p.q_beta = x[1];
    p.xi = x[2];
    p.d = x[3];
    p.delta = options.delta;
    if (options.free_gamma) p.gamma = x[4];
    return p;
  };
  Objective objective = [&](const Eigen::VectorXd& x) -> double {
    try {
      return -conditional_fidelity(setup, params_from(x));
    } catch (const DegeneratePostselection&) {
      return 0.0;
    }
  };
  OptResult opt = pso_minimize(objective, bounds, options.swarm);
  Eigen::VectorXd radius = Eigen::VectorXd::Constant(bounds.dim(), 0.005);
  OptResult refined = grid_refine(objective, opt.best_x, radius, 5, &bounds,
                                  options.swarm.threads);
  refined.evaluations += opt.evaluations;
  refined.seed = opt.seed;
  refined.budget = opt.budget;

  ProbResult result;
  result.opt = refined;
  result.params = params_from(refined.best_x);
  result.fidelity = -refined.best_value;
  result.probability = success_probability(setup, result.params);
  return result;
}

}  // namespace gconv
