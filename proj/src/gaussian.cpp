#include "gconv/gaussian.hpp"

#include <cmath>

#include "gconv/errors.hpp"
#include "gconv/quadrature.hpp"

namespace gconv {

namespace {

Eigen::Matrix2d omega() {
  Eigen::Matrix2d om;
  om << 0, 1, -1, 0;
  return om;
}

}  // namespace

PhysicalityReport is_physical(const GaussianChannel& ch, double tol) {
  const Eigen::Matrix2d om = omega();
  const Eigen::Matrix2d a = om - ch.X * om * ch.X.transpose();
  double min_eig = 1e300;
  for (double sign : {1.0, -1.0}) {
    CMatrix h = ch.Y.cast<Complex>() + Complex(0, sign) * a.cast<Complex>();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
  }
  return {min_eig >= tol, min_eig};
}

ChiFn apply_channel(const ChiFn& chi, const GaussianChannel& ch, bool check) {
  if (check && !is_physical(ch).physical)
    throw ConstraintViolation("channel violates complete positivity");
  const Eigen::Matrix2d om = omega();
  const Eigen::Matrix2d m = om.transpose() * ch.X.transpose() * om;
  const Eigen::Matrix2d y = ch.Y;
  const Eigen::Vector2d lo = om.transpose() * ch.l;  // (l^T Om r) = (Om^T l).r
  return [chi, m, y, lo](double rq, double rp) -> Complex {
    const Eigen::Vector2d r(rq, rp);
    const Eigen::Vector2d omr(rp, -rq);  // Om r
    const double damp = -0.25 * omr.dot(y * omr);
    const double phase = lo.dot(r);
    const Eigen::Vector2d arg = m * r;
    return std::exp(Complex(damp, phase)) * chi(arg[0], arg[1]);
  };
}

Eigen::Matrix2d symplectic_matrix(double g, double e, double c) {
  if (g == 0.0) throw std::invalid_argument("symplectic parameter g must be nonzero");
  Eigen::Matrix2d x;
  x << g, g * e, c * g, 1.0 / g + c * g * e;
  return x;
}

ChiFn characteristic_fn(const QuadWavefunction& psi, int nodes) {
  const double hw = psi.halfwidth + 8.0;
  QuadRule rule = gauss_legendre(nodes, -hw, hw);
  return [psi, rule](double rq, double rp) -> Complex {
    // chi(r) = <psi| D(alpha) |psi>, alpha = (rq + i rp)/2, via the position
    // action [D psi](q) = e^{i rp (q - rq/4)} psi(q - rq/2).
    Complex acc = 0.0;
    for (int k = 0; k < rule.nodes.size(); ++k) {
      const double q = rule.nodes[k];
      acc += rule.weights[k] * std::conj(psi(q)) *
             std::exp(Complex(0, rp * (q - 0.25 * rq))) * psi(q - 0.5 * rq);
    }
    return acc;
  };
}

double det_objective(const ChiFn& chi_in, const ChiFn& chi_target,
                     const GaussianChannel& ch, const FidelityOptions& opts) {
  return fidelity_char(apply_channel(chi_in, ch), chi_target, opts);
}

DetMode det_mode_from_string(const std::string& name) {
  if (name == "full-cptp") return DetMode::FullCptp;
  if (name == "symplectic") return DetMode::Symplectic;
  if (name == "squeeze-displace") return DetMode::SqueezeDisplace;
  throw std::invalid_argument("unknown mode: " + name);
}

std::string to_string(DetMode mode) {
  switch (mode) {
    case DetMode::FullCptp: return "full-cptp";
    case DetMode::Symplectic: return "symplectic";
    default: return "squeeze-displace";
  }
}

GaussianChannel channel_from_params(DetMode mode, const Eigen::VectorXd& x) {
  GaussianChannel ch;
  switch (mode) {
    case DetMode::SqueezeDisplace:
      ch.X << x[0], 0, 0, 1.0 / x[0];
      ch.l << 0, x[1];
      break;
    case DetMode::Symplectic:
      ch.X = symplectic_matrix(x[0], x[1], x[2]);
      break;
    case DetMode::FullCptp: {
      ch.X << x[0], x[1], x[2], x[3];
      Eigen::Matrix2d lfac;
      lfac << x[4], 0, x[5], x[6];
      ch.Y = lfac * lfac.transpose();
      ch.l << x[7], x[8];
      break;
    }
  }
  return ch;
}

Bounds det_default_bounds(DetMode mode) {
  Bounds b;
  switch (mode) {
    case DetMode::SqueezeDisplace:
      b.lower.resize(2);
      b.upper.resize(2);
      b.lower << 0.3, -2.0;
      b.upper << 3.0, 2.0;
      break;
    case DetMode::Symplectic:
      b.lower.resize(3);
      b.upper.resize(3);
      b.lower << 0.2, -2.0, -2.0;
      b.upper << 3.0, 2.0, 2.0;
      break;
    case DetMode::FullCptp:
      b.lower.resize(9);
      b.upper.resize(9);
      b.lower << -3, -3, -3, -3, -1, -1, -1, -2, -2;
      b.upper << 3, 3, 3, 3, 1, 1, 1, 2, 2;
      break;
  }
  return b;
}

DetProblem::DetProblem(const FockVector& input, double cubicity,
                       double xi_target, int opt_nodes, double opt_halfwidth,
                       double table_halfwidth, double table_step, int threads)
    : chi_in_(gconv::characteristic_fn(input)),
      chi_target_(gconv::characteristic_fn(
          cubic_phase_wavefunction(cubicity, xi_target))),
      table_halfwidth_(table_halfwidth),
      table_step_(table_step) {
  rule_ = gauss_legendre(opt_nodes, -opt_halfwidth, opt_halfwidth);
  target_neg_weighted_.resize(opt_nodes, opt_nodes);
  parallel_for(opt_nodes, [&](int i) {
    for (int j = 0; j < opt_nodes; ++j)
      target_neg_weighted_(i, j) = rule_.weights[i] * rule_.weights[j] *
                                   chi_target_(-rule_.nodes[i], -rule_.nodes[j]);
  }, threads);

  const int n = 2 * static_cast<int>(std::round(table_halfwidth / table_step)) + 1;
  table_.resize(n, n);
  parallel_for(n, [&](int i) {
    const double rq = -table_halfwidth_ + i * table_step_;
    for (int j = 0; j < n; ++j) {
      const double rp = -table_halfwidth_ + j * table_step_;
      table_(i, j) = chi_in_(rq, rp);
    }
  }, threads);
}

namespace {

inline Complex catmull_rom(const Complex* f, double t) {
  return 0.5 * (2.0 * f[1] + t * ((f[2] - f[0]) +
                t * ((2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) +
                t * (3.0 * (f[1] - f[2]) + f[3] - f[0]))));
}

}  // namespace

Complex DetProblem::chi_in_interp(double rq, double rp) const {
  const double fi = (rq + table_halfwidth_) / table_step_;
  const double fj = (rp + table_halfwidth_) / table_step_;
  const int i0 = static_cast<int>(std::floor(fi));
  const int j0 = static_cast<int>(std::floor(fj));
  const int n = static_cast<int>(table_.rows());
  if (i0 < 1 || j0 < 1 || i0 + 2 >= n || j0 + 2 >= n) return 0.0;
  const double ti = fi - i0, tj = fj - j0;
  Complex rows[4];
  for (int a = 0; a < 4; ++a) {
    Complex f[4] = {table_(i0 - 1 + a, j0 - 1), table_(i0 - 1 + a, j0),
                    table_(i0 - 1 + a, j0 + 1), table_(i0 - 1 + a, j0 + 2)};
    rows[a] = catmull_rom(f, tj);
  }
  return catmull_rom(rows, ti);
}

double DetProblem::fidelity_fast(const GaussianChannel& ch) const {
  const Eigen::Matrix2d om = omega();
  const Eigen::Matrix2d m = om.transpose() * ch.X.transpose() * om;
  const Eigen::Vector2d lo = om.transpose() * ch.l;
  const int n = static_cast<int>(rule_.nodes.size());
  Complex acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double rq = rule_.nodes[i];
    for (int j = 0; j < n; ++j) {
      const double rp = rule_.nodes[j];
      const Eigen::Vector2d omr(rp, -rq);
      const double damp = -0.25 * omr.dot(ch.Y * omr);
      const double phase = lo[0] * rq + lo[1] * rp;
      acc += target_neg_weighted_(i, j) * std::exp(Complex(damp, phase)) *
             chi_in_interp(m(0, 0) * rq + m(0, 1) * rp,
                           m(1, 0) * rq + m(1, 1) * rp);
    }
  }
  return std::clamp(acc.real() / (4.0 * M_PI), 0.0, 1.0 + 1e-6);
}

double DetProblem::fidelity_exact(const GaussianChannel& ch, int threads) const {
  FidelityOptions opts;
  opts.threads = threads;
  return det_objective(chi_in_, chi_target_, ch, opts);
}

DetResult optimize_deterministic(const FockVector& input, double cubicity,
                                 double xi_target, DetMode mode,
                                 const SwarmConfig& config) {
  DetProblem problem(input, cubicity, xi_target);
  Bounds bounds = det_default_bounds(mode);
  auto make_objective = [&](DetMode m) {
    return Objective([&problem, m](const Eigen::VectorXd& x) -> double {
      GaussianChannel ch = channel_from_params(m, x);
      if (!is_physical(ch).physical) return 0.0;  // worst fidelity as penalty
      return -problem.fidelity_fast(ch);
    });
  };
  Objective objective = make_objective(mode);
  SwarmConfig cfg = config;
  long pre_evals = 0;
  if (mode == DetMode::FullCptp) {
    // The nine-dimensional search is mostly non-physical and multimodal, so
    // warm-start it from the two-parameter squeeze-displace solution embedded
    // with zero noise and zero shear.
    OptResult warm = pso_minimize(make_objective(DetMode::SqueezeDisplace),
                                  det_default_bounds(DetMode::SqueezeDisplace),
                                  config);
    pre_evals = warm.evaluations;
    Eigen::VectorXd seed = Eigen::VectorXd::Zero(9);
    seed[0] = warm.best_x[0];
    seed[3] = 1.0 / warm.best_x[0];
    seed[8] = warm.best_x[1];
    cfg.seeds.push_back(seed);
  }
  OptResult opt = pso_minimize(objective, bounds, cfg);
  opt.evaluations += pre_evals;
  // Local polish on the fast surface; the tensor grid grows exponentially
  // with dimension, so high-dimensional modes get fewer nodes per axis.
  Eigen::VectorXd radius = Eigen::VectorXd::Constant(bounds.dim(), 0.01);
  const int nodes = bounds.dim() <= 4 ? 5 : 3;
  OptResult refined =
      grid_refine(objective, opt.best_x, radius, nodes, &bounds, config.threads);
  refined.evaluations += opt.evaluations;
  refined.seed = opt.seed;
  refined.budget = opt.budget;

  DetResult result;
  result.opt = refined;
  result.mode = mode;
  result.channel = channel_from_params(mode, refined.best_x);
  result.fidelity_fast = -refined.best_value;
  result.fidelity = problem.fidelity_exact(result.channel, config.threads);
  return result;
}

}  // namespace gconv
