#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <gconv/errors.hpp>
#include <gconv/protocol.hpp>
#include <gconv/quadrature.hpp>
#include <gconv/teleport.hpp>  // kron, for the brute-force circuit

using namespace gconv;

namespace {

ProtocolSetup reference_setup(int cutoff = 60) {
  ProtocolSetup s;
  s.input = position_wavefunction(build_trisqueezed(Complex(0.0, 0.1), cutoff));
  s.cubicity = 0.1558;
  s.xi_target = xi_from_db(5.0);
  return s;
}

CircuitParams reference_params() {
  CircuitParams p;
  p.theta = 1.0133;
  p.q_beta = 0.8304;
  p.xi = 0.3257;
  p.d = -0.9525;
  return p;
}

// Independent two-mode Fock-space simulation of the circuit: input (mode a,
// homodyned) and ancilla (mode b, kept) through exp(-theta (a^dag b - a b^dag)),
// a phase rotation on the kept mode, position projection of the measured one,
// then the momentum displacement d on the survivor.
struct BruteCircuit {
  int na, nb;
  CVector psi;  // index i*nb + j

  BruteCircuit(const FockVector& input, const CircuitParams& p, int nb_)
      : na(input.cutoff + 1), nb(nb_) {
    QuadWavefunction anc =
        displaced_squeezed_wavefunction(p.xi, p.q_beta, p.p_beta);
    QuadRule xr = gauss_legendre(400, -10.0, 10.0);
    Eigen::MatrixXd phi = hermite_functions(xr.nodes, nb - 1);
    CVector anc_vec(nb);
    for (int n = 0; n < nb; ++n) {
      Complex acc = 0.0;
      for (int k = 0; k < 400; ++k)
        acc += xr.weights[k] * phi(k, n) * anc(xr.nodes[k]);
      anc_vec[n] = acc;
    }
    auto [a, ad] = ladder_operators(na - 1);
    auto [b, bd] = ladder_operators(nb - 1);
    CMatrix G = kron(ad.matrix, b.matrix) - kron(a.matrix, bd.matrix);
    FockOperator gen;
    gen.matrix = -p.theta * G;
    gen.cutoff = na * nb - 1;
    CMatrix U = matrix_exponential(gen).matrix;
    CVector v0(na * nb);
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < nb; ++j) v0[i * nb + j] = input.amplitudes[i] * anc_vec[j];
    psi = U * v0;
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < nb; ++j)
        psi[i * nb + j] *= std::exp(Complex(0.0, -p.gamma * j));
  }

  // unnormalized kept-mode amplitudes conditioned on measuring q
  CVector conditional(double q) const {
    Eigen::MatrixXd phi_a =
        hermite_functions(Eigen::VectorXd::Constant(1, q), na - 1);
    CVector cb = CVector::Zero(nb);
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < nb; ++j) cb[j] += phi_a(0, i) * psi[i * nb + j];
    return cb;
  }

  Complex target_overlap(const ProtocolSetup& s, double d, double q) const {
    QuadWavefunction target = cubic_phase_wavefunction(s.cubicity, s.xi_target);
    QuadRule xo = gauss_legendre(400, -12.0, 12.0);
    Eigen::MatrixXd phi = hermite_functions(xo.nodes, nb - 1);
    CVector cb = conditional(q);
    Complex o = 0.0;
    for (int k = 0; k < 400; ++k) {
      Complex psix = 0.0;
      for (int j = 0; j < nb; ++j) psix += phi(k, j) * cb[j];
      o += xo.weights[k] * std::conj(target(xo.nodes[k])) *
           std::exp(Complex(0.0, xo.nodes[k] * d)) * psix;
    }
    return o;
  }
};

}  // namespace

TEST_CASE("rotation kernel rejects degenerate angles and keeps its branch") {
  CHECK_THROWS_AS(overlap_kernel(0.1, 0.2, 0.0), DomainError);
  CHECK_THROWS_AS(overlap_kernel(0.1, 0.2, M_PI), DomainError);
  // continuity across a range of gamma away from the singularities (the
  // kernel varies fast close to the endpoints, so stay clear of them)
  Complex prev = overlap_kernel(0.4, -0.3, -2.7);
  for (double g = -2.695; g < -0.3; g += 0.005) {
    Complex cur = overlap_kernel(0.4, -0.3, g);
    CHECK(std::abs(cur - prev) < 0.2 * (1.0 + std::abs(prev)));
    prev = cur;
  }
}

TEST_CASE("quadrature overlap matches the two-mode Fock brute force") {
  // >= 3 parameter sets, amplitude agreement within 2e-3
  ProtocolSetup s = reference_setup();
  CircuitParams sets[3];
  sets[0] = reference_params();
  sets[1] = reference_params();
  sets[1].theta = 0.70;
  sets[1].q_beta = 0.5;
  sets[1].d = -0.4;
  sets[2] = reference_params();
  sets[2].xi = 0.1;
  sets[2].gamma = -1.1;
  for (const CircuitParams& p : sets) {
    BruteCircuit brute(build_trisqueezed(Complex(0.0, 0.1), 60), p, 25);
    for (double q : {-0.04, 0.0, 0.03}) {
      Complex mine = overlap(s, p, q);
      Complex ref = brute.target_overlap(s, p.d, q);
      CHECK(std::abs(std::abs(mine) - std::abs(ref)) < 2e-3);
    }
    // measured-quadrature density agrees too
    CircuitParams tiny = p;
    tiny.delta = 5e-4;
    double dens = success_probability(s, tiny) / (2.0 * tiny.delta);
    CHECK(std::abs(dens - brute.conditional(0.0).squaredNorm()) < 2e-3);
  }
}

TEST_CASE("success probability behaves like a probability") {
  ProtocolSetup s = reference_setup();
  CircuitParams p = reference_params();
  double pr = success_probability(s, p);
  CHECK(pr > 0.0);
  CHECK(pr < 1.0);
  // widening the bin raises it; a huge bin captures nearly everything
  CircuitParams wide = p;
  wide.delta = 6.0;
  CHECK(success_probability(s, wide) == doctest::Approx(1.0).epsilon(1e-3));
  // far-out bin has negligible weight and the fidelity conditional throws
  CircuitParams far = p;
  far.q_n = 40.0;
  CHECK_THROWS_AS(conditional_fidelity(s, far), DegeneratePostselection);
}

TEST_CASE("narrow-bin fidelity reduces to the central overlap ratio") {
  ProtocolSetup s = reference_setup();
  CircuitParams p = reference_params();
  p.delta = 1e-3;
  double f_bin = conditional_fidelity(s, p);
  double pr = success_probability(s, p);
  double f_point = std::norm(overlap(s, p, 0.0)) * (2.0 * p.delta) / pr;
  CHECK(std::abs(f_bin - f_point) < 1e-5);
}

TEST_CASE("no transmission means a Gaussian output") {
  ProtocolSetup s = reference_setup();
  CircuitParams p = reference_params();
  p.theta = 0.0;
  ConditionalState cs = output_conditional_state(s, p, 40);
  CHECK(cs.mana.value < 2e-3);
}

TEST_CASE("conditional state: trace, purity, consistency with the fidelity") {
  ProtocolSetup s = reference_setup();
  CircuitParams p = reference_params();
  ConditionalState cs = output_conditional_state(s, p, 60);
  CHECK(cs.rho.matrix.trace().real() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(cs.rho.purity() <= 1.0 + 1e-9);
  CHECK(cs.rho.purity() > 0.99);  // narrow bin: nearly pure
  CHECK(cs.probability == doctest::Approx(success_probability(s, p)).epsilon(1e-10));
  // fidelity via the Fock density matches the quadrature formula; the
  // feed-forward displacement is already folded into the conditional state,
  // so the comparison target is the undisplaced one
  QuadWavefunction target = cubic_phase_wavefunction(s.cubicity, s.xi_target);
  QuadRule xr = gauss_legendre(500, -12.0, 12.0);
  Eigen::MatrixXd phi = hermite_functions(xr.nodes, 60);
  CVector t(61);
  for (int n = 0; n <= 60; ++n) {
    Complex acc = 0.0;
    for (int k = 0; k < 500; ++k)
      acc += xr.weights[k] * phi(k, n) * target(xr.nodes[k]);
    t[n] = acc;
  }
  double f_fock = (t.adjoint() * cs.rho.matrix * t)(0, 0).real() / t.squaredNorm();
  CHECK(std::abs(f_fock - conditional_fidelity(s, p)) < 2e-3);
}

TEST_CASE("position kernel mirrors the Fock-basis conditional state") {
  ProtocolSetup s = reference_setup();
  CircuitParams p = reference_params();
  PositionKernel k = conditional_position_kernel(s, p);
  double trace = 0.0;
  for (int i = 0; i < k.nodes.size(); ++i)
    trace += k.weights[i] * k.rho(i, i).real();
  CHECK(trace == doctest::Approx(1.0).epsilon(1e-10));
  CHECK((k.rho - k.rho.adjoint()).norm() < 1e-10);
}

TEST_CASE("inefficient detection: continuity at eta = 1 and monotone fidelity") {
  ProtocolSetup s = reference_setup();
  CircuitParams p = reference_params();
  double f1 = conditional_fidelity(s, p);
  p.eta = 0.9999;
  FidelityProbability near = conditional_fidelity_inefficient(s, p);
  CHECK(std::abs(near.fidelity - f1) < 1e-3);
  double prev = near.fidelity;
  for (double eta : {0.99, 0.95, 0.9, 0.8}) {
    p.eta = eta;
    FidelityProbability fp = conditional_fidelity_inefficient(s, p);
    CHECK(fp.fidelity < prev);
    prev = fp.fidelity;
  }
}

TEST_CASE("bin-width sweep: fidelity falls, probability rises") {
  ProtocolSetup s = reference_setup();
  CircuitParams p = reference_params();
  double last_f = 1.0, last_p = 0.0;
  for (double delta : {0.05, 0.1, 0.2, 0.4, 0.8}) {
    p.delta = delta;
    double f = conditional_fidelity(s, p);
    double pr = success_probability(s, p);
    CHECK(f < last_f);
    CHECK(pr > last_p);
    last_f = f;
    last_p = pr;
  }
}

TEST_CASE("optimization bounds: gamma freed only on request") {
  Bounds fixed = prob_default_bounds(false);
  Bounds freed = prob_default_bounds(true);
  CHECK(freed.dim() == fixed.dim() + 1);
  fixed.validate();
  freed.validate();
}
