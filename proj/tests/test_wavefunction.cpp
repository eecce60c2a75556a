#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <gconv/quadrature.hpp>
#include <gconv/wavefunction.hpp>

using namespace gconv;

namespace {

double norm2(const QuadWavefunction& psi, double hw = 12.0, int n = 800) {
  QuadRule r = gauss_legendre(n, -hw, hw);
  double acc = 0.0;
  for (int k = 0; k < n; ++k) acc += r.weights[k] * std::norm(psi(r.nodes[k]));
  return acc;
}

double moment_q(const QuadWavefunction& psi, int power, double hw = 12.0) {
  QuadRule r = gauss_legendre(800, -hw, hw);
  double acc = 0.0;
  for (int k = 0; k < 800; ++k)
    acc += r.weights[k] * std::pow(r.nodes[k], power) * std::norm(psi(r.nodes[k]));
  return acc;
}

}  // namespace

TEST_CASE("squeezing parameter from dB") {
  CHECK(xi_from_db(0.0) == doctest::Approx(0.0));
  CHECK(xi_from_db(5.0) == doctest::Approx(-0.575646).epsilon(1e-5));
  CHECK(xi_from_db(-20.0 * std::log10(std::exp(1.0))) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hermite functions are orthonormal and match closed forms") {
  QuadRule r = gauss_legendre(600, -10.0, 10.0);
  Eigen::MatrixXd phi = hermite_functions(r.nodes, 30);
  Eigen::MatrixXd gram =
      phi.transpose() * r.weights.asDiagonal() * phi;
  CHECK((gram - Eigen::MatrixXd::Identity(31, 31)).cwiseAbs().maxCoeff() < 1e-10);
  // hbar = 1/2 ground state (2/pi)^{1/4} e^{-q^2} and first excited state
  for (double q : {-1.3, 0.0, 0.4, 2.1}) {
    Eigen::MatrixXd at = hermite_functions(Eigen::VectorXd::Constant(1, q), 2);
    double phi0 = std::pow(2.0 / M_PI, 0.25) * std::exp(-q * q);
    CHECK(at(0, 0) == doctest::Approx(phi0).epsilon(1e-12));
    CHECK(at(0, 1) == doctest::Approx(2.0 * q * phi0).epsilon(1e-10));
  }
}

TEST_CASE("position wavefunction of a Fock state is normalized and consistent") {
  FockVector s = build_trisqueezed(0.1, 60);
  QuadWavefunction psi = position_wavefunction(s);
  CHECK(norm2(psi, psi.halfwidth) == doctest::Approx(1.0).epsilon(1e-8));
  // pointwise agreement with the bulk hermite-matrix contraction
  Eigen::VectorXd pts(3);
  pts << -2.0, 0.3, 1.7;
  Eigen::MatrixXd phi = hermite_functions(pts, 60);
  CVector bulk = phi.cast<Complex>() * s.amplitudes;
  for (int k = 0; k < 3; ++k) CHECK(std::abs(psi(pts[k]) - bulk[k]) < 1e-12);
}

TEST_CASE("cubic phase wavefunction: normalization, variance, pure phase") {
  const double xi = xi_from_db(5.0);
  QuadWavefunction flat = cubic_phase_wavefunction(0.0, xi);
  CHECK(norm2(flat) == doctest::Approx(1.0).epsilon(1e-10));
  // q-variance of the envelope is e^{-2 xi}/4 regardless of cubicity
  CHECK(moment_q(flat, 2) == doctest::Approx(std::exp(-2.0 * xi) / 4.0).epsilon(1e-8));
  QuadWavefunction bent = cubic_phase_wavefunction(0.3, xi, 0.7);
  for (double q : {-1.0, 0.5, 2.0})
    CHECK(std::abs(bent(q)) == doctest::Approx(std::abs(flat(q))).epsilon(1e-12));
}

TEST_CASE("displaced squeezed vacuum: moments and minimal uncertainty") {
  QuadWavefunction psi = displaced_squeezed_wavefunction(0.3257, 0.8304, 0.0);
  CHECK(norm2(psi) == doctest::Approx(1.0).epsilon(1e-10));
  double mq = moment_q(psi, 1);
  CHECK(mq == doctest::Approx(0.8304).epsilon(1e-8));
  double vq = moment_q(psi, 2) - mq * mq;
  // p-variance via the derivative: <p^2> = (1/4) Int |psi'|^2 under hbar = 1/2
  QuadRule r = gauss_legendre(1200, -10.0, 10.0);
  double vp = 0.0;
  const double h = 1e-4;
  for (int k = 0; k < 1200; ++k) {
    Complex dpsi = (psi(r.nodes[k] + h) - psi(r.nodes[k] - h)) / (2.0 * h);
    vp += r.weights[k] * 0.25 * std::norm(dpsi);
  }
  CHECK(vq * vp == doctest::Approx(1.0 / 16.0).epsilon(1e-5));
  // real squeezing leaves the state Gaussian and centered after undisplacing
  QuadWavefunction sq = displaced_squeezed_wavefunction(0.5, 0.0, 0.0);
  CHECK(moment_q(sq, 1) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("momentum displacement shows up as the imaginary displacement part") {
  QuadWavefunction psi = displaced_squeezed_wavefunction(0.2, 0.3, 0.6);
  CHECK(norm2(psi) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(moment_q(psi, 1) == doctest::Approx(0.3).epsilon(1e-7));
}

TEST_CASE("GKP momentum comb: symmetry, spacing, floor truncation") {
  GkpComb comb = gkp_plus_momentum(0.2);
  const int n = static_cast<int>(comb.centers.size());
  REQUIRE(n >= 3);
  CHECK(n % 2 == 1);  // symmetric about zero
  for (int i = 0; i < n; ++i) {
    CHECK(comb.weights[i] > 0.0);
    CHECK(comb.centers[i] == doctest::Approx(-comb.centers[n - 1 - i]).epsilon(1e-12));
    CHECK(comb.weights[i] == doctest::Approx(comb.weights[n - 1 - i]).epsilon(1e-12));
  }
  for (int i = 1; i < n; ++i)
    CHECK(comb.centers[i] - comb.centers[i - 1] ==
          doctest::Approx(2.0 * std::sqrt(M_PI)).epsilon(1e-12));
  // smaller delta -> flatter envelope -> more peaks above the floor
  CHECK(gkp_plus_momentum(0.1).centers.size() > comb.centers.size());
}
