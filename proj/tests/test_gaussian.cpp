#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <gconv/errors.hpp>
#include <gconv/gaussian.hpp>

#include <random>

using namespace gconv;

TEST_CASE("symplectic parametrization always has unit determinant") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 30; ++k) {
    double g = 0.2 + std::abs(u(rng));
    Eigen::Matrix2d s = symplectic_matrix(g, u(rng), u(rng));
    CHECK(s.determinant() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("physicality gate accepts noiseless symplectic and rejects amplifiers") {
  GaussianChannel id;
  CHECK(is_physical(id).physical);
  GaussianChannel sq;
  sq.X << 1.5, 0.0, 0.0, 1.0 / 1.5;
  CHECK(is_physical(sq).physical);
  GaussianChannel amp;  // det X = 4 with no added noise: not completely positive
  amp.X = 2.0 * Eigen::Matrix2d::Identity();
  CHECK_FALSE(is_physical(amp).physical);
  // enough added thermal noise repairs it: Y >= |det X - 1| on both quadratures
  amp.Y = 3.1 * Eigen::Matrix2d::Identity();
  CHECK(is_physical(amp).physical);
  // and the strict gate throws on application
  CVector vac = CVector::Zero(5);
  vac[0] = 1.0;
  ChiFn chi = characteristic_fn(FockVector{vac, 4});
  GaussianChannel bad;
  bad.X = 2.0 * Eigen::Matrix2d::Identity();
  CHECK_THROWS_AS(apply_channel(chi, bad), ConstraintViolation);
}

TEST_CASE("channel action: identity, displacement phase, added noise") {
  CVector vac = CVector::Zero(8);
  vac[0] = 1.0;
  ChiFn chi = characteristic_fn(FockVector{vac, 7});
  GaussianChannel id;
  ChiFn same = apply_channel(chi, id);
  for (double r : {-1.5, 0.3, 2.0}) CHECK(std::abs(same(r, -r) - chi(r, -r)) < 1e-12);

  // pure displacement l: chi'(r) = chi(r) e^{i l^T Omega r}
  GaussianChannel disp;
  disp.l << 0.4, -0.7;
  ChiFn moved = apply_channel(chi, disp);
  for (double rq : {-1.0, 0.5})
    for (double rp : {0.2, 1.3}) {
      Complex phase = std::exp(Complex(0.0, disp.l[0] * rp - disp.l[1] * rq));
      CHECK(std::abs(moved(rq, rp) - chi(rq, rp) * phase) < 1e-12);
    }

  // classical noise Y = y I damps chi by e^{-y |r|^2 / 4}
  GaussianChannel noise;
  noise.Y = 0.3 * Eigen::Matrix2d::Identity();
  ChiFn fuzzy = apply_channel(chi, noise);
  for (double r : {0.8, 2.2}) {
    double damp = std::exp(-0.3 * (2.0 * r * r) / 4.0);
    CHECK(std::abs(fuzzy(r, r) - chi(r, r) * damp) < 1e-12);
  }
  CHECK(std::abs(fuzzy(0.0, 0.0) - 1.0) < 1e-12);
}

TEST_CASE("wavefunction-route characteristic function matches the Fock route") {
  FockVector s = build_trisqueezed(0.1, 60);
  ChiFn a = characteristic_fn(s);
  // a cutoff-60 wavefunction oscillates fast enough that the default node
  // count (tuned for the smooth low-energy states) is not at full precision
  ChiFn b = characteristic_fn(position_wavefunction(s), 800);
  for (double rq : {-3.0, 0.0, 2.5})
    for (double rp : {-1.0, 1.8}) CHECK(std::abs(a(rq, rp) - b(rq, rp)) < 1e-8);
}

TEST_CASE("parameter decoding per mode and default bounds are consistent") {
  Eigen::VectorXd sd(2);
  sd << 1.4, 0.25;
  GaussianChannel c1 = channel_from_params(DetMode::SqueezeDisplace, sd);
  CHECK(c1.X(0, 0) == doctest::Approx(1.4));
  CHECK(c1.X(1, 1) == doctest::Approx(1.0 / 1.4));
  CHECK(c1.X(0, 1) == 0.0);
  CHECK(c1.l[1] == doctest::Approx(0.25));
  CHECK(is_physical(c1).physical);

  Eigen::VectorXd sp(3);
  sp << 1.2, -0.4, 0.3;
  GaussianChannel c2 = channel_from_params(DetMode::Symplectic, sp);
  CHECK(c2.X.determinant() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(is_physical(c2).physical);

  std::mt19937_64 rng(11);
  Bounds fb = det_default_bounds(DetMode::FullCptp);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    Eigen::VectorXd x(fb.lower.size());
    for (int i = 0; i < x.size(); ++i)
      x[i] = fb.lower[i] + u(rng) * (fb.upper[i] - fb.lower[i]);
    GaussianChannel c3 = channel_from_params(DetMode::FullCptp, x);
    // Y = L L^T by construction: symmetric PSD
    CHECK((c3.Y - c3.Y.transpose()).norm() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(c3.Y);
    CHECK(es.eigenvalues().minCoeff() > -1e-12);
  }

  CHECK(det_mode_from_string("full-cptp") == DetMode::FullCptp);
  CHECK(det_mode_from_string(to_string(DetMode::Symplectic)) == DetMode::Symplectic);
}

TEST_CASE("fast tabulated objective tracks the exact one") {
  FockVector s = build_trisqueezed(0.1, 60);
  DetProblem prob(s, 0.1558, xi_from_db(5.0));
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (int k = 0; k < 6; ++k) {
    GaussianChannel ch;
    double a = 1.0 + u(rng);
    ch.X << a, 0.0, 0.0, 1.0 / a;
    ch.l << 0.2 * u(rng), u(rng);
    double fast = prob.fidelity_fast(ch);
    double exact = prob.fidelity_exact(ch);
    CHECK(std::abs(fast - exact) < 2e-3);
  }
  // identity-ish channel on matched states: fidelity well below 1 but sane
  GaussianChannel id;
  double f = prob.fidelity_exact(id);
  CHECK(f > 0.0);
  CHECK(f < 1.0);
}

TEST_CASE("vacuum-to-vacuum fidelity through the identity channel is one") {
  CVector vac = CVector::Zero(5);
  vac[0] = 1.0;
  ChiFn chi = characteristic_fn(FockVector{vac, 4});
  GaussianChannel id;
  CHECK(det_objective(chi, chi, id) == doctest::Approx(1.0).epsilon(1e-9));
}
