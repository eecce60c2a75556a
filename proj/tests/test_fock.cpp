#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <gconv/errors.hpp>
#include <gconv/fock.hpp>

#include <random>

using namespace gconv;

namespace {

CVector random_state(int cutoff, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CVector v(cutoff + 1);
  for (int n = 0; n <= cutoff; ++n) v[n] = Complex(g(rng), g(rng));
  v.normalize();
  return v;
}

}  // namespace

TEST_CASE("ladder operators satisfy the canonical algebra on the interior") {
  const int cut = 20;
  auto [a, ad] = ladder_operators(cut);
  CHECK((ad.matrix - a.matrix.adjoint()).norm() == doctest::Approx(0.0));
  CMatrix comm = a.matrix * ad.matrix - ad.matrix * a.matrix;
  // [a, a^dag] = 1 except in the last row/col where truncation bites
  for (int n = 0; n < cut; ++n) CHECK(std::abs(comm(n, n) - 1.0) < 1e-12);
  CHECK((ad.matrix * a.matrix - number_operator(cut).matrix).norm() < 1e-12);
}

TEST_CASE("quadratures: hermiticity, commutator, vacuum variances") {
  const int cut = 24;
  CMatrix q = position_operator(cut).matrix;
  CMatrix p = momentum_operator(cut).matrix;
  CHECK((q - q.adjoint()).norm() < 1e-12);
  CHECK((p - p.adjoint()).norm() < 1e-12);
  // [q, p] = i/2 under hbar = 1/2 (interior elements)
  CMatrix comm = q * p - p * q;
  for (int n = 0; n < cut - 1; ++n)
    CHECK(std::abs(comm(n, n) - Complex(0.0, 0.5)) < 1e-12);
  CVector vac = CVector::Zero(cut + 1);
  vac[0] = 1.0;
  CHECK(std::abs((vac.dot(q * q * vac)) - 0.25) < 1e-14);
  CHECK(std::abs((vac.dot(p * p * vac)) - 0.25) < 1e-14);
}

TEST_CASE("matrix exponential: both paths agree and preserve unitarity") {
  const int cut = 14;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  CMatrix h(cut + 1, cut + 1);
  for (int i = 0; i <= cut; ++i)
    for (int j = 0; j <= cut; ++j) h(i, j) = Complex(g(rng), g(rng));
  h = 0.5 * (h + CMatrix(h.adjoint()));  // Hermitian
  FockOperator gen;
  gen.matrix = Complex(0.0, -1.0) * h;
  gen.cutoff = cut;
  CMatrix u1 = matrix_exponential(gen).matrix;
  CMatrix u2 = expm_scaling_squaring(gen.matrix);
  CHECK((u1 - u2).norm() < 1e-10);
  CHECK((u1 * u1.adjoint() - CMatrix::Identity(cut + 1, cut + 1)).norm() < 1e-10);
}

TEST_CASE("trisqueezed state: norm, mod-3 support, perturbative limit") {
  FockVector s = build_trisqueezed(0.1, 60);
  CHECK(s.amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-12));
  for (int n = 0; n <= 60; ++n)
    if (n % 3 != 0) CHECK(std::abs(s.amplitudes[n]) < 1e-13);
  // first order in t: |psi> ~ |0> + i t sqrt(6) |3>
  FockVector w = build_trisqueezed(1e-3, 30);
  Complex ratio = w.amplitudes[3] / w.amplitudes[0];
  CHECK(std::abs(ratio - Complex(0.0, 1e-3) * std::sqrt(6.0)) < 1e-7);
}

TEST_CASE("tail-mass gate rejects states with heavy tails") {
  CVector flat = CVector::Ones(30);
  CHECK_THROWS_AS(FockVector::make(flat), TruncationError);
  CHECK(build_trisqueezed(0.1, 60).tail_mass() < 1e-3);
  CHECK(build_trisqueezed(0.15, 120).tail_mass() < 1e-3);
}

TEST_CASE("phase rotation shifts the triplicity phase") {
  // e^{i phi n} tri(t) = tri(t e^{3 i phi}); phi = pi/6 gives t e^{i pi/2}
  FockVector rotated = rotate_state(build_trisqueezed(0.1, 60), -M_PI / 6.0);
  FockVector direct = build_trisqueezed(Complex(0.0, 0.1), 60);
  CHECK(std::abs(fock_overlap(direct, rotated)) == doctest::Approx(1.0).epsilon(1e-10));
  // norm preserved
  CHECK(rotated.amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Kerr-free evolution reduces to the plain trisqueezed state") {
  FockVector k0 = build_kerr_trisqueezed(1.0, 0.0, 0.1, 60);
  FockVector tri = build_trisqueezed(0.1, 60);
  CHECK(std::abs(fock_overlap(k0, tri)) == doctest::Approx(1.0).epsilon(1e-10));
  // nonzero Kerr deforms the state
  FockVector k1 = build_kerr_trisqueezed(1.0, 0.5, 0.1, 60);
  CHECK(std::abs(fock_overlap(k1, tri)) < 1.0 - 1e-4);
}

TEST_CASE("overlap conjugation order and cutoff re-expression") {
  FockVector a{random_state(12, 1), 12};
  FockVector b{random_state(12, 2), 12};
  CHECK(std::abs(fock_overlap(a, b) - std::conj(fock_overlap(b, a))) < 1e-14);
  FockVector padded = with_cutoff(a, 20);
  CHECK(padded.cutoff == 20);
  CHECK(padded.amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(fock_overlap(with_cutoff(padded, 12), a)) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("density matrix from a pure state has unit purity and trace") {
  FockVector a{random_state(10, 5), 10};
  FockDensity rho = FockDensity::from_pure(a);
  CHECK(rho.matrix.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rho.purity() == doctest::Approx(1.0).epsilon(1e-12));
}
