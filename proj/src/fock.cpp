#include "gconv/fock.hpp"

#include <cmath>

#include "gconv/errors.hpp"

namespace gconv {

FockVector FockVector::make(CVector amplitudes, double tail_tol) {
  FockVector v;
  v.cutoff = static_cast<int>(amplitudes.size()) - 1;
  double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw TruncationError("state has zero or non-finite norm", v.cutoff);
  v.amplitudes = amplitudes / norm;
  if (v.tail_mass() >= tail_tol)
    throw TruncationError("tail mass above tolerance; increase cutoff",
                          v.cutoff * 2);
  return v;
}

double FockVector::tail_mass() const {
  const int n = static_cast<int>(amplitudes.size());
  const int tail_start = n - std::max(1, n / 10);
  double mass = 0.0;
  for (int i = tail_start; i < n; ++i) mass += std::norm(amplitudes[i]);
  return mass;
}

FockDensity FockDensity::from_pure(const FockVector& psi) {
  FockDensity rho;
  rho.cutoff = psi.cutoff;
  rho.matrix = psi.amplitudes * psi.amplitudes.adjoint();
  return rho;
}

double FockDensity::purity() const {
  return (matrix * matrix).trace().real();
}

std::pair<FockOperator, FockOperator> ladder_operators(int cutoff) {
  const int dim = cutoff + 1;
  CMatrix a = CMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
  FockOperator lower{a, cutoff};
  FockOperator raise{a.adjoint(), cutoff};
  return {lower, raise};
}

FockOperator number_operator(int cutoff) {
  const int dim = cutoff + 1;
  CMatrix n = CMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) n(k, k) = double(k);
  return {n, cutoff};
}

FockOperator position_operator(int cutoff) {
  auto [a, ad] = ladder_operators(cutoff);
  return {0.5 * (a.matrix + ad.matrix), cutoff};
}

FockOperator momentum_operator(int cutoff) {
  auto [a, ad] = ladder_operators(cutoff);
  return {Complex(0, -0.5) * (a.matrix - ad.matrix), cutoff};
}

CMatrix expm_scaling_squaring(const CMatrix& m) {
  double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm > 0.5) {
    norm *= 0.5;
    ++squarings;
  }
  const double scale = std::ldexp(1.0, -squarings);
  CMatrix x = m * scale;
  CMatrix result = CMatrix::Identity(m.rows(), m.cols());
  CMatrix term = result;
  for (int k = 1; k <= 24; ++k) {
    term = (term * x) / double(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

FockOperator matrix_exponential(const FockOperator& generator) {
  const CMatrix& g = generator.matrix;
  // i * (anti-Hermitian) is Hermitian; exp via eigendecomposition then.
  CMatrix h = Complex(0, -1) * g;
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-12 * (1.0 + h.cwiseAbs().maxCoeff())) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    CVector phases(h.rows());
    for (int k = 0; k < h.rows(); ++k)
      phases[k] = std::exp(Complex(0, 1) * es.eigenvalues()[k]);
    CMatrix result =
        es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    return {result, generator.cutoff};
  }
  return {expm_scaling_squaring(g), generator.cutoff};
}

FockVector build_trisqueezed(Complex triplicity, int cutoff) {
  auto [a, ad] = ladder_operators(cutoff);
  CMatrix a3 = a.matrix * a.matrix * a.matrix;
  CMatrix gen = Complex(0, 1) * (std::conj(triplicity) * a3 +
                                 triplicity * a3.adjoint());
  FockOperator u = matrix_exponential({gen, cutoff});
  return FockVector::make(u.matrix.col(0));
}

FockVector build_kerr_trisqueezed(double g3, double kerr, double tau,
                                  int cutoff) {
  auto [a, ad] = ladder_operators(cutoff);
  CMatrix a3 = a.matrix * a.matrix * a.matrix;
  CMatrix a2 = a.matrix * a.matrix;
  CMatrix h = g3 * (a3 + a3.adjoint()) + kerr * (a2.adjoint() * a2);
  FockOperator u = matrix_exponential({Complex(0, tau) * h, cutoff});
  return FockVector::make(u.matrix.col(0));
}

FockVector rotate_state(const FockVector& state, double phi) {
  FockVector out = state;
  for (int n = 0; n <= state.cutoff; ++n)
    out.amplitudes[n] *= std::exp(Complex(0, -phi * n));
  return out;
}

Complex fock_overlap(const FockVector& a, const FockVector& b) {
  const int n = std::min<int>(a.amplitudes.size(), b.amplitudes.size());
  return a.amplitudes.head(n).dot(b.amplitudes.head(n));
}

FockVector with_cutoff(const FockVector& state, int cutoff) {
  CVector amps = CVector::Zero(cutoff + 1);
  const int n = std::min<int>(state.amplitudes.size(), cutoff + 1);
  amps.head(n) = state.amplitudes.head(n);
  FockVector out;
  out.cutoff = cutoff;
  out.amplitudes = amps / amps.norm();
  return out;
}

}  // namespace gconv
