#ifndef GCONV_FOCK_HPP
#define GCONV_FOCK_HPP

#include <Eigen/Dense>
#include <complex>
#include <utility>

namespace gconv {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// Convention throughout: hbar = 1/2, q = (a + a^dag)/2, p = (a - a^dag)/(2i).

/// Normalized pure state in a truncated Fock basis.
struct FockVector {
  CVector amplitudes;  // length cutoff + 1
  int cutoff = 0;

  /// Normalizes and enforces the tail-mass gate (top 10% of indices must
  /// carry < tail_tol of the norm), throwing TruncationError otherwise.
  /// Three-photon-squeezed states have algebraically decaying number tails,
  /// so the default is loose enough to accept converged interiors while
  /// still catching grossly inadequate cutoffs.
  static FockVector make(CVector amplitudes, double tail_tol = 1e-3);

  double tail_mass() const;
};

/// Dense operator on the truncated Fock space.
struct FockOperator {
  CMatrix matrix;
  int cutoff = 0;
};

/// Density matrix in the truncated Fock basis.
struct FockDensity {
  CMatrix matrix;
  int cutoff = 0;

  static FockDensity from_pure(const FockVector& psi);
  double purity() const;
};

/// (a, a^dag) with a|n> = sqrt(n)|n-1>.
std::pair<FockOperator, FockOperator> ladder_operators(int cutoff);

FockOperator number_operator(int cutoff);
FockOperator position_operator(int cutoff);   // (a + a^dag)/2
FockOperator momentum_operator(int cutoff);   // (a - a^dag)/(2i)

/// exp(M). Anti-Hermitian generators go through a Hermitian
/// eigendecomposition; everything else through scaling and squaring.
FockOperator matrix_exponential(const FockOperator& generator);

/// Scaling-and-squaring Taylor exponential, kept public as an independent
/// reference for the eigendecomposition path.
CMatrix expm_scaling_squaring(const CMatrix& m);

/// exp(i (conj(t) a^3 + t a^dag^3)) |0>, the three-photon squeezed state.
FockVector build_trisqueezed(Complex triplicity, int cutoff = 60);

/// Vacuum evolved under g3 (a^3 + a^dag^3) + K a^dag^2 a^2 for time tau.
/// The resulting triplicity is g3 * tau.
FockVector build_kerr_trisqueezed(double g3, double kerr, double tau,
                                  int cutoff = 60);

/// exp(-i phi n) applied to a state (phase rotation, Fock-diagonal).
FockVector rotate_state(const FockVector& state, double phi);

/// <a|b>; fidelity between pure states is |<a|b>|^2.
Complex fock_overlap(const FockVector& a, const FockVector& b);

/// Same state re-expressed at a different cutoff (pad with zeros or
/// truncate-and-renormalize).
FockVector with_cutoff(const FockVector& state, int cutoff);

}  // namespace gconv

#endif
