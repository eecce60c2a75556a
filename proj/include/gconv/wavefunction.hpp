#ifndef GCONV_WAVEFUNCTION_HPP
#define GCONV_WAVEFUNCTION_HPP

#include <functional>

#include "gconv/fock.hpp"

namespace gconv {

/// Position-representation wavefunction psi(q) under hbar = 1/2,
/// with a half-width outside which it is numerically negligible.
struct QuadWavefunction {
  std::function<Complex(double)> eval;
  double halfwidth = 10.0;

  Complex operator()(double q) const { return eval(q); }
};

/// Squeezing parameter (signed, natural log units) from a dB figure:
/// positive dB means p-squeezing here, so the sign comes out negative.
double xi_from_db(double db);

/// Normalized Hermite-function samples phi_0..phi_nmax at the given points,
/// column n holding phi_n. These are the position wavefunctions of |n>.
Eigen::MatrixXd hermite_functions(const Eigen::VectorXd& q, int nmax);

/// psi(q) = sum_n c_n phi_n(q) as a callable (evaluates the recurrence
/// per point; use hermite_functions for bulk grids).
QuadWavefunction position_wavefunction(const FockVector& state);

/// Cubic phase state with squeezed-vacuum envelope:
///   psi(q) = (2/pi)^{1/4} e^{xi/2} exp(-e^{2 xi} q^2) exp(i r q^3) e^{-i q d}
/// (d displaces in momentum; used for the displaced target).
QuadWavefunction cubic_phase_wavefunction(double cubicity, double xi,
                                          double d = 0.0);

/// Displaced squeezed vacuum D(beta) S(xi) |0> with complex xi allowed;
/// beta = q_beta + i p_beta in the q = (a + a^dag)/2 convention.
QuadWavefunction displaced_squeezed_wavefunction(Complex xi, double q_beta,
                                                 double p_beta);

/// Finite-energy GKP |+> in the momentum representation: a comb of
/// width-delta Gaussians at p = 2 s sqrt(pi) with Gaussian weights.
/// Returns peak centers and weights (both unnormalized envelope form).
struct GkpComb {
  Eigen::VectorXd centers;
  Eigen::VectorXd weights;
  double delta;
};
GkpComb gkp_plus_momentum(double delta = 0.2, double weight_floor = 1e-12);

}  // namespace gconv

#endif
