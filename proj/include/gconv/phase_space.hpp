#ifndef GCONV_PHASE_SPACE_HPP
#define GCONV_PHASE_SPACE_HPP

#include <functional>

#include "gconv/fock.hpp"
#include "gconv/wavefunction.hpp"

namespace gconv {

/// Symmetric-ordering characteristic function chi(rq, rp) = Tr[D(-r) rho].
/// Under hbar = 1/2 and Omega = [[0,1],[-1,0]], D(-r) is the standard
/// displacement D(alpha) with alpha = (rq + i rp) / 2.
using ChiFn = std::function<Complex(double, double)>;

/// <m|D(alpha)|n> via associated Laguerre recurrences; exact elements,
/// independent of any cutoff.
Complex displacement_element(int m, int n, Complex alpha);

/// Full (cutoff+1)^2 table of <m|D(alpha)|n> by the two-term recurrence in m.
CMatrix displacement_matrix(int cutoff, Complex alpha);

ChiFn characteristic_fn(const FockVector& state);
ChiFn characteristic_fn(const FockDensity& rho);

struct WignerGrid {
  Eigen::VectorXd q_axis;
  Eigen::VectorXd p_axis;
  Eigen::MatrixXd values;  // values(i, j) = W(q_i, p_j)

  double integral() const;
  double abs_integral() const;
  double max_boundary_abs() const;
};

Eigen::VectorXd default_wigner_axis();  // [-4, 4] step 0.02

/// Wigner transform of a pure state from its position wavefunction:
///   W(q, p) = (2/pi) Int psi*(q+y) psi(q-y) e^{4ipy} dy.
WignerGrid wigner_from_wavefunction(const QuadWavefunction& psi,
                                    const Eigen::VectorXd& q_axis,
                                    const Eigen::VectorXd& p_axis,
                                    int threads = 0);

/// Wigner via the displaced-parity form
///   W(q, p) = (2/pi) sum_{nm} rho_{nm} (-1)^n <m|D(2(q+ip))|n>.
WignerGrid wigner_laguerre(const FockDensity& rho, const Eigen::VectorXd& q_axis,
                           const Eigen::VectorXd& p_axis, int threads = 0);

/// Wigner as the symplectic Fourier transform of the characteristic function,
/// two separable 1D passes over a uniform r-grid. Slow; kept as an
/// independent cross-check for the other two constructions.
WignerGrid wigner_from_chi(const ChiFn& chi, const Eigen::VectorXd& q_axis,
                           const Eigen::VectorXd& p_axis, double r_halfwidth = 18.0,
                           double r_step = 0.05, int threads = 0);

/// Default Wigner construction for a Fock state (wavefunction route),
/// with the normalization and boundary-mass gates applied; the grid keeps
/// 0.02 spacing and grows from +-4 until the boundary carries < 1e-6.
WignerGrid wigner_grid(const FockVector& state, int threads = 0);

/// Same adaptive construction for a closed-form wavefunction.
WignerGrid wigner_grid_adaptive(const QuadWavefunction& psi, int threads = 0);

/// W'(r) = W(X^{-1}(r - l)) on the requested axes: the exact Wigner
/// function after a noiseless (symplectic + displacement) Gaussian map.
/// Bicubic interpolation on the source grid, zero outside it.
WignerGrid wigner_affine(const WignerGrid& src, const Eigen::Matrix2d& X,
                         const Eigen::Vector2d& l,
                         const Eigen::VectorXd& q_axis,
                         const Eigen::VectorXd& p_axis);

struct ManaResult {
  double value;  // clamped to >= 0 for reporting
  double raw;    // log of the integrated |W|, unclamped
};

ManaResult mana(const WignerGrid& grid);
ManaResult mana(const FockVector& state, int threads = 0);

struct FidelityOptions {
  double halfwidth = 10.0;
  int nodes = 200;
  int threads = 0;
};

/// (1 / 4pi) Int chi_a(r) chi_b(-r) d^2 r, the overlap functional on
/// characteristic functions; equals |<a|b>|^2 for pure states.
double fidelity_char(const ChiFn& chi_a, const ChiFn& chi_b,
                     const FidelityOptions& opts = {});

/// Cubicity r such that the cubic phase state at the given target squeezing
/// carries the same mana as the supplied reference value, by bisection on
/// the monotone mana-vs-cubicity curve.
double matching_cubicity_for_mana(double mana_reference, double xi_target,
                                  double tol = 1e-3, int threads = 0);

/// Same, with the reference mana taken from a trisqueezed state.
double find_matching_cubicity(Complex triplicity, double xi_target,
                              double tol = 1e-3, int threads = 0);

}  // namespace gconv

#endif
