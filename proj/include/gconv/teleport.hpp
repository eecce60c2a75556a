#ifndef GCONV_TELEPORT_HPP
#define GCONV_TELEPORT_HPP

#include "gconv/protocol.hpp"
#include "gconv/wavefunction.hpp"

namespace gconv {

/// Result of commuting the squeeze/displace feed-forward through the
/// C_Z = e^{2i q x q} coupling (hbar = 1/2 scaling):
///   C_Z^dag (1 x D) C_Z = (1 x D) e^{-i d_phase_coeff q1}
///   C_Z^dag (1 x S) C_Z = (1 x S) e^{-i s_phase_coeff q1 q2}
/// with D = e^{-2i(q p_hat - p q_hat)} and S = e^{-i s (qp + pq)}.
/// The s-coefficient is exact (the quadratic truncation 2(s - s^2/2) is kept
/// alongside for reference; it matches the exact value only to second order).
struct FeedForwardCorrection {
  double s;
  double disp_q;
  double disp_p;
  double d_phase_coeff;
  double s_phase_coeff;
  double s_phase_coeff_quadratic;
};

FeedForwardCorrection commuted_corrections(double s, double q, double p);

/// Kronecker product, for two-mode operator checks.
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Position wavefunction of a comb of width-delta Gaussians (the GKP state's
/// momentum comb re-read as the position filter of the teleportation gadget).
double comb_amplitude(const GkpComb& comb, double q);

/// Output of the C_Z + p=0-postselection gadget on (input GKP, ancilla):
/// psi(q) proportional to ancilla(q) * comb(q), normalized.
QuadWavefunction teleported_wavefunction(const QuadWavefunction& ancilla,
                                         const GkpComb& comb);

/// Gate error 1 - <Psi_ideal| rho_gadget |Psi_ideal> where the ideal branch
/// feeds the pure target and the other branch the (generally mixed) ancilla
/// given as a position kernel.
double gate_error(const PositionKernel& ancilla, const QuadWavefunction& target,
                  const GkpComb& comb);

/// Pure-ancilla specialization, |<psi_ideal-gadget | psi_ancilla-gadget>|^2.
double gate_error_pure(const QuadWavefunction& ancilla,
                       const QuadWavefunction& target, const GkpComb& comb,
                       int nodes = 600, double halfwidth = 8.0);

}  // namespace gconv

#endif
