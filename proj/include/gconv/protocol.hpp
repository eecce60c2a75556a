#ifndef GCONV_PROTOCOL_HPP
#define GCONV_PROTOCOL_HPP

#include "gconv/optimize.hpp"
#include "gconv/phase_space.hpp"

namespace gconv {

/// Knobs of the beam-splitter + rotation + binned-homodyne circuit.
struct CircuitParams {
  double theta = 1.0;          // beam-splitter angle
  double xi = 0.3;             // ancilla squeezing (real, >= 0 by convention)
  double q_beta = 0.8;         // ancilla displacement, position part
  double p_beta = 0.0;         // ancilla displacement, momentum part
  double gamma = -M_PI / 2.0;  // phase rotation on the output mode
  double d = -1.0;             // final momentum displacement
  double q_n = 0.0;            // selected homodyne bin center
  double delta = 0.1;          // bin half-width
  double eta = 1.0;            // homodyne efficiency
};

struct QuadratureScheme {
  int n_q0 = 240;   // target/output axis
  int n_q2 = 240;   // transmitted-mode axis
  int n_bin = 32;   // measured-outcome axis across the bin
  int n_eta = 64;   // smearing axis when eta < 1
  double halfwidth = 8.0;
};

/// The fixed data of one conversion problem: the input state's position
/// wavefunction and the target cubic phase parameters.
struct ProtocolSetup {
  QuadWavefunction input;
  double cubicity = 0.1558;
  double xi_target = 0.0;
  QuadratureScheme quad;
};

/// Analytic kernel of the rotated two-mode overlap integral,
///   sqrt(2/pi) pi (1 - e^{-2 i gamma})^{-1/2}
///   exp(i csc(gamma) (-2 q0 q2 + (q0^2 + q2^2) cos gamma)),
/// principal square-root branch.
Complex overlap_kernel(double q0, double q2, double gamma);

/// <target(displaced by -d) | output state for measured value q>.
Complex overlap(const ProtocolSetup& setup, const CircuitParams& params,
                double q);

/// Probability that the homodyne outcome lands in [q_n - delta, q_n + delta]
/// (efficiency 1).
double success_probability(const ProtocolSetup& setup,
                           const CircuitParams& params);

/// Bin-averaged fidelity to the displaced target (efficiency 1).
double conditional_fidelity(const ProtocolSetup& setup,
                            const CircuitParams& params);

/// Fidelity and probability with Gaussian-smeared (efficiency eta < 1)
/// homodyne detection.
struct FidelityProbability {
  double fidelity;
  double probability;
};
FidelityProbability conditional_fidelity_inefficient(
    const ProtocolSetup& setup, const CircuitParams& params);

/// The bin-averaged conditional output state, projected onto the Fock basis,
/// with its Wigner function and mana.
struct ConditionalState {
  FockDensity rho;
  WignerGrid wigner;
  ManaResult mana;
  double probability;
};
ConditionalState output_conditional_state(const ProtocolSetup& setup,
                                          const CircuitParams& params,
                                          int cutoff = 60, int threads = 0);

/// Position-representation kernel <q_i| rho |q_j> of the conditional state,
/// sampled on the setup's Gauss-Legendre nodes with trace-one normalization
/// under those weights (for gate-teleportation error evaluation).
struct PositionKernel {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  CMatrix rho;
};
PositionKernel conditional_position_kernel(const ProtocolSetup& setup,
                                           const CircuitParams& params);

struct ProbOptimizeOptions {
  bool free_gamma = false;
  double delta = 0.1;
  SwarmConfig swarm;
};

struct ProbResult {
  OptResult opt;
  CircuitParams params;
  double fidelity;
  double probability;
};

/// Optimizes (theta, q_beta, xi, d) — plus gamma when freed — over the
/// standard box, maximizing the conditional fidelity at the q_n = 0 bin.
ProbResult optimize_probabilistic(const ProtocolSetup& setup,
                                  const ProbOptimizeOptions& options);

Bounds prob_default_bounds(bool free_gamma);

}  // namespace gconv

#endif
