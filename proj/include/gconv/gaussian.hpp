#ifndef GCONV_GAUSSIAN_HPP
#define GCONV_GAUSSIAN_HPP

#include "gconv/optimize.hpp"
#include "gconv/phase_space.hpp"
#include "gconv/quadrature.hpp"

namespace gconv {

/// Single-mode Gaussian channel acting on characteristic functions:
///   chi'(r) = exp(-1/4 r^T Om^T Y Om r + i l^T Om r) chi(Om^T X^T Om r),
/// with Om = [[0,1],[-1,0]]. l = (q, p) is exactly the displacement added
/// to the state's mean.
struct GaussianChannel {
  Eigen::Matrix2d X = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d Y = Eigen::Matrix2d::Zero();
  Eigen::Vector2d l = Eigen::Vector2d::Zero();
};

/// Complete-positivity check: both Hermitian matrices Y +- i(Om - X Om X^T)
/// must be PSD. Returns the pass/fail verdict and the smallest eigenvalue.
struct PhysicalityReport {
  bool physical;
  double min_eigenvalue;
};
PhysicalityReport is_physical(const GaussianChannel& ch, double tol = -1e-9);

ChiFn apply_channel(const ChiFn& chi, const GaussianChannel& ch,
                    bool check = true);

/// [[g, g e], [c g, 1/g + c g e]]; always det = 1.
Eigen::Matrix2d symplectic_matrix(double g, double e, double c);

/// Characteristic function of a position wavefunction, evaluated by a 1D
/// Gauss-Legendre overlap integral with the displaced copy.
ChiFn characteristic_fn(const QuadWavefunction& psi, int nodes = 240);

/// Fidelity between the channel output for chi_in and the target, at full
/// reference quadrature. Slow exact scorer.
double det_objective(const ChiFn& chi_in, const ChiFn& chi_target,
                     const GaussianChannel& ch,
                     const FidelityOptions& opts = {});

enum class DetMode { FullCptp, Symplectic, SqueezeDisplace };

DetMode det_mode_from_string(const std::string& name);
std::string to_string(DetMode mode);

GaussianChannel channel_from_params(DetMode mode, const Eigen::VectorXd& x);
Bounds det_default_bounds(DetMode mode);

/// Precomputed objective for channel optimization: the target characteristic
/// function is tabulated at fixed quadrature nodes and the input's on a
/// uniform grid with bicubic interpolation, so one fidelity evaluation costs
/// microseconds instead of a full double quadrature.
class DetProblem {
 public:
  DetProblem(const FockVector& input, double cubicity, double xi_target,
             int opt_nodes = 120, double opt_halfwidth = 8.0,
             double table_halfwidth = 14.0, double table_step = 0.05,
             int threads = 0);

  /// Fast approximate fidelity for optimizer iterations.
  double fidelity_fast(const GaussianChannel& ch) const;
  /// Reference-quadrature fidelity with exact characteristic functions.
  double fidelity_exact(const GaussianChannel& ch, int threads = 0) const;

  const ChiFn& chi_in() const { return chi_in_; }
  const ChiFn& chi_target() const { return chi_target_; }

 private:
  ChiFn chi_in_;
  ChiFn chi_target_;
  QuadRule rule_;
  CMatrix target_neg_weighted_;  // w_i w_j chi_target(-r_i, -r_j)
  Eigen::MatrixXcd table_;       // chi_in on the uniform grid
  double table_halfwidth_, table_step_;

  Complex chi_in_interp(double rq, double rp) const;
};

struct DetResult {
  OptResult opt;
  GaussianChannel channel;
  double fidelity;       // exact re-score at the optimum
  double fidelity_fast;  // value seen by the optimizer
  DetMode mode;
};

DetResult optimize_deterministic(const FockVector& input, double cubicity,
                                 double xi_target, DetMode mode,
                                 const SwarmConfig& config);

}  // namespace gconv

#endif
