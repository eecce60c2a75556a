#include "gconv/phase_space.hpp"

#include <cmath>

#include "gconv/errors.hpp"
#include "gconv/quadrature.hpp"

namespace gconv {

Complex displacement_element(int m, int n, Complex alpha) {
  if (m < 0 || n < 0) throw std::invalid_argument("negative Fock index");
  const double x = std::norm(alpha);
  if (x == 0.0) return m == n ? 1.0 : 0.0;
  const int lo = std::min(m, n), hi = std::max(m, n);
  const int k = hi - lo;
  // sqrt(lo!/hi!) * base^{k} * e^{-x/2}, accumulated to avoid overflow.
  const Complex base = (m >= n) ? alpha : -std::conj(alpha);
  Complex pref = std::exp(-0.5 * x);
  for (int j = lo + 1; j <= hi; ++j) pref *= base / std::sqrt(double(j));
  // L_lo^{k}(x) by the upward degree recurrence.
  double lm = 0.0, l = 1.0;
  for (int j = 0; j < lo; ++j) {
    double lp = ((2.0 * j + 1.0 + k - x) * l - (j + k) * lm) / (j + 1.0);
    lm = l;
    l = lp;
  }
  return pref * l;
}

CMatrix displacement_matrix(int cutoff, Complex alpha) {
  const int dim = cutoff + 1;
  CMatrix d(dim, dim);
  const double x = std::norm(alpha);
  if (x == 0.0) {
    d.setIdentity();
    return d;
  }
  // Walk each diagonal m - n = +-k with the Laguerre degree recurrence;
  // the naive two-term recurrence in m alone loses all accuracy for
  // |alpha|^2 beyond ~20 at high photon number.
  for (int k = 0; k < dim; ++k) {
    Complex pref = std::exp(-0.5 * x);
    for (int j = 1; j <= k; ++j) pref *= alpha / std::sqrt(double(j));
    // lower-triangle mirror: base -conj(alpha) instead of alpha
    const Complex ratio =
        (k == 0) ? Complex(1.0) : std::pow(-std::conj(alpha) / alpha, k);
    double lm = 0.0, l = 1.0;  // L_n^k(x) upward in n
    for (int n = 0; n + k < dim; ++n) {
      d(n + k, n) = pref * l;
      if (k > 0) d(n, n + k) = pref * ratio * l;
      pref *= std::sqrt(double(n + 1) / double(n + 1 + k));
      const double lp = ((2.0 * n + 1.0 + k - x) * l - (n + k) * lm) / (n + 1.0);
      lm = l;
      l = lp;
    }
  }
  return d;
}

ChiFn characteristic_fn(const FockVector& state) {
  CVector c = state.amplitudes;
  int cutoff = state.cutoff;
  return [c, cutoff](double rq, double rp) -> Complex {
    const Complex alpha(0.5 * rq, 0.5 * rp);
    CMatrix d = displacement_matrix(cutoff, alpha);
    return c.dot(d * c);  // <psi| D |psi>, dot conjugates the left factor
  };
}

ChiFn characteristic_fn(const FockDensity& rho) {
  CMatrix r = rho.matrix;
  int cutoff = rho.cutoff;
  return [r, cutoff](double rq, double rp) -> Complex {
    const Complex alpha(0.5 * rq, 0.5 * rp);
    CMatrix d = displacement_matrix(cutoff, alpha);
    return d.cwiseProduct(r.transpose()).sum();  // sum_mn D_mn rho_nm
  };
}

double WignerGrid::integral() const {
  Eigen::VectorXd rows(q_axis.size());
  for (int i = 0; i < q_axis.size(); ++i)
    rows[i] = trapezoid(p_axis, values.row(i).transpose());
  return trapezoid(q_axis, rows);
}

double WignerGrid::abs_integral() const {
  Eigen::VectorXd rows(q_axis.size());
  for (int i = 0; i < q_axis.size(); ++i)
    rows[i] = trapezoid(p_axis, values.row(i).cwiseAbs().transpose());
  return trapezoid(q_axis, rows);
}

double WignerGrid::max_boundary_abs() const {
  double m = 0.0;
  m = std::max(m, values.row(0).cwiseAbs().maxCoeff());
  m = std::max(m, values.row(values.rows() - 1).cwiseAbs().maxCoeff());
  m = std::max(m, values.col(0).cwiseAbs().maxCoeff());
  m = std::max(m, values.col(values.cols() - 1).cwiseAbs().maxCoeff());
  return m;
}

Eigen::VectorXd default_wigner_axis() { return uniform_axis(-4.0, 4.0, 401); }

WignerGrid wigner_from_wavefunction(const QuadWavefunction& psi,
                                    const Eigen::VectorXd& q_axis,
                                    const Eigen::VectorXd& p_axis,
                                    int threads) {
  const double hw = psi.halfwidth;
  const double pmax = std::max(std::abs(p_axis[0]),
                               std::abs(p_axis[p_axis.size() - 1]));
  // e^{4ipy} cycles 4*pmax*2*hw/(2 pi) times over the y range; keep >= 20
  // nodes per cycle.
  const int cycles = static_cast<int>(std::ceil(4.0 * pmax * hw / M_PI)) + 1;
  const int ny = std::max(513, 20 * cycles);
  QuadRule y = gauss_legendre(ny, -hw, hw);

  CMatrix phases(p_axis.size(), ny);
  for (int j = 0; j < p_axis.size(); ++j)
    for (int k = 0; k < ny; ++k)
      phases(j, k) = y.weights[k] * std::exp(Complex(0, 4.0 * p_axis[j] * y.nodes[k]));

  WignerGrid grid;
  grid.q_axis = q_axis;
  grid.p_axis = p_axis;
  grid.values.resize(q_axis.size(), p_axis.size());
  parallel_for(static_cast<int>(q_axis.size()), [&](int i) {
    const double q = q_axis[i];
    CVector a(ny);
    for (int k = 0; k < ny; ++k)
      a[k] = std::conj(psi(q + y.nodes[k])) * psi(q - y.nodes[k]);
    grid.values.row(i) = (2.0 / M_PI) * (phases * a).real();
  }, threads);
  return grid;
}

WignerGrid wigner_laguerre(const FockDensity& rho, const Eigen::VectorXd& q_axis,
                           const Eigen::VectorXd& p_axis, int threads) {
  // W(q,p) = (2/pi) sum_mn <m|D(2(q+ip))|n> rho_nm (-1)^n
  CMatrix parity_rho_t = rho.matrix.transpose();
  for (int n = 0; n <= rho.cutoff; ++n)
    if (n % 2) parity_rho_t.col(n) = -parity_rho_t.col(n);
  WignerGrid grid;
  grid.q_axis = q_axis;
  grid.p_axis = p_axis;
  grid.values.resize(q_axis.size(), p_axis.size());
  parallel_for(static_cast<int>(q_axis.size()), [&](int i) {
    for (int j = 0; j < p_axis.size(); ++j) {
      const Complex alpha(2.0 * q_axis[i], 2.0 * p_axis[j]);
      CMatrix d = displacement_matrix(rho.cutoff, alpha);
      grid.values(i, j) =
          (2.0 / M_PI) * d.cwiseProduct(parity_rho_t).sum().real();
    }
  }, threads);
  return grid;
}

WignerGrid wigner_from_chi(const ChiFn& chi, const Eigen::VectorXd& q_axis,
                           const Eigen::VectorXd& p_axis, double r_halfwidth,
                           double r_step, int threads) {
  const int nr = 2 * static_cast<int>(std::round(r_halfwidth / r_step)) + 1;
  Eigen::VectorXd r_axis = uniform_axis(-r_halfwidth, r_halfwidth, nr);

  CMatrix chi_table(nr, nr);  // chi_table(a, b) = chi(rq_a, rp_b)
  parallel_for(nr, [&](int a) {
    for (int b = 0; b < nr; ++b) chi_table(a, b) = chi(r_axis[a], r_axis[b]);
  }, threads);

  // First pass: integrate out rp against e^{-i rp q}.
  CMatrix t(nr, static_cast<int>(q_axis.size()));
  parallel_for(static_cast<int>(q_axis.size()), [&](int i) {
    CVector phase(nr);
    for (int b = 0; b < nr; ++b)
      phase[b] = r_step * std::exp(Complex(0, -r_axis[b] * q_axis[i]));
    t.col(i) = chi_table * phase;
  }, threads);

  // Second pass: integrate out rq against e^{+i rq p}.
  WignerGrid grid;
  grid.q_axis = q_axis;
  grid.p_axis = p_axis;
  grid.values.resize(q_axis.size(), p_axis.size());
  parallel_for(static_cast<int>(p_axis.size()), [&](int j) {
    CVector phase(nr);
    for (int a = 0; a < nr; ++a)
      phase[a] = r_step * std::exp(Complex(0, r_axis[a] * p_axis[j]));
    grid.values.col(j) =
        (t.transpose() * phase).real() / (4.0 * M_PI * M_PI);
  }, threads);
  return grid;
}

WignerGrid wigner_grid_adaptive(const QuadWavefunction& wf, int threads) {
  // 0.02 spacing in the core, relaxed to 0.05 once an axis outgrows +-8;
  // the Wigner fringes of the states handled here are far coarser than that.
  auto axis = [](double hw) {
    const double step = hw <= 8.0 ? 0.02 : 0.05;
    return uniform_axis(-hw, hw, 2 * int(std::round(hw / step)) + 1);
  };
  // q and p extents grow independently: cubic-phase-like states spread in
  // momentum (p ~ r q^2) far beyond their position support.
  static const double sizes[] = {4, 6, 8, 10, 12, 14, 16, 20, 24, 28};
  const int last = int(std::size(sizes)) - 1;
  int iq = 0, ip = 0;
  Eigen::VectorXd edge(2);
  for (;;) {
    const Eigen::VectorXd qa = axis(sizes[iq]), pa = axis(sizes[ip]);
    edge << -sizes[iq], sizes[iq];
    const double bq = wigner_from_wavefunction(wf, edge, pa, threads)
                          .values.cwiseAbs().maxCoeff();
    edge << -sizes[ip], sizes[ip];
    const double bp = wigner_from_wavefunction(wf, qa, edge, threads)
                          .values.cwiseAbs().maxCoeff();
    bool grew = false;
    if (bq > 1e-6 && iq < last) { ++iq; grew = true; }
    if (bp > 1e-6 && ip < last) { ++ip; grew = true; }
    if (grew) continue;
    if (bq > 1e-6 || bp > 1e-6)
      throw DomainError("Wigner mass reaches the grid boundary; enlarge the grid");
    WignerGrid grid = wigner_from_wavefunction(wf, qa, pa, threads);
    if (std::abs(grid.integral() - 1.0) > 2e-3)
      throw DomainError("Wigner integral deviates from 1 beyond tolerance");
    return grid;
  }
}

WignerGrid wigner_grid(const FockVector& state, int threads) {
  return wigner_grid_adaptive(position_wavefunction(state), threads);
}

namespace {

// Catmull-Rom along one axis; x in units of the grid step from node i1.
inline double catmull(double pm1, double p0, double p1, double p2, double u) {
  return 0.5 * ((2.0 * p0) + (-pm1 + p1) * u +
                (2.0 * pm1 - 5.0 * p0 + 4.0 * p1 - p2) * u * u +
                (-pm1 + 3.0 * p0 - 3.0 * p1 + p2) * u * u * u);
}

double bicubic_sample(const WignerGrid& g, double q, double p) {
  const double q0 = g.q_axis[0], dq = g.q_axis[1] - g.q_axis[0];
  const double p0 = g.p_axis[0], dp = g.p_axis[1] - g.p_axis[0];
  const double fq = (q - q0) / dq, fp = (p - p0) / dp;
  const int iq = int(std::floor(fq)), ip = int(std::floor(fp));
  if (iq < 1 || iq + 2 >= g.q_axis.size() || ip < 1 || ip + 2 >= g.p_axis.size())
    return 0.0;
  const double uq = fq - iq, up = fp - ip;
  double col[4];
  for (int k = -1; k <= 2; ++k)
    col[k + 1] = catmull(g.values(iq + k, ip - 1), g.values(iq + k, ip),
                         g.values(iq + k, ip + 1), g.values(iq + k, ip + 2), up);
  return catmull(col[0], col[1], col[2], col[3], uq);
}

}  // namespace

WignerGrid wigner_affine(const WignerGrid& src, const Eigen::Matrix2d& X,
                         const Eigen::Vector2d& l,
                         const Eigen::VectorXd& q_axis,
                         const Eigen::VectorXd& p_axis) {
  const Eigen::Matrix2d Xi = X.inverse();
  WignerGrid out;
  out.q_axis = q_axis;
  out.p_axis = p_axis;
  out.values.resize(q_axis.size(), p_axis.size());
  for (int i = 0; i < q_axis.size(); ++i)
    for (int j = 0; j < p_axis.size(); ++j) {
      Eigen::Vector2d r(q_axis[i] - l[0], p_axis[j] - l[1]);
      Eigen::Vector2d s = Xi * r;
      out.values(i, j) = bicubic_sample(src, s[0], s[1]);
    }
  return out;
}

ManaResult mana(const WignerGrid& grid) {
  const double raw = std::log2(grid.abs_integral());
  return {std::max(0.0, raw), raw};
}

ManaResult mana(const FockVector& state, int threads) {
  return mana(wigner_grid(state, threads));
}

double fidelity_char(const ChiFn& chi_a, const ChiFn& chi_b,
                     const FidelityOptions& opts) {
  QuadRule rule = gauss_legendre(opts.nodes, -opts.halfwidth, opts.halfwidth);
  Eigen::VectorXd row_sums(opts.nodes);
  parallel_for(opts.nodes, [&](int i) {
    Complex acc = 0.0;
    for (int j = 0; j < opts.nodes; ++j)
      acc += rule.weights[j] * chi_a(rule.nodes[i], rule.nodes[j]) *
             chi_b(-rule.nodes[i], -rule.nodes[j]);
    row_sums[i] = (rule.weights[i] * acc).real();
  }, opts.threads);
  double f = row_sums.sum() / (4.0 * M_PI);
  if (!std::isfinite(f)) throw IntegrationError("overlap integral not finite");
  return std::clamp(f, 0.0, 1.0 + 1e-6);
}

double matching_cubicity_for_mana(double mana_reference, double xi_target,
                                  double tol, int threads) {
  auto mana_of = [&](double r) {
    QuadWavefunction wf = cubic_phase_wavefunction(r, xi_target);
    return mana(wigner_grid_adaptive(wf, threads)).value;
  };
  double lo = 0.0, hi = 0.25;
  while (mana_of(hi) < mana_reference) {
    lo = hi;
    hi *= 2.0;
    if (hi > 2.0)
      throw std::runtime_error("no cubicity bracket below r = 2");
  }
  for (int iter = 0; iter < 60; ++iter) {
    double mid = 0.5 * (lo + hi);
    double m = mana_of(mid);
    if (std::abs(m - mana_reference) < tol) return mid;
    (m < mana_reference ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double find_matching_cubicity(Complex triplicity, double xi_target, double tol,
                              int threads) {
  double m_in = mana(build_trisqueezed(triplicity), threads).value;
  return matching_cubicity_for_mana(m_in, xi_target, tol, threads);
}

}  // namespace gconv
