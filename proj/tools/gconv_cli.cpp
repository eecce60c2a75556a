#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <vector>

#include "gconv/errors.hpp"
#include "gconv/gaussian.hpp"
#include "gconv/protocol.hpp"
#include "gconv/serialize.hpp"
#include "gconv/teleport.hpp"

namespace {

using namespace gconv;

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

// Values from a --config JSON file fill in options the user did not pass on
// the command line. Injected into the argument list before parsing so the
// normal option machinery (validation, binding) applies to them.
std::vector<std::string> with_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  Json cfg = Json::parse(in);
  for (auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    bool present = false;
    for (const std::string& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) present = true;
    if (present) continue;  // explicit flags win
    args.push_back(flag);
    args.push_back(value.is_string() ? value.get<std::string>() : value.dump());
  }
  return args;
}

FockVector rotated_trisqueezed(double t, double kerr_ratio, int cutoff) {
  if (kerr_ratio <= 0.0)  // pure three-photon input, triplicity t e^{i pi/2}
    return build_trisqueezed(Complex(0.0, t), cutoff);
  // Kerr-deformed input with t/K = kerr_ratio; the pi/6 phase-space rotation
  // that turns triplicity t into t e^{i pi/2} commutes with the Kerr term.
  FockVector state = build_kerr_trisqueezed(t, t / kerr_ratio, 1.0, cutoff);
  return rotate_state(state, -M_PI / 6.0);
}

ProtocolSetup make_setup(const FockVector& input, double r, double xi_target) {
  ProtocolSetup setup;
  setup.input = position_wavefunction(input);
  setup.cubicity = r;
  setup.xi_target = xi_target;
  return setup;
}

int cmd_state(const std::string& kind, double t_re, double t_im, double r,
              double sq_db, double xi, double q_beta, double p_beta,
              double g3, double kerr, double tau, double delta_gkp, int cutoff,
              int threads, const std::string& out) {
  Json meta;
  meta["kind"] = kind;
  WignerGrid grid;
  bool have_grid = true;
  if (kind == "trisqueezed") {
    FockVector state = build_trisqueezed(Complex(t_re, t_im), cutoff);
    grid = wigner_grid(state, threads);
    meta["t"] = {t_re, t_im};
  } else if (kind == "kerr-trisqueezed") {
    FockVector state = build_kerr_trisqueezed(g3, kerr, tau, cutoff);
    grid = wigner_grid(state, threads);
    meta["g3"] = g3;
    meta["kerr"] = kerr;
    meta["tau"] = tau;
  } else if (kind == "cubic") {
    const double xi_t = xi_from_db(sq_db);
    Eigen::VectorXd axis = default_wigner_axis();
    grid = wigner_from_wavefunction(cubic_phase_wavefunction(r, xi_t), axis,
                                    axis, threads);
    meta["r"] = r;
    meta["xi_target"] = xi_t;
  } else if (kind == "squeezed") {
    Eigen::VectorXd axis = default_wigner_axis();
    grid = wigner_from_wavefunction(
        displaced_squeezed_wavefunction(xi, q_beta, p_beta), axis, axis,
        threads);
    meta["xi"] = xi;
    meta["beta"] = {q_beta, p_beta};
  } else if (kind == "gkp") {
    GkpComb comb = gkp_plus_momentum(delta_gkp);
    Json peaks = Json::array();
    for (int s = 0; s < comb.centers.size(); ++s)
      peaks.push_back({comb.centers[s], comb.weights[s]});
    meta["delta"] = delta_gkp;
    meta["momentum_peaks"] = peaks;
    have_grid = false;
  } else {
    throw CLI::ValidationError("--kind", "unknown state kind " + kind);
  }
  if (have_grid) {
    ManaResult m = mana(grid);
    meta["mana"] = m.value;
    meta["mana_raw"] = m.raw;
    meta["wigner_integral"] = grid.integral();
    write_file(out + ".csv", wigner_csv(grid));
  }
  write_file(out + ".json", meta.dump(2) + "\n");
  std::cout << meta.dump(2) << std::endl;
  return 0;
}

int cmd_det_opt(double t, double r, double sq_db, const std::string& mode_name,
                int cutoff, int particles, int iters, std::uint64_t seed,
                int threads, const std::string& out) {
  const double xi_t = xi_from_db(sq_db);
  FockVector input = build_trisqueezed(t, cutoff);
  if (r <= 0.0) r = find_matching_cubicity(t, xi_t, 1e-3, threads);
  DetMode mode = det_mode_from_string(mode_name);
  SwarmConfig config;
  config.n_particles = particles;
  config.n_iter = iters;
  config.seed = seed;
  config.threads = threads;
  DetResult result = optimize_deterministic(input, r, xi_t, mode, config);
  Json j;
  j["config"] = {{"t", t},     {"r", r},         {"sq_db", sq_db},
                 {"mode", mode_name}, {"cutoff", cutoff}, {"particles", particles},
                 {"iters", iters},    {"seed", seed}};
  j["fidelity"] = result.fidelity;
  j["fidelity_fast"] = result.fidelity_fast;
  j["channel"] = to_json(result.channel);
  j["opt"] = to_json(result.opt);
  if (!out.empty()) write_file(out, j.dump(2) + "\n");
  std::cout << j.dump(2) << std::endl;
  return 0;
}

int cmd_prob_opt(double t, double r, double sq_db, double delta,
                 bool free_gamma, double kerr_ratio, int cutoff, int particles,
                 int iters, std::uint64_t seed, int threads,
                 const std::string& out) {
  const double xi_t = xi_from_db(sq_db);
  FockVector input = rotated_trisqueezed(t, kerr_ratio, cutoff);
  ProtocolSetup setup = make_setup(input, r, xi_t);
  ProbOptimizeOptions options;
  options.free_gamma = free_gamma;
  options.delta = delta;
  options.swarm.n_particles = particles;
  options.swarm.n_iter = iters;
  options.swarm.seed = seed;
  options.swarm.threads = threads;
  ProbResult result = optimize_probabilistic(setup, options);
  Json j;
  j["config"] = {{"t", t},           {"r", r},
                 {"sq_db", sq_db},   {"delta", delta},
                 {"free_gamma", free_gamma}, {"kerr_ratio", kerr_ratio},
                 {"cutoff", cutoff}, {"particles", particles},
                 {"iters", iters},   {"seed", seed}};
  j["fidelity"] = result.fidelity;
  j["probability"] = result.probability;
  j["params"] = {{"theta", result.params.theta}, {"q_beta", result.params.q_beta},
                 {"xi", result.params.xi},       {"d", result.params.d},
                 {"gamma", result.params.gamma}, {"delta", result.params.delta}};
  j["opt"] = to_json(result.opt);
  if (!out.empty()) write_file(out, j.dump(2) + "\n");
  std::cout << j.dump(2) << std::endl;
  return 0;
}

CircuitParams reference_params() {
  // Best circuit for triplicity 0.1 at the default bin width.
  CircuitParams p;
  p.theta = 1.0133;
  p.q_beta = 0.8304;
  p.xi = 0.3257;
  p.d = -0.9525;
  return p;
}

int cmd_sweep(const std::string& type, double t, double r, double sq_db,
              double lo, double hi, int steps, int cutoff, int particles,
              int iters, std::uint64_t seed, int threads,
              const std::string& out) {
  const double xi_t = xi_from_db(sq_db);
  std::ostringstream csv;
  csv.precision(12);
  if (type == "delta") {
    ProtocolSetup setup = make_setup(rotated_trisqueezed(t, 0, cutoff), r, xi_t);
    CircuitParams p = reference_params();
    csv << "delta,fidelity,probability\n";
    for (int i = 0; i < steps; ++i) {
      p.delta = lo + (hi - lo) * i / std::max(1, steps - 1);
      csv << p.delta << ',' << conditional_fidelity(setup, p) << ','
          << success_probability(setup, p) << '\n';
    }
  } else if (type == "eta") {
    ProtocolSetup setup = make_setup(rotated_trisqueezed(t, 0, cutoff), r, xi_t);
    CircuitParams p = reference_params();
    csv << "eta,fidelity,probability\n";
    for (int i = 0; i < steps; ++i) {
      p.eta = lo + (hi - lo) * i / std::max(1, steps - 1);
      FidelityProbability fp = conditional_fidelity_inefficient(setup, p);
      csv << p.eta << ',' << fp.fidelity << ',' << fp.probability << '\n';
    }
  } else if (type == "mana") {
    // Fixed target, sweep the input triplicity; re-optimize at each point.
    csv << "t,mana_in,fidelity,probability,mana_out,prob_times_mana_out\n";
    for (int i = 0; i < steps; ++i) {
      const double ti = lo + (hi - lo) * i / std::max(1, steps - 1);
      FockVector input = rotated_trisqueezed(ti, 0, cutoff);
      ProtocolSetup setup = make_setup(input, r, xi_t);
      ProbOptimizeOptions options;
      options.swarm.n_particles = particles;
      options.swarm.n_iter = iters;
      options.swarm.seed = seed;
      options.swarm.threads = threads;
      ProbResult res = optimize_probabilistic(setup, options);
      double mana_in = mana(input, threads).value;
      ConditionalState cond =
          output_conditional_state(setup, res.params, cutoff, threads);
      csv << ti << ',' << mana_in << ',' << res.fidelity << ','
          << res.probability << ',' << cond.mana.value << ','
          << res.probability * cond.mana.value << '\n';
    }
  } else if (type == "kerr") {
    csv << "ratio,input_fidelity,fidelity,probability\n";
    FockVector pure = rotated_trisqueezed(t, 0, cutoff);
    for (int i = 0; i < steps; ++i) {
      const double ratio = lo + (hi - lo) * i / std::max(1, steps - 1);
      FockVector input = rotated_trisqueezed(t, ratio, cutoff);
      ProtocolSetup setup = make_setup(input, r, xi_t);
      ProbOptimizeOptions options;
      options.free_gamma = true;
      options.swarm.n_particles = particles;
      options.swarm.n_iter = iters;
      options.swarm.seed = seed;
      options.swarm.threads = threads;
      ProbResult res = optimize_probabilistic(setup, options);
      csv << ratio << ',' << std::norm(fock_overlap(input, pure)) << ','
          << res.fidelity << ',' << res.probability << '\n';
    }
  } else {
    throw CLI::ValidationError("--type", "unknown sweep type " + type);
  }
  write_file(out, csv.str());
  std::cout << csv.str();
  return 0;
}

int cmd_gate_error(double t, double r, double sq_db, double delta_gkp,
                   double lo, double hi, int steps, int cutoff, int particles,
                   int iters, std::uint64_t seed, int threads,
                   const std::string& out) {
  const double xi_t = xi_from_db(sq_db);
  GkpComb comb = gkp_plus_momentum(delta_gkp);
  QuadWavefunction target = cubic_phase_wavefunction(r, xi_t);
  std::ostringstream csv;
  csv.precision(12);
  csv << "ratio,input_fidelity,output_fidelity,gate_error\n";
  // Perfect-ancilla reference row.
  csv << "inf,1,1," << gate_error_pure(target, target, comb) << '\n';
  FockVector pure = rotated_trisqueezed(t, 0, cutoff);
  for (int i = 0; i < steps; ++i) {
    const double ratio = lo + (hi - lo) * i / std::max(1, steps - 1);
    FockVector input = rotated_trisqueezed(t, ratio, cutoff);
    ProtocolSetup setup = make_setup(input, r, xi_t);
    ProbOptimizeOptions options;
    options.free_gamma = true;
    options.swarm.n_particles = particles;
    options.swarm.n_iter = iters;
    options.swarm.seed = seed;
    options.swarm.threads = threads;
    ProbResult res = optimize_probabilistic(setup, options);
    PositionKernel kernel = conditional_position_kernel(setup, res.params);
    const double eps = gate_error(kernel, target, comb);
    csv << ratio << ',' << std::norm(fock_overlap(input, pure)) << ','
        << res.fidelity << ',' << eps << '\n';
  }
  write_file(out, csv.str());
  std::cout << csv.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian conversion toolkit: trisqueezed-to-cubic-phase "
               "state protocols"};
  app.require_subcommand(1);

  std::string config_path, kind = "trisqueezed", mode = "squeeze-displace";
  std::string sweep_type = "delta", out = "gconv_out";
  double t = 0.1, t_im = 0.0, r = -1.0, sq_db = 5.0, xi = 0.0, q_beta = 0.0,
         p_beta = 0.0, g3 = 0.1, kerr = 0.05, tau = 1.0, delta_gkp = 0.2,
         delta = 0.1, kerr_ratio = 0.0, lo = 0.0, hi = 1.0;
  int cutoff = 60, particles = 60, iters = 100, steps = 5, threads = 0;
  std::uint64_t seed = 1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON file with option defaults");
    cmd->add_option("--cutoff", cutoff);
    cmd->add_option("--threads", threads);
    cmd->add_option("--seed", seed);
    cmd->add_option("--out", out);
  };

  CLI::App* state = app.add_subcommand("state", "build a state, dump Wigner + mana");
  state->add_option("--kind", kind, "trisqueezed|cubic|squeezed|kerr-trisqueezed|gkp");
  state->add_option("--t", t);
  state->add_option("--t-im", t_im);
  state->add_option("--r", r);
  state->add_option("--sq-db", sq_db);
  state->add_option("--xi", xi);
  state->add_option("--qbeta", q_beta);
  state->add_option("--pbeta", p_beta);
  state->add_option("--g3", g3);
  state->add_option("--kerr", kerr);
  state->add_option("--tau", tau);
  state->add_option("--delta-gkp", delta_gkp);
  add_common(state);

  CLI::App* det = app.add_subcommand("det-opt", "optimize a Gaussian channel");
  det->add_option("--t", t);
  det->add_option("--r", r, "target cubicity (matched to the input's mana when omitted)");
  det->add_option("--sq-db", sq_db);
  det->add_option("--mode", mode, "full-cptp|symplectic|squeeze-displace");
  det->add_option("--particles", particles);
  det->add_option("--iters", iters);
  add_common(det);

  CLI::App* prob = app.add_subcommand("prob-opt", "optimize the measurement circuit");
  prob->add_option("--t", t);
  prob->add_option("--r", r)->required();
  prob->add_option("--sq-db", sq_db);
  prob->add_option("--delta", delta);
  prob->add_flag("--free-gamma", "optimize the rotation angle too");
  prob->add_option("--kerr-ratio", kerr_ratio, "t/K for a Kerr-deformed input (0 = pure)");
  prob->add_option("--particles", particles);
  prob->add_option("--iters", iters);
  add_common(prob);

  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweeps as CSV");
  sweep->add_option("--type", sweep_type, "delta|eta|mana|kerr");
  sweep->add_option("--t", t);
  sweep->add_option("--r", r)->required();
  sweep->add_option("--sq-db", sq_db);
  sweep->add_option("--lo", lo)->required();
  sweep->add_option("--hi", hi)->required();
  sweep->add_option("--steps", steps);
  sweep->add_option("--particles", particles);
  sweep->add_option("--iters", iters);
  add_common(sweep);

  CLI::App* gate = app.add_subcommand("gate-error", "teleportation gate error sweep");
  gate->add_option("--t", t);
  gate->add_option("--r", r)->required();
  gate->add_option("--sq-db", sq_db);
  gate->add_option("--delta-gkp", delta_gkp);
  gate->add_option("--lo", lo);
  gate->add_option("--hi", hi);
  gate->add_option("--steps", steps);
  gate->add_option("--particles", particles);
  gate->add_option("--iters", iters);
  add_common(gate);

  try {
    std::vector<std::string> args = with_config(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
    CLI::App* sub = app.get_subcommands().front();

    if (sub == state)
      return cmd_state(kind, t, t_im, r, sq_db, xi, q_beta, p_beta, g3, kerr,
                       tau, delta_gkp, cutoff, threads, out);
    if (sub == det)
      return cmd_det_opt(t, r, sq_db, mode, cutoff, particles, iters, seed,
                         threads, out.empty() ? "" : out);
    if (sub == prob)
      return cmd_prob_opt(t, r, sq_db, delta, prob->count("--free-gamma") > 0,
                          kerr_ratio, cutoff, particles, iters, seed, threads,
                          out);
    if (sub == sweep)
      return cmd_sweep(sweep_type, t, r, sq_db, lo, hi, steps, cutoff,
                       particles, iters, seed, threads, out);
    return cmd_gate_error(t, r, sq_db, delta_gkp, lo, hi, steps, cutoff,
                          particles, iters, seed, threads, out);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const gconv::TruncationError& e) {
    std::cerr << "numerical failure: " << e.what() << std::endl;
    return kExitNumerical;
  } catch (const gconv::IntegrationError& e) {
    std::cerr << "numerical failure: " << e.what() << std::endl;
    return kExitNumerical;
  } catch (const gconv::DomainError& e) {
    std::cerr << "numerical failure: " << e.what() << std::endl;
    return kExitNumerical;
  } catch (const gconv::ConstraintViolation& e) {
    std::cerr << "numerical failure: " << e.what() << std::endl;
    return kExitNumerical;
  } catch (const gconv::DegeneratePostselection& e) {
    std::cerr << "numerical failure: " << e.what() << std::endl;
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitUsage;
  }
}
