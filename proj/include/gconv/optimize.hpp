#ifndef GCONV_OPTIMIZE_HPP
#define GCONV_OPTIMIZE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>

namespace gconv {

using Objective = std::function<double(const Eigen::VectorXd&)>;

struct Bounds {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  void validate() const;
  int dim() const { return static_cast<int>(lower.size()); }
};

struct SwarmConfig {
  int n_particles = 60;
  int n_iter = 200;
  double alpha = 0.05;   // pull toward the global best
  double beta = 1.05;    // pull toward the personal best
  double inertia = 0.5;
  std::uint64_t seed = 1;
  int threads = 0;       // objective evaluations per iteration
  bool grid_init = false;
  // Optional warm starts: the first seeds.size() particles begin at these
  // points (clipped to the box) instead of random positions.
  std::vector<Eigen::VectorXd> seeds;
  std::function<void(int, double)> progress;  // (iteration, best value)
};

struct DeConfig {
  int n_pop = 40;
  int n_iter = 200;
  double weight = 0.8;     // differential weight F
  double crossover = 0.9;  // crossover rate CR
  std::uint64_t seed = 1;
  int threads = 0;
  std::function<void(int, double)> progress;
};

struct OptResult {
  Eigen::VectorXd best_x;
  double best_value = 0.0;
  long evaluations = 0;
  std::uint64_t seed = 0;
  std::string budget;
};

/// Particle swarm with box clipping. All random draws happen sequentially on
/// the calling thread; objective evaluations run concurrently with an
/// index-ordered reduction, so the result is independent of thread count.
OptResult pso_minimize(const Objective& objective, const Bounds& bounds,
                       const SwarmConfig& config);

/// Differential evolution, rand/1/bin.
OptResult de_minimize(const Objective& objective, const Bounds& bounds,
                      const DeConfig& config);

/// Best point of a tensor grid of the given radius around center (local
/// polish; nodes = 1 returns the center).
OptResult grid_refine(const Objective& objective, const Eigen::VectorXd& center,
                      const Eigen::VectorXd& radius, int nodes,
                      const Bounds* bounds = nullptr, int threads = 0);

}  // namespace gconv

#endif
