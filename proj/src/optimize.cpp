#include "gconv/optimize.hpp"

#include <random>
#include <stdexcept>
#include <vector>

#include "gconv/quadrature.hpp"

namespace gconv {

void Bounds::validate() const {
  if (lower.size() != upper.size() || lower.size() == 0)
    throw std::invalid_argument("bounds must be non-empty and equal-sized");
  for (int i = 0; i < lower.size(); ++i)
    if (!(lower[i] <= upper[i]))
      throw std::invalid_argument("lower bound exceeds upper bound");
}

namespace {

Eigen::VectorXd clip(const Eigen::VectorXd& x, const Bounds& b) {
  return x.cwiseMax(b.lower).cwiseMin(b.upper);
}

// Evaluate a population concurrently; values land in a preallocated vector so
// the later (sequential, index-ordered) reduction is thread-count independent.
void evaluate_all(const Objective& f, const std::vector<Eigen::VectorXd>& xs,
                  std::vector<double>& values, int threads) {
  parallel_for(static_cast<int>(xs.size()),
               [&](int i) { values[i] = f(xs[i]); }, threads);
}

}  // namespace

OptResult pso_minimize(const Objective& objective, const Bounds& bounds,
                       const SwarmConfig& config) {
  bounds.validate();
  if (config.n_particles < 2)
    throw std::invalid_argument("need at least 2 particles");
  const int dim = bounds.dim();
  const int np = config.n_particles;
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Eigen::VectorXd> x(np), v(np), best_x(np);
  std::vector<double> value(np), best_value(np);
  if (config.grid_init) {
    // Lattice with as many levels per axis as fit the particle budget.
    int levels = std::max(2, static_cast<int>(std::floor(
                                  std::pow(double(np), 1.0 / dim))));
    for (int i = 0; i < np; ++i) {
      Eigen::VectorXd p(dim);
      int idx = i;
      for (int d = 0; d < dim; ++d) {
        int cell = idx % levels;
        idx /= levels;
        p[d] = bounds.lower[d] +
               (bounds.upper[d] - bounds.lower[d]) * cell / (levels - 1);
      }
      x[i] = p;
      v[i] = Eigen::VectorXd::Zero(dim);
    }
  } else {
    for (int i = 0; i < np; ++i) {
      x[i].resize(dim);
      for (int d = 0; d < dim; ++d)
        x[i][d] = bounds.lower[d] +
                  (bounds.upper[d] - bounds.lower[d]) * unit(rng);
      v[i] = Eigen::VectorXd::Zero(dim);
    }
  }
  for (size_t i = 0; i < config.seeds.size() && i < static_cast<size_t>(np); ++i)
    x[i] = clip(config.seeds[i], bounds);

  OptResult result;
  result.seed = config.seed;
  evaluate_all(objective, x, value, config.threads);
  result.evaluations = np;
  int g = 0;
  for (int i = 0; i < np; ++i) {
    best_x[i] = x[i];
    best_value[i] = value[i];
    if (value[i] < value[g]) g = i;
  }
  Eigen::VectorXd gbest_x = x[g];
  double gbest_value = value[g];

  for (int iter = 0; iter < config.n_iter; ++iter) {
    for (int i = 0; i < np; ++i) {
      for (int d = 0; d < dim; ++d) {
        const double e1 = unit(rng), e2 = unit(rng);
        v[i][d] = config.inertia * v[i][d] +
                  config.alpha * e1 * (gbest_x[d] - x[i][d]) +
                  config.beta * e2 * (best_x[i][d] - x[i][d]);
      }
      x[i] = clip(x[i] + v[i], bounds);
    }
    evaluate_all(objective, x, value, config.threads);
    result.evaluations += np;
    for (int i = 0; i < np; ++i) {
      if (value[i] < best_value[i]) {
        best_value[i] = value[i];
        best_x[i] = x[i];
      }
      if (value[i] < gbest_value) {
        gbest_value = value[i];
        gbest_x = x[i];
      }
    }
    if (config.progress) config.progress(iter, gbest_value);
  }
  result.best_x = gbest_x;
  result.best_value = gbest_value;
  result.budget = std::to_string(np) + "x" + std::to_string(config.n_iter);
  return result;
}

OptResult de_minimize(const Objective& objective, const Bounds& bounds,
                      const DeConfig& config) {
  bounds.validate();
  if (config.n_pop < 4)
    throw std::invalid_argument("rand/1/bin needs at least 4 members");
  const int dim = bounds.dim();
  const int np = config.n_pop;
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto rand_index = [&](int n) {
    return static_cast<int>(unit(rng) * n) % n;
  };

  std::vector<Eigen::VectorXd> x(np), trial(np);
  std::vector<double> value(np), trial_value(np);
  for (int i = 0; i < np; ++i) {
    x[i].resize(dim);
    for (int d = 0; d < dim; ++d)
      x[i][d] = bounds.lower[d] +
                (bounds.upper[d] - bounds.lower[d]) * unit(rng);
  }
  OptResult result;
  result.seed = config.seed;
  evaluate_all(objective, x, value, config.threads);
  result.evaluations = np;

  for (int iter = 0; iter < config.n_iter; ++iter) {
    for (int i = 0; i < np; ++i) {
      int r1, r2, r3;
      do r1 = rand_index(np); while (r1 == i);
      do r2 = rand_index(np); while (r2 == i || r2 == r1);
      do r3 = rand_index(np); while (r3 == i || r3 == r1 || r3 == r2);
      const int jrand = rand_index(dim);
      Eigen::VectorXd t = x[i];
      for (int d = 0; d < dim; ++d)
        if (d == jrand || unit(rng) < config.crossover)
          t[d] = x[r1][d] + config.weight * (x[r2][d] - x[r3][d]);
      trial[i] = clip(t, bounds);
    }
    evaluate_all(objective, trial, trial_value, config.threads);
    result.evaluations += np;
    for (int i = 0; i < np; ++i) {
      if (trial_value[i] <= value[i]) {
        x[i] = trial[i];
        value[i] = trial_value[i];
      }
    }
    if (config.progress) {
      double best = value[0];
      for (double v : value) best = std::min(best, v);
      config.progress(iter, best);
    }
  }
  int g = 0;
  for (int i = 0; i < np; ++i)
    if (value[i] < value[g]) g = i;
  result.best_x = x[g];
  result.best_value = value[g];
  result.budget = std::to_string(np) + "x" + std::to_string(config.n_iter);
  return result;
}

OptResult grid_refine(const Objective& objective, const Eigen::VectorXd& center,
                      const Eigen::VectorXd& radius, int nodes,
                      const Bounds* bounds, int threads) {
  const int dim = static_cast<int>(center.size());
  OptResult result;
  if (nodes <= 1) {
    result.best_x = center;
    result.best_value = objective(center);
    result.evaluations = 1;
    return result;
  }
  long total = 1;
  for (int d = 0; d < dim; ++d) total *= nodes;
  std::vector<Eigen::VectorXd> points;
  points.reserve(total);
  for (long k = 0; k < total; ++k) {
    Eigen::VectorXd p = center;
    long idx = k;
    for (int d = 0; d < dim; ++d) {
      int cell = idx % nodes;
      idx /= nodes;
      p[d] += radius[d] * (2.0 * cell / (nodes - 1) - 1.0);
    }
    if (bounds) p = clip(p, *bounds);
    points.push_back(p);
  }
  // Make sure the incoming center itself competes.
  points.push_back(bounds ? clip(center, *bounds) : center);
  std::vector<double> values(points.size());
  evaluate_all(objective, points, values, threads);
  int g = 0;
  for (size_t i = 0; i < points.size(); ++i)
    if (values[i] < values[g]) g = static_cast<int>(i);
  result.best_x = points[g];
  result.best_value = values[g];
  result.evaluations = static_cast<long>(points.size());
  return result;
}

}  // namespace gconv
