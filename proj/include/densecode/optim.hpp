#pragma once

#include <functional>
#include <vector>

namespace densecode {

/// Budget for the derivative-free minimizations used by the discord and
/// encoding-unitary searches.
struct OptimizerConfig {
  int restarts = 16;        // random simplex starts besides the identity start
  int max_iters = 2000;     // Nelder-Mead iterations per start
  double tol = 1e-8;        // simplex diameter at convergence
  int grid_resolution = 64; // coarse measurement grid per angle
};

struct SimplexResult {
  std::vector<double> x;
  double fmin = 0.0;
  int iters = 0;
  bool converged = false;
};

/// Nelder-Mead downhill simplex with standard coefficients. Deterministic:
/// the initial simplex is x0 plus `step` along each coordinate. Converges
/// when the simplex diameter (max vertex distance, infinity norm) and the
/// value spread both drop below diam_tol.
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          const std::vector<double>& x0, double step,
                          int max_iters, double diam_tol);

}  // namespace densecode
