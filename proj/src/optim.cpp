#include "densecode/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace densecode {

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          const std::vector<double>& x0, double step,
                          int max_iters, double diam_tol) {
  const int n = static_cast<int>(x0.size());
  const double alpha = 1.0, gamma = 2.0, beta = 0.5, sigma = 0.5;

  std::vector<std::vector<double>> x(n + 1, x0);
  for (int i = 0; i < n; ++i) x[i + 1][i] += step;
  std::vector<double> fx(n + 1);
  for (int i = 0; i <= n; ++i) fx[i] = f(x[i]);

  std::vector<int> idx(n + 1);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);

  SimplexResult result;
  int it = 0;
  for (; it < max_iters; ++it) {
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fx[a] < fx[b]; });
    const int best = idx[0], worst = idx[n], second_worst = idx[n - 1];

    double diam = 0.0;
    for (int i = 1; i <= n; ++i)
      for (int j = 0; j < n; ++j)
        diam = std::max(diam, std::abs(x[idx[i]][j] - x[best][j]));
    if (diam < diam_tol && std::abs(fx[worst] - fx[best]) < diam_tol) {
      result.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) centroid[j] += x[idx[i]][j];
    for (int j = 0; j < n; ++j) centroid[j] /= n;

    for (int j = 0; j < n; ++j) xr[j] = centroid[j] + alpha * (centroid[j] - x[worst][j]);
    const double fr = f(xr);

    if (fr < fx[best]) {
      for (int j = 0; j < n; ++j) xe[j] = centroid[j] + gamma * (xr[j] - centroid[j]);
      const double fe = f(xe);
      if (fe < fr) {
        x[worst] = xe;
        fx[worst] = fe;
      } else {
        x[worst] = xr;
        fx[worst] = fr;
      }
      continue;
    }
    if (fr < fx[second_worst]) {
      x[worst] = xr;
      fx[worst] = fr;
      continue;
    }

    // contraction toward the better of worst/reflected
    const bool outside = fr < fx[worst];
    const std::vector<double>& base = outside ? xr : x[worst];
    for (int j = 0; j < n; ++j) xc[j] = centroid[j] + beta * (base[j] - centroid[j]);
    const double fc = f(xc);
    if (fc < std::min(fr, fx[worst])) {
      x[worst] = xc;
      fx[worst] = fc;
      continue;
    }

    // shrink toward the best vertex
    for (int i = 1; i <= n; ++i) {
      for (int j = 0; j < n; ++j)
        x[idx[i]][j] = x[best][j] + sigma * (x[idx[i]][j] - x[best][j]);
      fx[idx[i]] = f(x[idx[i]]);
    }
  }

  const auto best_it = std::min_element(fx.begin(), fx.end());
  result.x = x[static_cast<int>(best_it - fx.begin())];
  result.fmin = *best_it;
  result.iters = it;
  return result;
}

}  // namespace densecode
