#pragma once

// Limited-memory BFGS with Armijo backtracking, for the smooth surrogates in
// the Calderon and family-search solvers.

#include <Eigen/Dense>

#include <cmath>
#include <deque>
#include <limits>
#include <vector>

namespace regop::detail {

struct LbfgsOptions {
  int max_iterations = 1000;
  int memory = 10;
  double grad_tol = 1e-12;      // on ||grad||_inf
  double rel_decrease = 1e-15;  // stop after `patience` steps below this
  int patience = 5;
};

struct LbfgsResult {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Minimizes f, where fg(x, grad) returns f(x) and writes its gradient.
/// fg may return +inf outside the domain; the line search backs off.
template <typename F>
LbfgsResult lbfgs_minimize(F&& fg, Eigen::VectorXd& x, const LbfgsOptions& opts) {
  using Vec = Eigen::VectorXd;
  LbfgsResult res;
  Vec g(x.size());
  double f = fg(x, g);
  std::deque<Vec> s_hist, y_hist;
  std::deque<double> rho_hist;
  int slow = 0;

  for (int it = 0; it < opts.max_iterations; ++it) {
    res.iterations = it + 1;
    if (g.lpNorm<Eigen::Infinity>() <= opts.grad_tol) {
      res.converged = true;
      break;
    }
    // Two-loop recursion.
    Vec q = g;
    std::vector<double> alpha(s_hist.size());
    for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(q);
      q -= alpha[i] * y_hist[i];
    }
    if (!s_hist.empty()) q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(q);
      q += (alpha[i] - beta) * s_hist[i];
    }
    Vec dir = -q;
    double slope = g.dot(dir);
    if (!(slope < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      dir = -g;
      slope = -g.squaredNorm();
    }

    double step = 1.0;
    if (s_hist.empty()) step = std::min(1.0, 1.0 / std::max(g.lpNorm<Eigen::Infinity>(), 1e-300));
    Vec xn(x.size()), gn(x.size());
    double fn = std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      xn = x + step * dir;
      fn = fg(xn, gn);
      if (std::isfinite(fn) && fn <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (s_hist.empty()) {
        res.converged = true;  // no descent possible at working precision
        break;
      }
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      continue;
    }

    const Vec s = xn - x;
    const Vec y = gn - g;
    const double sy = s.dot(y);
    if (sy > 1e-300) {
      s_hist.push_back(s);
      y_hist.push_back(y);
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > opts.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    const double decrease = f - fn;
    x = xn;
    g = gn;
    f = fn;
    slow = decrease <= opts.rel_decrease * std::max(std::abs(f), 1.0) ? slow + 1 : 0;
    if (slow >= opts.patience) {
      res.converged = true;
      break;
    }
  }
  res.value = f;
  return res;
}

}  // namespace regop::detail
