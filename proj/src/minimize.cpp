#include "rscqt/minimize.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace rscqt {

Rvec central_difference_gradient(const ScalarFn& f, const Rvec& x, double step_scale) {
  Rvec g(x.size());
  Rvec xp = x;
  for (int k = 0; k < x.size(); ++k) {
    double h = step_scale * std::max(1.0, std::abs(x(k)));
    double orig = xp(k);
    xp(k) = orig + h;
    double fp = f(xp);
    xp(k) = orig - h;
    double fm = f(xp);
    xp(k) = orig;
    g(k) = (fp - fm) / (2.0 * h);
  }
  return g;
}

MinimizeResult lbfgs_minimize(const ScalarFn& f, const Rvec& x0,
                              const OptimizerConfig& cfg) {
  Rvec x = x0;
  double fx = f(x);
  if (!std::isfinite(fx)) throw std::invalid_argument("objective not finite at start");
  Rvec g = central_difference_gradient(f, x, cfg.fd_step);

  std::deque<Rvec> s_hist, y_hist;
  std::deque<double> rho_hist;

  MinimizeResult result;
  int iter = 0;
  bool converged = false;
  for (; iter < cfg.max_iterations; ++iter) {
    if (g.cwiseAbs().maxCoeff() <= cfg.grad_tol) {
      converged = true;
      break;
    }

    // two-loop recursion
    Rvec q = g;
    std::vector<double> alpha(s_hist.size());
    for (int k = static_cast<int>(s_hist.size()) - 1; k >= 0; --k) {
      alpha[k] = rho_hist[k] * s_hist[k].dot(q);
      q -= alpha[k] * y_hist[k];
    }
    if (!s_hist.empty()) {
      const Rvec& s = s_hist.back();
      const Rvec& y = y_hist.back();
      double gamma = s.dot(y) / y.dot(y);
      q *= gamma;
    }
    for (size_t k = 0; k < s_hist.size(); ++k) {
      double beta = rho_hist[k] * y_hist[k].dot(q);
      q += (alpha[k] - beta) * s_hist[k];
    }
    Rvec direction = -q;
    double slope = g.dot(direction);
    if (slope >= 0.0) {
      direction = -g;  // curvature info unusable, fall back to steepest descent
      slope = -g.squaredNorm();
    }

    // Armijo backtracking
    constexpr double c1 = 1e-4;
    double step = 1.0;
    double f_new = fx;
    Rvec x_new = x;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = x + step * direction;
      f_new = f(x_new);
      if (std::isfinite(f_new) && f_new <= fx + c1 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // gradient is at the finite-difference noise floor
      converged = g.cwiseAbs().maxCoeff() <= 1e3 * cfg.grad_tol;
      break;
    }

    Rvec g_new = central_difference_gradient(f, x_new, cfg.fd_step);
    Rvec s_vec = x_new - x;
    Rvec y_vec = g_new - g;
    if (s_vec.dot(y_vec) > 1e-14 * s_vec.norm() * y_vec.norm()) {
      s_hist.push_back(s_vec);
      y_hist.push_back(y_vec);
      rho_hist.push_back(1.0 / s_vec.dot(y_vec));
      if (static_cast<int>(s_hist.size()) > cfg.lbfgs_memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }

    double rel_change = std::abs(fx - f_new) / std::max(1.0, std::abs(fx));
    x = std::move(x_new);
    fx = f_new;
    g = std::move(g_new);
    if (rel_change <= cfg.rel_obj_tol) {
      converged = true;
      ++iter;
      break;
    }
  }

  result.x = std::move(x);
  result.value = fx;
  result.iterations = iter;
  result.converged = converged;
  return result;
}

}  // namespace rscqt
