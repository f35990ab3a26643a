#pragma once

#include <functional>

#include "rscqt/qops.hpp"

namespace rscqt {

struct OptimizerConfig {
  int max_iterations = 5000;
  double grad_tol = 1e-8;       // stop when ||g||_inf below this
  double rel_obj_tol = 1e-12;   // stop on relative objective change
  double fd_step = 1e-6;        // central-difference step scale
  int lbfgs_memory = 10;
  double tolerance = 1e-10;     // slack granted in dominance-style checks
};

struct MinimizeResult {
  Rvec x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

using ScalarFn = std::function<double(const Rvec&)>;

Rvec central_difference_gradient(const ScalarFn& f, const Rvec& x, double step_scale);

/// L-BFGS with Armijo backtracking. Descent is monotone: every accepted
/// iterate has objective <= the previous one.
MinimizeResult lbfgs_minimize(const ScalarFn& f, const Rvec& x0,
                              const OptimizerConfig& cfg = {});

}  // namespace rscqt
