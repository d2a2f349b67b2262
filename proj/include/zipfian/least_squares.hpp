// Bounded nonlinear least squares: damped Gauss-Newton steps inside a box.
#pragma once

#include <functional>
#include <vector>

namespace zipfian {

/// Residual evaluation callback. Fills `residuals` (size num_residuals) and,
/// when `jacobian` is non-null, the row-major num_residuals x num_params
/// Jacobian of the residuals.
using ResidualFn =
    std::function<void(const std::vector<double>& params, std::vector<double>& residuals,
                       std::vector<double>* jacobian)>;

struct LeastSquaresOptions {
  int max_iterations = 5000;
  double step_tolerance = 1e-10;      // on the scaled step norm
  double gradient_tolerance = 1e-10;  // on the projected gradient inf-norm
};

struct LeastSquaresResult {
  std::vector<double> params;
  double sse = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<bool> at_lower;
  std::vector<bool> at_upper;
};

/// Minimizes ||r(x)||^2 over the box [lower, upper] starting from x0.
/// Trust-region style damping: steps solve (J'J + lambda diag(J'J)) d = -J'r,
/// are clipped to the box, and are accepted by actual-vs-predicted reduction.
/// Iterates stay feasible throughout. Convergence when the accepted step or
/// the projected gradient drops below tolerance.
LeastSquaresResult solve_bounded_least_squares(const ResidualFn& fn, int num_residuals,
                                               std::vector<double> x0,
                                               const std::vector<double>& lower,
                                               const std::vector<double>& upper,
                                               const LeastSquaresOptions& options = {});

}  // namespace zipfian
