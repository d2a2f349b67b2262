#include "zipfian/least_squares.hpp"

#include <algorithm>
#include <cmath>

#include "zipfian/errors.hpp"

namespace zipfian {

namespace {

/// Cholesky solve of a small SPD system; returns false when not SPD.
bool cholesky_solve(std::vector<double> a, std::vector<double> b, int n,
                    std::vector<double>& x) {
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double sum = a[static_cast<size_t>(i) * n + j];
      for (int k = 0; k < j; ++k) {
        sum -= a[static_cast<size_t>(i) * n + k] * a[static_cast<size_t>(j) * n + k];
      }
      if (i == j) {
        if (sum <= 0.0 || !std::isfinite(sum)) return false;
        a[static_cast<size_t>(i) * n + j] = std::sqrt(sum);
      } else {
        a[static_cast<size_t>(i) * n + j] = sum / a[static_cast<size_t>(j) * n + j];
      }
    }
  }
  // forward then backward substitution
  for (int i = 0; i < n; ++i) {
    double sum = b[i];
    for (int k = 0; k < i; ++k) sum -= a[static_cast<size_t>(i) * n + k] * b[k];
    b[i] = sum / a[static_cast<size_t>(i) * n + i];
  }
  x.assign(n, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double sum = b[i];
    for (int k = i + 1; k < n; ++k) sum -= a[static_cast<size_t>(k) * n + i] * x[k];
    x[i] = sum / a[static_cast<size_t>(i) * n + i];
  }
  return true;
}

double squared_norm(const std::vector<double>& v) {
  double out = 0.0;
  for (double x : v) out += x * x;
  return out;
}

}  // namespace

LeastSquaresResult solve_bounded_least_squares(const ResidualFn& fn, int num_residuals,
                                               std::vector<double> x0,
                                               const std::vector<double>& lower,
                                               const std::vector<double>& upper,
                                               const LeastSquaresOptions& options) {
  const int n = static_cast<int>(x0.size());
  if (static_cast<int>(lower.size()) != n || static_cast<int>(upper.size()) != n) {
    throw Error("bound vectors must match the parameter count");
  }
  for (int i = 0; i < n; ++i) {
    x0[i] = std::clamp(x0[i], lower[i], upper[i]);
  }

  std::vector<double> x = std::move(x0);
  std::vector<double> residuals(static_cast<size_t>(num_residuals));
  std::vector<double> jacobian(static_cast<size_t>(num_residuals) * n);
  std::vector<double> trial_residuals(static_cast<size_t>(num_residuals));

  fn(x, residuals, &jacobian);
  double sse = squared_norm(residuals);

  double lambda = 1e-3;
  bool converged = false;
  int iteration = 0;

  std::vector<double> gradient(n), jtj(static_cast<size_t>(n) * n), step(n);
  std::vector<double> x_trial(n);

  for (; iteration < options.max_iterations; ++iteration) {
    // gradient of 0.5*SSE is J'r; we track J'r and scale checks accordingly
    std::fill(gradient.begin(), gradient.end(), 0.0);
    std::fill(jtj.begin(), jtj.end(), 0.0);
    for (int r = 0; r < num_residuals; ++r) {
      const double* row = &jacobian[static_cast<size_t>(r) * n];
      for (int i = 0; i < n; ++i) {
        gradient[i] += row[i] * residuals[static_cast<size_t>(r)];
        for (int j = 0; j <= i; ++j) {
          jtj[static_cast<size_t>(i) * n + j] += row[i] * row[j];
        }
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        jtj[static_cast<size_t>(i) * n + j] = jtj[static_cast<size_t>(j) * n + i];
      }
    }

    // Projected gradient: zero out components pushing past an active bound.
    double projected_inf = 0.0;
    for (int i = 0; i < n; ++i) {
      double g = gradient[i];
      bool at_lo = x[i] <= lower[i];
      bool at_hi = x[i] >= upper[i];
      if ((at_lo && g > 0.0) || (at_hi && g < 0.0)) g = 0.0;
      projected_inf = std::max(projected_inf, std::abs(g));
    }
    if (projected_inf <= options.gradient_tolerance) {
      converged = true;
      break;
    }

    bool accepted = false;
    while (!accepted) {
      // (J'J + lambda diag(J'J)) step = -gradient
      std::vector<double> damped = jtj;
      for (int i = 0; i < n; ++i) {
        double d = jtj[static_cast<size_t>(i) * n + i];
        if (d <= 0.0) d = 1e-300;
        damped[static_cast<size_t>(i) * n + i] += lambda * d;
      }
      std::vector<double> rhs(n);
      for (int i = 0; i < n; ++i) rhs[i] = -gradient[i];

      bool solved = cholesky_solve(damped, rhs, n, step);
      if (!solved) {
        lambda = std::min(lambda * 10.0, 1e15);
        if (lambda >= 1e15) break;
        continue;
      }

      double clipped_norm = 0.0;
      for (int i = 0; i < n; ++i) {
        x_trial[i] = std::clamp(x[i] + step[i], lower[i], upper[i]);
        double moved = x_trial[i] - x[i];
        clipped_norm += moved * moved;
      }
      clipped_norm = std::sqrt(clipped_norm);

      double x_norm = std::sqrt(squared_norm(x));
      if (clipped_norm <= options.step_tolerance * (1.0 + x_norm)) {
        // Either converged or the damping made the step degenerate.
        fn(x_trial, trial_residuals, nullptr);
        double trial_sse = squared_norm(trial_residuals);
        if (trial_sse < sse) {
          x = x_trial;
          sse = trial_sse;
          fn(x, residuals, &jacobian);
        }
        converged = true;
        accepted = true;
        break;
      }

      fn(x_trial, trial_residuals, nullptr);
      double trial_sse = squared_norm(trial_residuals);

      // Predicted reduction from the quadratic model along the clipped step.
      double predicted = 0.0;
      for (int i = 0; i < n; ++i) {
        double moved = x_trial[i] - x[i];
        predicted -= 2.0 * gradient[i] * moved;
        double quad = 0.0;
        for (int j = 0; j < n; ++j) {
          quad += jtj[static_cast<size_t>(i) * n + j] * (x_trial[j] - x[j]);
        }
        predicted -= moved * quad;
      }

      double actual = sse - trial_sse;
      double rho = predicted > 0.0 ? actual / predicted : (actual > 0.0 ? 1.0 : -1.0);
      if (std::isfinite(trial_sse) && rho > 1e-4) {
        x = x_trial;
        sse = trial_sse;
        fn(x, residuals, &jacobian);
        lambda = std::max(lambda * 0.3, 1e-14);
        accepted = true;
      } else {
        lambda = std::min(lambda * 4.0, 1e15);
        if (lambda >= 1e15) break;  // cannot make progress
      }
    }
    if (converged) break;
    if (!accepted) break;  // damping exhausted
  }

  LeastSquaresResult result;
  result.params = x;
  result.sse = sse;
  result.iterations = iteration;
  result.converged = converged;
  result.at_lower.resize(n);
  result.at_upper.resize(n);
  for (int i = 0; i < n; ++i) {
    double scale = std::max({1.0, std::abs(lower[i]), std::abs(upper[i])});
    result.at_lower[i] = x[i] - lower[i] <= 1e-9 * scale;
    result.at_upper[i] = upper[i] - x[i] <= 1e-9 * scale;
  }
  return result;
}

}  // namespace zipfian
