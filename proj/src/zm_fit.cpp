#include "zipfian/zm_fit.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "zipfian/errors.hpp"
#include "zipfian/least_squares.hpp"

namespace zipfian {

SlopeBand slope_band(const ZMParams& params, double lower_slope, double upper_slope) {
  if (!(lower_slope < upper_slope) || upper_slope >= 0.0) {
    throw DomainError("slope band edges must satisfy lower < upper < 0");
  }
  SlopeBand band;
  band.lower_slope = lower_slope;
  band.upper_slope = upper_slope;
  const double s = params.exponent;
  const double q = params.shift;
  const double upper_mag = -upper_slope;
  const double lower_mag = -lower_slope;

  if (q == 0.0) {
    // Constant slope -s: either every rank is inside the band or none is.
    if (s >= upper_mag && s <= lower_mag) {
      band.bar_min = 0.0;
      band.bar_max = std::numeric_limits<double>::infinity();
    } else {
      band.empty = true;
    }
    return band;
  }
  if (s <= upper_mag) {
    band.empty = true;  // slope never reaches the shallow edge
    return band;
  }
  band.bar_min = upper_mag * q / (s - upper_mag);
  band.bar_max = s > lower_mag ? lower_mag * q / (s - lower_mag)
                               : std::numeric_limits<double>::infinity();
  return band;
}

double flat_head_q_bound(double exponent, double epsilon, double r_head) {
  if (epsilon <= 0.0) throw DomainError("epsilon must be positive");
  if (r_head < 1.0) throw DomainError("r_head must be >= 1");
  if (epsilon >= exponent) return 0.0;
  return (exponent / epsilon - 1.0) * r_head;
}

FitMode parse_fit_mode(std::string_view name) {
  if (name == "raw") return FitMode::Raw;
  if (name == "normalized" || name == "norm") return FitMode::Normalized;
  throw DataError("unknown fit mode '" + std::string(name) + "'");
}

std::string_view fit_mode_name(FitMode mode) {
  return mode == FitMode::Raw ? "raw" : "normalized";
}

namespace {

struct StartPoint {
  double amplitude;
  double shift;
  double exponent;
};

// The solver works in (log A, q, s) so amplitude moves are multiplicative;
// raw fits often have to traverse many orders of magnitude in A.
ResidualFn make_residual_fn(std::span<const double> ranks,
                            std::span<const double> values, FitMode mode) {
  return [ranks, values, mode](const std::vector<double>& params,
                               std::vector<double>& residuals,
                               std::vector<double>* jacobian) {
    const bool raw = mode == FitMode::Raw;
    const double log_a = raw ? params[0] : 0.0;
    const double q = raw ? params[1] : params[0];
    const double s = raw ? params[2] : params[1];
    const int n_params = raw ? 3 : 2;
    for (size_t i = 0; i < ranks.size(); ++i) {
      double log_shifted = std::log(ranks[i] + q);
      double model = std::exp(log_a - s * log_shifted);
      residuals[i] = model - values[i];
      if (jacobian != nullptr) {
        double* row = &(*jacobian)[i * static_cast<size_t>(n_params)];
        int col = 0;
        if (raw) row[col++] = model;                          // d/d(log A)
        row[col++] = -s * model / (ranks[i] + q);             // d/dq
        row[col++] = -log_shifted * model;                    // d/ds
      }
    }
  };
}

}  // namespace

ZMFit fit_zm_curve(std::span<const double> ranks, std::span<const double> values,
                   FitMode mode, const FitOptions& options) {
  if (ranks.size() != values.size()) {
    throw DataError("rank and value arrays differ in length");
  }
  if (ranks.size() < 4) {
    throw DataError("insufficient data: need at least 4 points, have " +
                    std::to_string(ranks.size()));
  }
  for (size_t i = 0; i < ranks.size(); ++i) {
    if (!(ranks[i] > 0.0) || !(values[i] > 0.0)) {
      throw DataError("ranks and frequencies must be positive");
    }
  }

  const bool raw = mode == FitMode::Raw;
  FitBounds bounds = options.bounds;
  const std::span<const double> original_values = values;

  // Raw fits run on head-normalized values so the residual scale is O(1)
  // and the convergence tolerances are meaningful for any count magnitude.
  // Under the log-amplitude parameterization the rescale is exact.
  const double value_scale = raw ? values[0] : 1.0;
  std::vector<double> scaled;
  if (raw && value_scale != 1.0) {
    scaled.assign(values.begin(), values.end());
    for (double& v : scaled) v /= value_scale;
    values = scaled;
  }
  const double head = values[0];
  if (std::isnan(bounds.a_min)) {
    bounds.a_min = 1e-6 * head;
  } else if (raw) {
    bounds.a_min /= value_scale;
  }
  if (std::isnan(bounds.a_max)) {
    bounds.a_max = std::exp(std::log(10.0 * head) +
                            bounds.s_max * std::log1p(bounds.q_max));
  } else if (raw) {
    bounds.a_max /= value_scale;
  }

  std::vector<double> lower, upper;
  if (raw) {
    lower = {std::log(bounds.a_min), bounds.q_min, bounds.s_min};
    upper = {std::log(bounds.a_max), bounds.q_max, bounds.s_max};
  } else {
    lower = {bounds.q_min, bounds.s_min};
    upper = {bounds.q_max, bounds.s_max};
  }

  std::vector<StartPoint> starts;
  if (options.init.has_value()) {
    starts.push_back({options.init->amplitude / value_scale, options.init->shift,
                      options.init->exponent});
  }
  for (double s0 : {0.5, 1.0, 2.0}) {
    for (double q0 : {0.0, 1.0, 10.0}) {
      starts.push_back({head, q0, s0});
    }
  }
  if (options.extra_starts > 0) {
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> q_dist(bounds.q_min,
                                                  std::min(100.0, bounds.q_max));
    std::uniform_real_distribution<double> log_s_dist(std::log(0.1),
                                                      std::log(bounds.s_max));
    for (int i = 0; i < options.extra_starts; ++i) {
      double q0 = q_dist(rng);
      double s0 = std::exp(log_s_dist(rng));
      double a0 = std::clamp(head * std::pow(1.0 + q0, s0), bounds.a_min, bounds.a_max);
      starts.push_back({a0, q0, s0});
    }
  }

  ResidualFn fn = make_residual_fn(ranks, values, mode);
  LeastSquaresOptions ls_options;
  ls_options.max_iterations = options.max_iterations;
  ls_options.step_tolerance = options.step_tolerance;
  ls_options.gradient_tolerance = options.gradient_tolerance;

  const int n_residuals = static_cast<int>(ranks.size());
  auto active_bounds = [](const LeastSquaresResult& result) {
    size_t n = 0;
    for (size_t i = 0; i < result.at_lower.size(); ++i) {
      if (result.at_lower[i] || result.at_upper[i]) ++n;
    }
    return n;
  };
  LeastSquaresResult best;
  bool have_best = false;
  for (const StartPoint& start : starts) {
    std::vector<double> x0 =
        raw ? std::vector<double>{std::log(start.amplitude), start.shift, start.exponent}
            : std::vector<double>{start.shift, start.exponent};
    LeastSquaresResult result =
        solve_bounded_least_squares(fn, n_residuals, std::move(x0), lower, upper, ls_options);
    // Lowest SSE wins; on ties prefer the least-constrained optimum.
    bool better = false;
    if (!have_best) {
      better = true;
    } else {
      double tie = 1e-12 * std::max({best.sse, result.sse, 1e-300});
      if (result.sse < best.sse - tie) {
        better = true;
      } else if (result.sse <= best.sse + tie) {
        better = active_bounds(result) < active_bounds(best);
      }
    }
    if (better) {
      best = std::move(result);
      have_best = true;
    }
  }

  ZMFit fit;
  fit.mode = mode;
  if (raw) {
    fit.params =
        ZMParams{std::exp(best.params[0]) * value_scale, best.params[1], best.params[2]};
  } else {
    fit.params = ZMParams{1.0, best.params[0], best.params[1]};
  }
  fit.converged = best.converged;
  fit.iterations = best.iterations;
  fit.sse = best.sse * value_scale * value_scale;
  fit.n_points = ranks.size();

  const char* names_raw[] = {"A", "q", "s"};
  const char* names_norm[] = {"q", "s"};
  for (size_t i = 0; i < best.params.size(); ++i) {
    if (best.at_lower[i] || best.at_upper[i]) {
      fit.at_bound.push_back(raw ? names_raw[i] : names_norm[i]);
    }
  }

  std::vector<double> fitted(ranks.size());
  for (size_t i = 0; i < ranks.size(); ++i) fitted[i] = zm_value(fit.params, ranks[i]);
  fit.r2 = r2_log(original_values, fitted);
  return fit;
}

ZMFit fit_zm(const RankFrequencyTable& table, FitMode mode, const FitOptions& options) {
  if (table.distinct_units() < 4) {
    throw DataError("insufficient data: need at least 4 distinct units, have " +
                    std::to_string(table.distinct_units()));
  }
  std::vector<double> ranks(table.distinct_units());
  for (size_t i = 0; i < ranks.size(); ++i) ranks[i] = static_cast<double>(i + 1);
  std::vector<double> values =
      mode == FitMode::Raw ? table.counts_real() : table.frequencies();
  ZMFit fit = fit_zm_curve(ranks, values, mode, options);
  fit.total = table.total_units();
  return fit;
}

double r2_log(std::span<const double> observed, std::span<const double> fitted) {
  if (observed.size() != fitted.size() || observed.empty()) {
    throw DataError("R2 needs matching non-empty observed and fitted arrays");
  }
  double mean = 0.0;
  std::vector<double> log_obs(observed.size());
  for (size_t i = 0; i < observed.size(); ++i) {
    if (!(observed[i] > 0.0) || !(fitted[i] > 0.0)) {
      throw DataError("R2 requires positive observed and fitted values");
    }
    log_obs[i] = std::log(observed[i]);
    mean += log_obs[i];
  }
  mean /= static_cast<double>(observed.size());
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (size_t i = 0; i < observed.size(); ++i) {
    double res = log_obs[i] - std::log(fitted[i]);
    double dev = log_obs[i] - mean;
    ss_res += res * res;
    ss_tot += dev * dev;
  }
  if (ss_tot == 0.0) {
    throw DataError("R2 undefined: observed frequencies are all equal");
  }
  return 1.0 - ss_res / ss_tot;
}

double r2_log(const RankFrequencyTable& table, const ZMFit& fit) {
  std::vector<double> observed =
      fit.mode == FitMode::Raw ? table.counts_real() : table.frequencies();
  std::vector<double> fitted(observed.size());
  for (size_t i = 0; i < observed.size(); ++i) {
    fitted[i] = zm_value(fit.params, static_cast<double>(i + 1));
  }
  return r2_log(observed, fitted);
}

}  // namespace zipfian
