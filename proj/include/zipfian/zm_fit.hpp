// Bounded Zipf-Mandelbrot fitting and the log-scale R2 score.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zipfian/rank_table.hpp"
#include "zipfian/zm_model.hpp"

namespace zipfian {

enum class FitMode { Raw, Normalized };

FitMode parse_fit_mode(std::string_view name);  // "raw" | "normalized"
std::string_view fit_mode_name(FitMode mode);

struct FitBounds {
  double q_min = 0.0;
  double q_max = 1000.0;
  double s_min = 0.0;  // solver box is [0, s_max]; s = 0 marks a degenerate fit
  double s_max = 20.0;
  // Amplitude box for raw fits, derived from the data when NaN:
  // [1e-6 * f(1), 10 * f(1) * (1 + q_max)^s_max].
  double a_min = std::numeric_limits<double>::quiet_NaN();
  double a_max = std::numeric_limits<double>::quiet_NaN();
};

struct FitOptions {
  FitBounds bounds;
  std::optional<ZMParams> init;  // tried first when present
  std::uint64_t seed = 0;        // drives the optional random extra starts
  int extra_starts = 0;
  int max_iterations = 5000;
  double step_tolerance = 1e-10;
  double gradient_tolerance = 1e-10;
};

struct ZMFit {
  ZMParams params;
  FitMode mode = FitMode::Normalized;
  double r2 = 0.0;  // log-scale R2 against the fitted data
  bool converged = false;
  int iterations = 0;
  double sse = 0.0;  // sum of squared residuals in the fit's residual space
  std::vector<std::string> at_bound;  // subset of {"A", "q", "s"}
  size_t n_points = 0;               // N
  std::uint64_t total = 0;           // L (0 for curve-level fits)
};

/// Least-squares fit of f(r) = A (r+q)^(-s) in linear frequency space.
/// Ranks and values must be positive and the same length (>= 4 points).
/// Normalized mode pins A = 1 and expects relative-frequency-scaled values;
/// raw mode fits A freely. Starts from a deterministic grid
/// {s0 in 0.5,1,2} x {q0 in 0,1,10} (plus optional seeded random starts) and
/// keeps the lowest SSE. Non-convergence is reported, not thrown.
ZMFit fit_zm_curve(std::span<const double> ranks, std::span<const double> values,
                   FitMode mode, const FitOptions& options = {});

/// Table-level entry: normalized mode fits relative frequencies, raw mode
/// fits counts. Throws DataError when the table has fewer than 4 rows.
ZMFit fit_zm(const RankFrequencyTable& table, FitMode mode,
             const FitOptions& options = {});

/// R2 = 1 - sum (log y - log yhat)^2 / sum (log y - mean log y)^2.
/// Throws DataError when the observed log values have zero variance.
double r2_log(std::span<const double> observed, std::span<const double> fitted);

/// Same score for a fitted curve evaluated on the table's ranks.
double r2_log(const RankFrequencyTable& table, const ZMFit& fit);

}  // namespace zipfian
