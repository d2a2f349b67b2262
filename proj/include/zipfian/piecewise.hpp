// Continuous piecewise-linear least squares on log-log rank-frequency data.
#pragma once

#include <span>
#include <vector>

#include "zipfian/rank_table.hpp"

namespace zipfian {

/// A continuous piecewise-linear function of log rank. Breakpoints sit at
/// data log-ranks; adjacent segments agree there exactly by construction.
struct PiecewiseFit {
  int segments = 3;
  std::vector<double> breakpoints;      // rank units, strictly increasing
  std::vector<double> breakpoints_log;  // the same in log-rank coordinates
  std::vector<double> slopes;           // one per segment, left to right
  double intercept = 0.0;               // value of log f at log r = 0
  double r2 = 0.0;                      // log-space, same formula as r2_log
  double sse = 0.0;                     // log-space residual sum
};

/// Exhaustive search over breakpoint placements at data ranks (at least two
/// points per segment), solving each placement exactly as a linear least
/// squares problem. Returns the best SSE; ties pick the lexicographically
/// smallest breakpoints. Throws DataError when N < 2*segments + 1.
PiecewiseFit fit_piecewise_loglog(const RankFrequencyTable& table, int segments = 3);

/// Curve-level entry used by tests and plot output.
PiecewiseFit fit_piecewise_curve(std::span<const double> ranks,
                                 std::span<const double> values, int segments);

/// exp of the piecewise-linear value at log rank; linear extension beyond
/// the outermost breakpoints.
double evaluate_piecewise(const PiecewiseFit& fit, double rank);

}  // namespace zipfian
