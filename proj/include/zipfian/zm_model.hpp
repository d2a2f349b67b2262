// The Zipf-Mandelbrot curve and its log-log slope diagnostics.
#pragma once

#include <cmath>
#include <limits>

namespace zipfian {

/// f(r) = amplitude * (r + shift)^(-exponent). amplitude > 0, shift >= 0,
/// exponent > 0. Normalized fits pin amplitude to 1.
struct ZMParams {
  double amplitude = 1.0;  // A
  double shift = 0.0;      // q
  double exponent = 1.0;   // s
};

/// Evaluated in log space so extreme amplitudes stay finite.
inline double zm_value(const ZMParams& params, double rank) {
  return std::exp(std::log(params.amplitude) -
                  params.exponent * std::log(rank + params.shift));
}

/// d log f / d log r = -s r / (r + q).
inline double local_slope(const ZMParams& params, double rank) {
  return -params.exponent * rank / (rank + params.shift);
}

/// Rank window where the fitted curve's local slope lies inside
/// [lower_slope, upper_slope]. bar_max is +infinity when the slope never
/// steepens past lower_slope; empty when it never reaches upper_slope.
struct SlopeBand {
  double lower_slope = -1.2;
  double upper_slope = -0.8;
  double bar_min = 0.0;
  double bar_max = std::numeric_limits<double>::infinity();
  bool empty = false;
};

/// Solves local_slope(r) = edge for both band edges; the slope is monotone
/// decreasing from 0 toward -s, so bar_min = |upper| q / (s - |upper|) and
/// bar_max = |lower| q / (s - |lower|).
SlopeBand slope_band(const ZMParams& params, double lower_slope = -1.2,
                     double upper_slope = -0.8);

/// Minimum shift keeping |local slope| <= epsilon across 1 <= r <= r_head:
/// (s / epsilon - 1) * r_head. Vacuous (0) when epsilon >= s.
double flat_head_q_bound(double exponent, double epsilon, double r_head);

}  // namespace zipfian
