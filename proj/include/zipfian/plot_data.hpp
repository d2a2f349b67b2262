// Plot-data CSV and a minimal SVG log-log scatter.
#pragma once

#include <optional>
#include <span>
#include <string>

#include "zipfian/zm_fit.hpp"

namespace zipfian {

struct PlotSeries {
  std::vector<double> ranks;
  std::vector<double> observed;
  std::vector<double> fitted;
  std::optional<SlopeBand> band;  // adds band_lo/band_hi columns when present
};

PlotSeries make_plot_series(const RankFrequencyTable& table, const ZMFit& fit);

/// Columns: rank,observed,fitted[,band_lo,band_hi]. The band columns carry
/// the slope-band rank interval (constant per row).
std::string plot_series_csv(const PlotSeries& series);

/// Log-log scatter: one circle per data point, a polyline for the fit, and
/// a shaded rectangle over the slope-band rank interval when present.
std::string plot_series_svg(const PlotSeries& series);

}  // namespace zipfian
