#include "zipfian/plot_data.hpp"

#include <algorithm>
#include <cmath>

#include "zipfian/errors.hpp"
#include "zipfian/io_util.hpp"

namespace zipfian {

PlotSeries make_plot_series(const RankFrequencyTable& table, const ZMFit& fit) {
  PlotSeries series;
  size_t n = table.distinct_units();
  series.ranks.reserve(n);
  series.observed = fit.mode == FitMode::Raw ? table.counts_real() : table.frequencies();
  series.fitted.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    double rank = static_cast<double>(i + 1);
    series.ranks.push_back(rank);
    series.fitted.push_back(zm_value(fit.params, rank));
  }
  SlopeBand band = slope_band(fit.params);
  if (!band.empty) series.band = band;
  return series;
}

std::string plot_series_csv(const PlotSeries& series) {
  bool with_band = series.band.has_value();
  std::string out = with_band ? "rank,observed,fitted,band_lo,band_hi\n"
                              : "rank,observed,fitted\n";
  for (size_t i = 0; i < series.ranks.size(); ++i) {
    out += format_double(series.ranks[i]);
    out += ',';
    out += format_double(series.observed[i]);
    out += ',';
    out += format_double(series.fitted[i]);
    if (with_band) {
      out += ',';
      out += format_double(series.band->bar_min);
      out += ',';
      out += format_double(series.band->bar_max);
    }
    out += '\n';
  }
  return out;
}

namespace {

struct LogAxis {
  double lo;
  double hi;
  double offset;
  double scale;

  double map(double value) const {
    return offset + (std::log10(value) - lo) / (hi - lo) * scale;
  }
};

}  // namespace

std::string plot_series_svg(const PlotSeries& series) {
  if (series.ranks.empty()) throw DataError("empty plot series");
  constexpr double kWidth = 640.0;
  constexpr double kHeight = 440.0;
  constexpr double kMargin = 50.0;

  auto [min_rank, max_rank] =
      std::minmax_element(series.ranks.begin(), series.ranks.end());
  double min_value = *std::min_element(series.observed.begin(), series.observed.end());
  double max_value = *std::max_element(series.observed.begin(), series.observed.end());
  for (double f : series.fitted) {
    min_value = std::min(min_value, f);
    max_value = std::max(max_value, f);
  }

  LogAxis x{std::log10(*min_rank), std::log10(std::max(*max_rank, *min_rank * 1.0001)),
            kMargin, kWidth - 2 * kMargin};
  LogAxis y{std::log10(min_value), std::log10(std::max(max_value, min_value * 1.0001)),
            kHeight - kMargin, -(kHeight - 2 * kMargin)};

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_double(kWidth) +
         "\" height=\"" + format_double(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  if (series.band.has_value() && series.band->bar_min < *max_rank) {
    double left = x.map(std::max(series.band->bar_min, *min_rank));
    double right = std::isfinite(series.band->bar_max)
                       ? x.map(std::min(series.band->bar_max, *max_rank))
                       : x.map(*max_rank);
    svg += "<rect x=\"" + format_double(left) + "\" y=\"" + format_double(kMargin) +
           "\" width=\"" + format_double(std::max(0.0, right - left)) + "\" height=\"" +
           format_double(kHeight - 2 * kMargin) +
           "\" fill=\"#b7e0b7\" fill-opacity=\"0.5\"/>\n";
  }

  // axes
  svg += "<line x1=\"" + format_double(kMargin) + "\" y1=\"" + format_double(kHeight - kMargin) +
         "\" x2=\"" + format_double(kWidth - kMargin) + "\" y2=\"" +
         format_double(kHeight - kMargin) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + format_double(kMargin) + "\" y1=\"" + format_double(kMargin) +
         "\" x2=\"" + format_double(kMargin) + "\" y2=\"" + format_double(kHeight - kMargin) +
         "\" stroke=\"black\"/>\n";

  svg += "<polyline fill=\"none\" stroke=\"#cc4444\" stroke-width=\"1.5\" points=\"";
  for (size_t i = 0; i < series.ranks.size(); ++i) {
    if (i > 0) svg += ' ';
    svg += format_double(x.map(series.ranks[i]));
    svg += ',';
    svg += format_double(y.map(series.fitted[i]));
  }
  svg += "\"/>\n";

  for (size_t i = 0; i < series.ranks.size(); ++i) {
    svg += "<circle cx=\"" + format_double(x.map(series.ranks[i])) + "\" cy=\"" +
           format_double(y.map(series.observed[i])) +
           "\" r=\"2.5\" fill=\"#3355aa\"/>\n";
  }

  svg += "<text x=\"" + format_double(kWidth / 2) + "\" y=\"" +
         format_double(kHeight - 12.0) + "\" text-anchor=\"middle\" font-size=\"12\">rank (log)</text>\n";
  svg += "<text x=\"14\" y=\"" + format_double(kHeight / 2) +
         "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 " +
         format_double(kHeight / 2) + ")\">frequency (log)</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace zipfian
