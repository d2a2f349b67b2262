// Command-line front end: ingestion, rank-frequency tables, Zipf-Mandelbrot
// and piecewise fits, slope diagnostics, and the joint-law verification.
#include <algorithm>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "zipfian/errors.hpp"
#include "zipfian/io_util.hpp"
#include "zipfian/joint.hpp"
#include "zipfian/musicxml.hpp"
#include "zipfian/normalize.hpp"
#include "zipfian/piecewise.hpp"
#include "zipfian/plot_data.hpp"
#include "zipfian/rank_table.hpp"
#include "zipfian/zm_fit.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace zipfian;

namespace {

// json stores doubles natively; route everything through format_double so
// files are byte-stable across runs.
ordered_json number(double value) {
  return ordered_json::parse(format_double(value));
}

ordered_json fit_to_json(const ZMFit& fit) {
  ordered_json out;
  out["mode"] = std::string(fit_mode_name(fit.mode));
  out["A"] = number(fit.params.amplitude);
  out["q"] = number(fit.params.shift);
  out["s"] = number(fit.params.exponent);
  out["r2"] = number(fit.r2);
  out["sse"] = number(fit.sse);
  out["converged"] = fit.converged;
  out["at_bound"] = fit.at_bound;
  out["iterations"] = fit.iterations;
  out["N"] = fit.n_points;
  out["L"] = fit.total;
  SlopeBand band = slope_band(fit.params);
  if (band.empty) {
    out["bar_min"] = nullptr;
    out["bar_max"] = nullptr;
  } else {
    out["bar_min"] = number(band.bar_min);
    out["bar_max"] = std::isfinite(band.bar_max) ? number(band.bar_max)
                                                 : ordered_json(nullptr);
  }
  return out;
}

ordered_json piecewise_to_json(const PiecewiseFit& fit) {
  ordered_json out;
  out["segments"] = fit.segments;
  out["breakpoints"] = ordered_json::array();
  for (double b : fit.breakpoints) out["breakpoints"].push_back(number(b));
  out["slopes"] = ordered_json::array();
  for (double s : fit.slopes) out["slopes"].push_back(number(s));
  out["intercept"] = number(fit.intercept);
  out["r2"] = number(fit.r2);
  out["sse"] = number(fit.sse);
  return out;
}

ordered_json top_rows_json(const RankFrequencyTable& table, size_t k) {
  ordered_json rows = ordered_json::array();
  for (const TopRow& row : top_k(table, k)) {
    ordered_json entry;
    entry["rank"] = row.rank;
    entry["unit"] = row.unit;
    entry["count"] = row.count;
    entry["percent"] = number(row.percent);
    rows.push_back(std::move(entry));
  }
  return rows;
}

std::vector<NoteEvent> load_events(const std::string& path) {
  return events_from_csv(read_file(path));
}

FitOptions fit_options_from(double q_max, double s_max, std::uint64_t seed,
                            int extra_starts) {
  FitOptions options;
  options.bounds.q_max = q_max;
  options.bounds.s_max = s_max;
  options.seed = seed;
  options.extra_starts = extra_starts;
  return options;
}

struct IngestArgs {
  std::string input;
  std::string policy_path;
  std::string output;
  bool no_normalize = false;
};

int run_ingest(const IngestArgs& args) {
  std::vector<fs::path> files;
  fs::path in(args.input);
  if (fs::is_directory(in)) {
    for (const auto& entry : fs::directory_iterator(in)) {
      if (entry.is_regular_file()) {
        auto ext = entry.path().extension().string();
        if (ext == ".musicxml" || ext == ".xml") files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw DataError("no .musicxml/.xml files in " + args.input);
  } else if (fs::exists(in)) {
    files.push_back(in);
  } else {
    throw IoError("input path does not exist: " + args.input);
  }

  NormalizationPolicy policy = args.policy_path.empty()
                                   ? NormalizationPolicy::standard()
                                   : NormalizationPolicy::from_json(read_file(args.policy_path));

  std::vector<NoteEvent> all;
  for (const fs::path& file : files) {
    auto events = parse_musicxml(read_file(file), file.stem().string());
    all.insert(all.end(), events.begin(), events.end());
  }
  if (!args.no_normalize) all = normalize_events(all, policy);
  atomic_write_file(args.output, events_to_csv(all));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zipfian analysis of symbolic music scores"};
  app.require_subcommand(1);

  // ingest
  IngestArgs ingest;
  auto* cmd_ingest = app.add_subcommand("ingest", "Parse MusicXML into an event CSV");
  cmd_ingest->add_option("--in", ingest.input, "MusicXML file or directory")->required();
  cmd_ingest->add_option("--policy", ingest.policy_path, "normalization policy JSON");
  cmd_ingest->add_option("--out", ingest.output, "output event CSV")->required();
  cmd_ingest->add_flag("--raw-events", ingest.no_normalize,
                       "skip pitch/duration normalization");

  // rankfreq
  std::string rf_events, rf_out, rf_scope = "global", rf_kind = "pair";
  size_t rf_top = 0;
  auto* cmd_rankfreq = app.add_subcommand("rankfreq", "Build a rank-frequency table");
  cmd_rankfreq->add_option("--events", rf_events, "event CSV")->required();
  cmd_rankfreq->add_option("--out", rf_out, "output table CSV")->required();
  cmd_rankfreq->add_option("--scope", rf_scope,
                           "global | instrument:<name> | piece:<id>");
  cmd_rankfreq->add_option("--kind", rf_kind, "pitch | duration | pair");
  cmd_rankfreq->add_option("--top", rf_top, "also print the top-k rows");

  // fit-zm
  std::string fz_table, fz_out, fz_mode = "normalized", fz_plot, fz_svg;
  double fz_qmax = 1000.0, fz_smax = 20.0;
  std::uint64_t fz_seed = 0;
  int fz_extra = 0;
  int fz_max_iter = 5000;
  auto* cmd_fit = app.add_subcommand("fit-zm", "Fit the Zipf-Mandelbrot model");
  cmd_fit->add_option("--table", fz_table, "rank-frequency table CSV")->required();
  cmd_fit->add_option("--out", fz_out, "output fit JSON")->required();
  cmd_fit->add_option("--mode", fz_mode, "raw | normalized");
  cmd_fit->add_option("--q-max", fz_qmax, "upper bound for q");
  cmd_fit->add_option("--s-max", fz_smax, "upper bound for s");
  cmd_fit->add_option("--seed", fz_seed, "seed for random extra starts");
  cmd_fit->add_option("--extra-starts", fz_extra, "random multi-starts beyond the grid");
  cmd_fit->add_option("--max-iterations", fz_max_iter, "solver iteration cap");
  cmd_fit->add_option("--plot", fz_plot, "write rank/observed/fitted CSV");
  cmd_fit->add_option("--svg", fz_svg, "write a log-log scatter SVG");

  // fit-piecewise
  std::string fp_table, fp_out, fp_plot;
  int fp_segments = 3;
  auto* cmd_piecewise =
      app.add_subcommand("fit-piecewise", "Continuous piecewise-linear log-log fit");
  cmd_piecewise->add_option("--table", fp_table, "rank-frequency table CSV")->required();
  cmd_piecewise->add_option("--out", fp_out, "output fit JSON")->required();
  cmd_piecewise->add_option("--segments", fp_segments, "segment count");
  cmd_piecewise->add_option("--plot", fp_plot, "write rank/observed/fitted CSV");

  // slope
  std::string sl_out;
  double sl_q = 0.0, sl_s = 1.0, sl_lower = -1.2, sl_upper = -0.8;
  double sl_eps = 0.1, sl_rh = 0.0;
  std::vector<double> sl_at;
  auto* cmd_slope = app.add_subcommand("slope", "Local slope and band diagnostics");
  cmd_slope->add_option("--q", sl_q, "shift parameter")->required();
  cmd_slope->add_option("--s", sl_s, "exponent")->required();
  cmd_slope->add_option("--out", sl_out, "output JSON")->required();
  cmd_slope->add_option("--at", sl_at, "ranks to evaluate the local slope at");
  cmd_slope->add_option("--lower", sl_lower, "steep band edge");
  cmd_slope->add_option("--upper", sl_upper, "shallow band edge");
  cmd_slope->add_option("--flat-eps", sl_eps, "flat-head slope tolerance");
  cmd_slope->add_option("--flat-rh", sl_rh, "flat-head rank extent");

  // joint-verify
  std::string jv_out, jv_json, jv_mode = "normalized";
  double jv_tmin = 0.5, jv_tmax = 4.0, jv_tstep = 0.5;
  int jv_points = 200;
  double jv_floor = 1e-3, jv_max_rank = 1e8;
  auto* cmd_joint = app.add_subcommand(
      "joint-verify", "R2 grid for ZM fits of the joint-law rank-frequency curve");
  cmd_joint->add_option("--out", jv_out, "output CSV matrix")->required();
  cmd_joint->add_option("--json", jv_json, "optional JSON report with fit parameters");
  cmd_joint->add_option("--mode", jv_mode, "raw | normalized");
  cmd_joint->add_option("--t-min", jv_tmin, "smallest exponent");
  cmd_joint->add_option("--t-max", jv_tmax, "largest exponent");
  cmd_joint->add_option("--t-step", jv_tstep, "exponent step");
  cmd_joint->add_option("--grid-points", jv_points, "curve samples per fit");
  cmd_joint->add_option("--value-floor", jv_floor,
                        "sample the curve down to this frequency");
  cmd_joint->add_option("--max-rank", jv_max_rank, "cap on the sampled rank range");

  // prop1-check
  std::string p1_out;
  double p1_t1 = 1.0, p1_t2 = 2.0, p1_r = 1.0, p1_eps1 = 0.05, p1_eps2 = 0.05;
  std::vector<std::int64_t> p1_schedule = {1, 10, 100, 1000};
  std::uint64_t p1_budget = kDefaultLatticeBudget;
  auto* cmd_prop1 = app.add_subcommand(
      "prop1-check", "Lattice-sorting convergence to the inverse-area curve");
  cmd_prop1->add_option("--t1", p1_t1, "first exponent");
  cmd_prop1->add_option("--t2", p1_t2, "second exponent");
  cmd_prop1->add_option("--r", p1_r, "rank to track");
  cmd_prop1->add_option("--eps1", p1_eps1, "value tolerance");
  cmd_prop1->add_option("--eps2", p1_eps2, "rank tolerance");
  cmd_prop1->add_option("--schedule", p1_schedule, "lattice sizes");
  cmd_prop1->add_option("--budget", p1_budget, "enumeration budget");
  cmd_prop1->add_option("--out", p1_out, "output error-table CSV")->required();

  // product-compare
  std::string pc_events, pc_out, pc_csv, pc_scope = "global";
  auto* cmd_product = app.add_subcommand(
      "product-compare",
      "Compare the pair distribution with the product of its marginals");
  cmd_product->add_option("--events", pc_events, "event CSV")->required();
  cmd_product->add_option("--out", pc_out, "output JSON")->required();
  cmd_product->add_option("--csv", pc_csv, "optional rank/observed/product CSV");
  cmd_product->add_option("--scope", pc_scope, "scope selector");

  // report
  std::string rp_events, rp_out;
  size_t rp_top = 10;
  std::uint64_t rp_seed = 0;
  auto* cmd_report =
      app.add_subcommand("report", "Top-unit tables and ZM fits for every scope");
  cmd_report->add_option("--events", rp_events, "event CSV")->required();
  cmd_report->add_option("--out", rp_out, "output JSON")->required();
  cmd_report->add_option("--top", rp_top, "rows per top-unit panel");
  cmd_report->add_option("--seed", rp_seed, "seed for random extra starts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_ingest->parsed()) {
      return run_ingest(ingest);
    }

    if (cmd_rankfreq->parsed()) {
      auto events = load_events(rf_events);
      auto table = merge_scope(events, CorpusScope::parse(rf_scope),
                               parse_unit_kind(rf_kind));
      atomic_write_file(rf_out, table.to_csv());
      if (rf_top > 0) {
        for (const TopRow& row : top_k(table, rf_top)) {
          std::cout << row.rank << "  " << row.unit << "  " << row.count << "  "
                    << format_double(row.percent) << "%\n";
        }
      }
      return 0;
    }

    if (cmd_fit->parsed()) {
      auto table = RankFrequencyTable::from_csv(read_file(fz_table));
      FitMode mode = parse_fit_mode(fz_mode);
      FitOptions options = fit_options_from(fz_qmax, fz_smax, fz_seed, fz_extra);
      options.max_iterations = fz_max_iter;
      ZMFit fit = fit_zm(table, mode, options);
      atomic_write_file(fz_out, fit_to_json(fit).dump(2) + "\n");
      if (!fz_plot.empty() || !fz_svg.empty()) {
        PlotSeries series = make_plot_series(table, fit);
        if (!fz_plot.empty()) atomic_write_file(fz_plot, plot_series_csv(series));
        if (!fz_svg.empty()) atomic_write_file(fz_svg, plot_series_svg(series));
      }
      return 0;
    }

    if (cmd_piecewise->parsed()) {
      auto table = RankFrequencyTable::from_csv(read_file(fp_table));
      PiecewiseFit fit = fit_piecewise_loglog(table, fp_segments);
      atomic_write_file(fp_out, piecewise_to_json(fit).dump(2) + "\n");
      if (!fp_plot.empty()) {
        std::string csv = "rank,observed,fitted\n";
        for (size_t i = 0; i < table.distinct_units(); ++i) {
          double rank = static_cast<double>(i + 1);
          csv += format_double(rank) + "," + format_double(table.row(i + 1).rel_freq) +
                 "," + format_double(evaluate_piecewise(fit, rank)) + "\n";
        }
        atomic_write_file(fp_plot, csv);
      }
      return 0;
    }

    if (cmd_slope->parsed()) {
      ZMParams params{1.0, sl_q, sl_s};
      ordered_json out;
      out["q"] = number(sl_q);
      out["s"] = number(sl_s);
      if (!sl_at.empty()) {
        out["local_slope"] = ordered_json::array();
        for (double r : sl_at) {
          ordered_json entry;
          entry["r"] = number(r);
          entry["slope"] = number(local_slope(params, r));
          out["local_slope"].push_back(std::move(entry));
        }
      }
      SlopeBand band = slope_band(params, sl_lower, sl_upper);
      out["band"]["lower_slope"] = number(band.lower_slope);
      out["band"]["upper_slope"] = number(band.upper_slope);
      out["band"]["empty"] = band.empty;
      if (!band.empty) {
        out["band"]["bar_min"] = number(band.bar_min);
        out["band"]["bar_max"] = std::isfinite(band.bar_max)
                                     ? number(band.bar_max)
                                     : ordered_json(nullptr);
      }
      if (sl_rh >= 1.0) {
        out["flat_head_q_bound"] = number(flat_head_q_bound(sl_s, sl_eps, sl_rh));
      }
      atomic_write_file(sl_out, out.dump(2) + "\n");
      return 0;
    }

    if (cmd_joint->parsed()) {
      std::vector<double> ts;
      for (double t = jv_tmin; t <= jv_tmax + 1e-12; t += jv_tstep) ts.push_back(t);
      JointFitGrid grid{jv_points, 1.0, jv_floor, jv_max_rank};
      R2Grid result = r2_grid(ts, parse_fit_mode(jv_mode), grid);

      std::string csv = "s\\t";
      for (double t : result.t_values) csv += "," + format_double(t);
      csv += "\n";
      ordered_json cells_json = ordered_json::array();
      for (size_t i = 0; i < result.t_values.size(); ++i) {
        csv += format_double(result.t_values[i]);
        for (size_t j = 0; j < result.t_values.size(); ++j) {
          csv += ",";
          if (j >= i) {
            const ZMFit& fit = result.cells[i][j - i];
            csv += format_double(fit.r2);
            ordered_json cell = fit_to_json(fit);
            cell["t1"] = number(result.t_values[i]);
            cell["t2"] = number(result.t_values[j]);
            cells_json.push_back(std::move(cell));
          }
        }
        csv += "\n";
      }
      atomic_write_file(jv_out, csv);
      if (!jv_json.empty()) {
        ordered_json report;
        report["mode"] = jv_mode;
        report["grid_points"] = jv_points;
        report["value_floor"] = number(jv_floor);
        report["cells"] = std::move(cells_json);
        atomic_write_file(jv_json, report.dump(2) + "\n");
      }
      return 0;
    }

    if (cmd_prop1->parsed()) {
      Prop1Report report = verify_prop1({p1_t1, p1_t2}, p1_r, p1_eps1, p1_eps2,
                                        p1_schedule, p1_budget);
      std::string csv = "N,c,rank_gap,value_error\n";
      for (const Prop1Row& row : report.rows) {
        csv += std::to_string(row.n) + "," + std::to_string(row.c) + "," +
               format_double(row.rank_gap) + "," + format_double(row.value_error) + "\n";
      }
      atomic_write_file(p1_out, csv);
      std::cout << "A^-1(" << format_double(p1_r)
                << ") = " << format_double(report.inverse_value)
                << "  value_converged=" << (report.value_converged ? "yes" : "no")
                << "  rank_converged=" << (report.rank_converged ? "yes" : "no")
                << "  nonincreasing=" << (report.nonincreasing_after_first ? "yes" : "no")
                << "\n";
      return report.value_converged && report.rank_converged ? 0 : 1;
    }

    if (cmd_product->parsed()) {
      auto events = load_events(pc_events);
      CorpusScope scope = CorpusScope::parse(pc_scope);
      auto pair_table = merge_scope(events, scope, UnitKind::Pair);
      auto pitch_table = merge_scope(events, scope, UnitKind::Pitch);
      auto duration_table = merge_scope(events, scope, UnitKind::Duration);
      auto product = product_table(pitch_table, duration_table);

      // Compare the two sorted frequency curves over the shared rank range.
      size_t n = std::min(pair_table.distinct_units(), product.distinct_units());
      std::vector<double> observed(n), modeled(n);
      for (size_t i = 0; i < n; ++i) {
        observed[i] = pair_table.row(i + 1).rel_freq;
        modeled[i] = product.row(i + 1).rel_freq;
      }
      double score = r2_log(observed, modeled);

      ordered_json out;
      out["scope"] = scope.str();
      out["r2"] = number(score);
      out["ranks_compared"] = n;
      out["pair_distinct"] = pair_table.distinct_units();
      out["product_distinct"] = product.distinct_units();
      atomic_write_file(pc_out, out.dump(2) + "\n");
      if (!pc_csv.empty()) {
        std::string csv = "rank,observed,product\n";
        for (size_t i = 0; i < n; ++i) {
          csv += std::to_string(i + 1) + "," + format_double(observed[i]) + "," +
                 format_double(modeled[i]) + "\n";
        }
        atomic_write_file(pc_csv, csv);
      }
      return 0;
    }

    if (cmd_report->parsed()) {
      auto events = load_events(rp_events);
      FitOptions options;
      options.seed = rp_seed;

      ordered_json out;
      auto scope_block = [&](const CorpusScope& scope, bool with_top,
                             bool both_modes) {
        ordered_json block;
        block["scope"] = scope.str();
        auto pair_table = merge_scope(events, scope, UnitKind::Pair);
        block["N"] = pair_table.distinct_units();
        block["L"] = pair_table.total_units();
        if (with_top) {
          block["top"]["pair"] = top_rows_json(pair_table, rp_top);
          block["top"]["pitch"] =
              top_rows_json(merge_scope(events, scope, UnitKind::Pitch), rp_top);
          block["top"]["duration"] =
              top_rows_json(merge_scope(events, scope, UnitKind::Duration), rp_top);
        }
        // Fits need four distinct units and some count variation; a flat
        // distribution has no defined R2.
        bool fittable = pair_table.distinct_units() >= 4 &&
                        pair_table.row(1).count !=
                            pair_table.row(pair_table.distinct_units()).count;
        if (fittable) {
          block["fit_normalized"] =
              fit_to_json(fit_zm(pair_table, FitMode::Normalized, options));
          if (both_modes) {
            block["fit_raw"] = fit_to_json(fit_zm(pair_table, FitMode::Raw, options));
          }
        }
        return block;
      };

      out["global"] = scope_block(CorpusScope::global_union(), true, true);
      out["instruments"] = ordered_json::array();
      std::vector<Instrument> instruments;
      std::vector<std::string> pieces;
      for (const NoteEvent& e : events) {
        if (std::find(instruments.begin(), instruments.end(), e.instrument) ==
            instruments.end()) {
          instruments.push_back(e.instrument);
        }
        if (std::find(pieces.begin(), pieces.end(), e.piece_id) == pieces.end()) {
          pieces.push_back(e.piece_id);
        }
      }
      for (Instrument instrument : instruments) {
        out["instruments"].push_back(
            scope_block(CorpusScope::for_instrument(instrument), false, true));
      }
      out["pieces"] = ordered_json::array();
      for (const std::string& piece : pieces) {
        out["pieces"].push_back(scope_block(CorpusScope::for_piece(piece), false, false));
      }
      atomic_write_file(rp_out, out.dump(2) + "\n");
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
