#include "zipfian/joint.hpp"

#include <algorithm>
#include <cmath>

#include "zipfian/errors.hpp"
#include "zipfian/least_squares.hpp"

namespace zipfian {

namespace {

void validate_law(const JointLawSpec& law) {
  if (!(law.exponent1 > 0.0) || !(law.exponent2 > 0.0)) {
    throw DomainError("joint-law exponents must be positive");
  }
}

void validate_lattice(const LatticeSpec& lattice) {
  if (lattice.n1 < 1 || lattice.n2 < 1) {
    throw DomainError("lattice sizes must be >= 1");
  }
}

// g(t) = t * f0^(-1/t) = t * exp(L/t) with L = ln(1/f0). The area formula is
// A = 1 + (g(t1) - g(t2)) / (t2 - t1); the equal-exponent branch is its
// limit 1 - g'(t). Near-equal exponents use the midpoint series
//   (g(t1) - g(t2)) / (t2 - t1) = -g'(tm) - (d^2/24) g'''(tm) + O(d^4),
// which keeps the result accurate where the generic branch cancels.
long double g_prime(long double t, long double big_l) {
  return expl(big_l / t) * (1.0L - big_l / t);
}

long double g_triple_prime(long double t, long double big_l) {
  long double t2 = t * t;
  long double t5 = t2 * t2 * t;
  return -expl(big_l / t) * big_l * big_l * (big_l + 3.0L * t) / t5;
}

long double area_ld(long double t1, long double t2, long double f0) {
  long double big_l = -logl(f0);  // >= 0
  long double diff = t2 - t1;
  if (fabsl(diff) <= 1e-4L * std::max(t1, t2)) {
    long double tm = 0.5L * (t1 + t2);
    return 1.0L - g_prime(tm, big_l) - diff * diff / 24.0L * g_triple_prime(tm, big_l);
  }
  long double g1 = t1 * expl(big_l / t1);
  long double g2 = t2 * expl(big_l / t2);
  return 1.0L + (g1 - g2) / diff;
}

}  // namespace

double area_closed_form(const JointLawSpec& law, double f0) {
  validate_law(law);
  if (!(f0 > 0.0) || f0 > 1.0) {
    throw DomainError("threshold f0 must lie in (0, 1]");
  }
  return static_cast<double>(area_ld(law.exponent1, law.exponent2, f0));
}

double area_inverse(const JointLawSpec& law, double r) {
  validate_law(law);
  if (r < 0.0) throw DomainError("rank must be >= 0");
  if (r == 0.0) return 1.0;

  const double tolerance = 1e-10 * std::max(1.0, r);
  double lo = 0.5;
  while (area_closed_form(law, lo) <= r) {
    lo *= 0.5;
    if (lo < 1e-300) throw DomainError("rank too large to bracket");
  }
  double hi = 1.0;
  double mid = lo;
  for (int i = 0; i < 200; ++i) {
    mid = 0.5 * (lo + hi);
    double value = area_closed_form(law, mid);
    if (std::abs(value - r) <= tolerance) return mid;
    if (value > r) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return mid;
}

TheoreticalCurve theoretical_curve(const JointLawSpec& law,
                                   std::span<const double> ranks) {
  validate_law(law);
  TheoreticalCurve curve;
  curve.law = law;
  curve.ranks.reserve(ranks.size());
  curve.values.reserve(ranks.size());
  for (size_t i = 0; i < ranks.size(); ++i) {
    if (ranks[i] < 0.0) throw DomainError("curve ranks must be >= 0");
    if (i > 0 && !(ranks[i] > ranks[i - 1])) {
      throw DataError("curve ranks must be strictly increasing");
    }
    curve.ranks.push_back(ranks[i]);
    curve.values.push_back(area_inverse(law, ranks[i]));
  }
  return curve;
}

namespace {

/// Shared enumeration over {lattice points with f >= f0}. Calls `emit(m, n)`
/// for each accepted point, with n iterating from N2 to the per-m cap.
template <typename Emit>
std::uint64_t enumerate_superlevel(const JointLawSpec& law, const LatticeSpec& lattice,
                                   double f0, std::uint64_t budget, Emit emit) {
  const long double t1 = law.exponent1;
  const long double t2 = law.exponent2;
  const long double n1 = static_cast<long double>(lattice.n1);
  const long double n2 = static_cast<long double>(lattice.n2);
  const long double big_l = -logl(static_cast<long double>(f0));
  const long double slack = 1e-12L * std::max<long double>(1.0L, big_l);

  // log f(m/N1, n/N2) >= log f0 <=> S(m, n) <= L
  auto log_excess = [&](std::int64_t m, std::int64_t n) {
    return t1 * (logl(static_cast<long double>(m)) - logl(n1)) +
           t2 * (logl(static_cast<long double>(n)) - logl(n2));
  };
  auto accept = [&](std::int64_t m, std::int64_t n) {
    long double s = log_excess(m, n);
    if (s <= big_l - slack) return true;
    if (s > big_l + slack) return false;
    // Boundary candidate: decide by direct evaluation.
    long double lhs = powl(static_cast<long double>(m) / n1, t1) *
                      powl(static_cast<long double>(n) / n2, t2);
    return lhs <= 1.0L / static_cast<long double>(f0);
  };

  const long double u = expl(big_l / t1);  // f0^(-1/t1)
  const long double v = expl(big_l / t2);
  long double m_span_ld = n1 * u - n1 + 1.0L;
  long double n_span_ld = n2 * v - n2 + 1.0L;
  if (m_span_ld * n_span_ld > static_cast<long double>(budget)) {
    throw BudgetError(
        "lattice bounding box exceeds the enumeration budget; "
        "increase f0 or reduce the lattice size");
  }

  std::int64_t m_max = static_cast<std::int64_t>(floorl(n1 * u * (1.0L + 1e-15L)));
  while (m_max >= lattice.n1 && !accept(m_max, lattice.n2)) --m_max;
  while (accept(m_max + 1, lattice.n2)) ++m_max;

  std::uint64_t count = 0;
  for (std::int64_t m = lattice.n1; m <= m_max; ++m) {
    long double cap_log = (big_l - t1 * (logl(static_cast<long double>(m)) - logl(n1))) / t2;
    std::int64_t n_cap =
        static_cast<std::int64_t>(floorl(n2 * expl(cap_log) * (1.0L + 1e-15L)));
    if (n_cap < lattice.n2) n_cap = lattice.n2;  // re-checked below
    while (!accept(m, n_cap) && n_cap >= lattice.n2) --n_cap;
    while (accept(m, n_cap + 1)) ++n_cap;
    if (n_cap < lattice.n2) continue;
    count += static_cast<std::uint64_t>(n_cap - lattice.n2 + 1);
    emit(m, lattice.n2, n_cap);
  }
  return count;
}

}  // namespace

double lattice_count(const JointLawSpec& law, const LatticeSpec& lattice, double f0,
                     std::uint64_t budget) {
  validate_law(law);
  validate_lattice(lattice);
  if (!(f0 > 0.0) || f0 > 1.0) throw DomainError("threshold f0 must lie in (0, 1]");
  std::uint64_t count = enumerate_superlevel(law, lattice, f0, budget,
                                             [](std::int64_t, std::int64_t, std::int64_t) {});
  return static_cast<double>(count) /
         (static_cast<double>(lattice.n1) * static_cast<double>(lattice.n2));
}

double lattice_sorted_value(const JointLawSpec& law, const LatticeSpec& lattice,
                            std::uint64_t rank_c, std::uint64_t budget) {
  validate_law(law);
  validate_lattice(lattice);
  if (rank_c < 1) throw DomainError("rank must be >= 1");

  const long double t1 = law.exponent1;
  const long double t2 = law.exponent2;
  const long double n1 = static_cast<long double>(lattice.n1);
  const long double n2 = static_cast<long double>(lattice.n2);
  const double cells = static_cast<double>(lattice.n1) * static_cast<double>(lattice.n2);

  // The outer-cover property guarantees one pass collects >= rank_c values;
  // the retry loop is a guard against float corner cases.
  std::uint64_t safety = std::max<std::uint64_t>(16, rank_c / 8);
  for (int attempt = 0; attempt < 8; ++attempt) {
    double target = (static_cast<double>(rank_c) + static_cast<double>(safety)) / cells;
    double f0 = area_inverse(law, target);
    std::vector<double> values;
    values.reserve(rank_c + safety);
    enumerate_superlevel(law, lattice, f0, budget,
                         [&](std::int64_t m, std::int64_t n_lo, std::int64_t n_hi) {
                           long double base = -t1 * (logl(static_cast<long double>(m)) - logl(n1));
                           for (std::int64_t n = n_lo; n <= n_hi; ++n) {
                             long double lw =
                                 base - t2 * (logl(static_cast<long double>(n)) - logl(n2));
                             values.push_back(static_cast<double>(expl(lw)));
                           }
                         });
    if (values.size() >= rank_c) {
      std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(rank_c - 1),
                       values.end(), std::greater<>());
      return values[rank_c - 1];
    }
    safety = safety * 4 + 16;
  }
  throw Error("lattice sorting failed to collect enough values");
}

Prop1Report verify_prop1(const JointLawSpec& law, double r, double eps1, double eps2,
                         std::span<const std::int64_t> schedule, std::uint64_t budget) {
  validate_law(law);
  if (!(r > 0.0)) throw DomainError("rank must be positive");
  if (schedule.empty()) throw DataError("empty lattice schedule");
  for (size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] < 1 || (i > 0 && schedule[i] <= schedule[i - 1])) {
      throw DataError("lattice schedule must be strictly increasing and >= 1");
    }
  }

  Prop1Report report;
  report.r = r;
  report.inverse_value = area_inverse(law, r);
  for (std::int64_t n : schedule) {
    double cells = static_cast<double>(n) * static_cast<double>(n);
    auto c = static_cast<std::uint64_t>(std::max<long long>(1, llround(r * cells)));
    double sorted = lattice_sorted_value(law, LatticeSpec{n, n}, c, budget);
    Prop1Row row;
    row.n = n;
    row.c = c;
    row.rank_gap = std::abs(r - static_cast<double>(c) / cells);
    row.value_error = std::abs(report.inverse_value - sorted);
    report.rows.push_back(row);
  }
  report.value_converged = report.rows.back().value_error < eps1;
  report.rank_converged = report.rows.back().rank_gap < eps2;
  report.nonincreasing_after_first = true;
  for (size_t i = 2; i < report.rows.size(); ++i) {
    if (report.rows[i].value_error > report.rows[i - 1].value_error * (1.0 + 1e-12)) {
      report.nonincreasing_after_first = false;
    }
  }
  return report;
}

namespace {

/// Log-residual fit of A (r+q)^(-s): the normalized verification mode. The
/// curve is already on its natural (0, 1] relative-frequency scale, so the
/// amplitude is a level correction and the score is scale-free.
ZMFit fit_log_normalized(std::span<const double> ranks, std::span<const double> values,
                         const FitOptions& options) {
  std::vector<double> log_values(values.size());
  for (size_t i = 0; i < values.size(); ++i) log_values[i] = std::log(values[i]);

  ResidualFn fn = [&ranks, &log_values](const std::vector<double>& params,
                                        std::vector<double>& residuals,
                                        std::vector<double>* jacobian) {
    double log_a = params[0];
    double q = params[1];
    double s = params[2];
    for (size_t i = 0; i < ranks.size(); ++i) {
      double log_shifted = std::log(ranks[i] + q);
      residuals[i] = log_a - s * log_shifted - log_values[i];
      if (jacobian != nullptr) {
        double* row = &(*jacobian)[i * 3];
        row[0] = 1.0;
        row[1] = -s / (ranks[i] + q);
        row[2] = -log_shifted;
      }
    }
  };

  const FitBounds& bounds = options.bounds;
  std::vector<double> lower = {-700.0, bounds.q_min, bounds.s_min};
  std::vector<double> upper = {700.0, bounds.q_max, bounds.s_max};
  LeastSquaresOptions ls_options;
  ls_options.max_iterations = options.max_iterations;
  ls_options.step_tolerance = options.step_tolerance;
  ls_options.gradient_tolerance = options.gradient_tolerance;

  LeastSquaresResult best;
  bool have_best = false;
  for (double s0 : {0.5, 1.0, 2.0}) {
    for (double q0 : {0.0, 1.0, 10.0}) {
      LeastSquaresResult result = solve_bounded_least_squares(
          fn, static_cast<int>(ranks.size()), {log_values[0], q0, s0}, lower, upper,
          ls_options);
      if (!have_best || result.sse < best.sse) {
        best = std::move(result);
        have_best = true;
      }
    }
  }

  ZMFit fit;
  fit.mode = FitMode::Normalized;
  fit.params = ZMParams{std::exp(best.params[0]), best.params[1], best.params[2]};
  fit.converged = best.converged;
  fit.iterations = best.iterations;
  fit.sse = best.sse;
  fit.n_points = ranks.size();
  const char* names[] = {"A", "q", "s"};
  for (size_t i = 1; i < 3; ++i) {
    if (best.at_lower[i] || best.at_upper[i]) fit.at_bound.push_back(names[i]);
  }
  std::vector<double> fitted(ranks.size());
  for (size_t i = 0; i < ranks.size(); ++i) fitted[i] = zm_value(fit.params, ranks[i]);
  fit.r2 = r2_log(values, fitted);
  return fit;
}

std::vector<double> sample_ranks(const JointLawSpec& law, const JointFitGrid& grid) {
  if (grid.points < 4) throw DataError("fit grid needs at least 4 points");
  if (!(grid.r_min >= 1.0)) throw DomainError("fit grid must start at rank >= 1");
  if (!(grid.value_floor > 0.0) || grid.value_floor >= 1.0) {
    throw DomainError("value floor must lie in (0, 1)");
  }
  double r_max = area_closed_form(law, grid.value_floor);
  r_max = std::clamp(r_max, grid.r_min * 10.0, grid.max_rank);
  std::vector<double> ranks(static_cast<size_t>(grid.points));
  double log_lo = std::log(grid.r_min);
  double log_hi = std::log(r_max);
  for (int i = 0; i < grid.points; ++i) {
    double fraction = static_cast<double>(i) / static_cast<double>(grid.points - 1);
    ranks[static_cast<size_t>(i)] = std::exp(log_lo + fraction * (log_hi - log_lo));
  }
  return ranks;
}

}  // namespace

ZMFit fit_joint_zm(const JointLawSpec& law, FitMode mode, const JointFitGrid& grid) {
  validate_law(law);
  std::vector<double> ranks = sample_ranks(law, grid);
  TheoreticalCurve curve = theoretical_curve(law, ranks);
  if (mode == FitMode::Raw) {
    return fit_zm_curve(curve.ranks, curve.values, FitMode::Raw);
  }
  return fit_log_normalized(curve.ranks, curve.values, {});
}

R2Grid r2_grid(std::span<const double> t_values, FitMode mode, const JointFitGrid& grid) {
  if (t_values.empty()) throw DataError("empty exponent grid");
  for (size_t i = 0; i < t_values.size(); ++i) {
    if (!(t_values[i] > 0.0)) throw DomainError("exponents must be positive");
    if (i > 0 && !(t_values[i] > t_values[i - 1])) {
      throw DataError("exponent grid must be strictly increasing");
    }
  }
  R2Grid out;
  out.t_values.assign(t_values.begin(), t_values.end());
  out.mode = mode;
  out.cells.resize(t_values.size());
  for (size_t i = 0; i < t_values.size(); ++i) {
    for (size_t j = i; j < t_values.size(); ++j) {
      out.cells[i].push_back(
          fit_joint_zm(JointLawSpec{t_values[i], t_values[j]}, mode, grid));
    }
  }
  return out;
}

std::vector<double> default_t_values() {
  return {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
}

}  // namespace zipfian
