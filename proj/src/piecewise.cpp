#include "zipfian/piecewise.hpp"

#include <algorithm>
#include <cmath>

#include "zipfian/errors.hpp"

namespace zipfian {

namespace {

/// Gaussian elimination with partial pivoting for the small normal systems.
bool solve_dense(std::vector<double> a, std::vector<double> b, int n,
                 std::vector<double>& x) {
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int row = col + 1; row < n; ++row) {
      if (std::abs(a[static_cast<size_t>(row) * n + col]) >
          std::abs(a[static_cast<size_t>(pivot) * n + col])) {
        pivot = row;
      }
    }
    if (a[static_cast<size_t>(pivot) * n + col] == 0.0) return false;
    if (pivot != col) {
      for (int k = 0; k < n; ++k) {
        std::swap(a[static_cast<size_t>(col) * n + k], a[static_cast<size_t>(pivot) * n + k]);
      }
      std::swap(b[col], b[pivot]);
    }
    for (int row = col + 1; row < n; ++row) {
      double factor = a[static_cast<size_t>(row) * n + col] / a[static_cast<size_t>(col) * n + col];
      if (factor == 0.0) continue;
      for (int k = col; k < n; ++k) {
        a[static_cast<size_t>(row) * n + k] -= factor * a[static_cast<size_t>(col) * n + k];
      }
      b[row] -= factor * b[col];
    }
  }
  x.assign(n, 0.0);
  for (int row = n - 1; row >= 0; --row) {
    double sum = b[row];
    for (int k = row + 1; k < n; ++k) sum -= a[static_cast<size_t>(row) * n + k] * x[k];
    x[row] = sum / a[static_cast<size_t>(row) * n + row];
  }
  return true;
}

/// Hinge basis: y = c0 + c1 x + sum_j c_{j+2} max(0, x - b_j).
double basis_value(const std::vector<double>& coeff, const std::vector<double>& bps,
                   double x) {
  double y = coeff[0] + coeff[1] * x;
  for (size_t j = 0; j < bps.size(); ++j) {
    if (x > bps[j]) y += coeff[j + 2] * (x - bps[j]);
  }
  return y;
}

struct CandidateFit {
  double sse = std::numeric_limits<double>::infinity();
  std::vector<double> coeff;
  std::vector<size_t> breakpoint_indices;
};

void try_candidate(const std::vector<double>& xs, const std::vector<double>& ys,
                   const std::vector<size_t>& bp_indices, CandidateFit& best) {
  const int n_basis = 2 + static_cast<int>(bp_indices.size());
  std::vector<double> bps(bp_indices.size());
  for (size_t j = 0; j < bp_indices.size(); ++j) bps[j] = xs[bp_indices[j]];

  std::vector<double> ata(static_cast<size_t>(n_basis) * n_basis, 0.0);
  std::vector<double> atb(n_basis, 0.0);
  std::vector<double> phi(n_basis);
  for (size_t i = 0; i < xs.size(); ++i) {
    phi[0] = 1.0;
    phi[1] = xs[i];
    for (size_t j = 0; j < bps.size(); ++j) {
      phi[j + 2] = xs[i] > bps[j] ? xs[i] - bps[j] : 0.0;
    }
    for (int a = 0; a < n_basis; ++a) {
      atb[a] += phi[a] * ys[i];
      for (int b = 0; b <= a; ++b) {
        ata[static_cast<size_t>(a) * n_basis + b] += phi[a] * phi[b];
      }
    }
  }
  for (int a = 0; a < n_basis; ++a) {
    for (int b = a + 1; b < n_basis; ++b) {
      ata[static_cast<size_t>(a) * n_basis + b] = ata[static_cast<size_t>(b) * n_basis + a];
    }
  }

  std::vector<double> coeff;
  if (!solve_dense(ata, atb, n_basis, coeff)) return;

  double sse = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    double res = basis_value(coeff, bps, xs[i]) - ys[i];
    sse += res * res;
  }
  if (sse < best.sse) {
    best.sse = sse;
    best.coeff = std::move(coeff);
    best.breakpoint_indices = bp_indices;
  }
}

/// Recursively places `remaining` breakpoints after index `min_index`,
/// keeping at least two data points in every segment. Iteration order is
/// lexicographic, so the first strict improvement is the tie-break winner.
void search(const std::vector<double>& xs, const std::vector<double>& ys,
            std::vector<size_t>& chosen, size_t min_index, int remaining,
            CandidateFit& best) {
  if (remaining == 0) {
    try_candidate(xs, ys, chosen, best);
    return;
  }
  // A breakpoint at index i puts points [.. i] on its left; the rightmost
  // breakpoint must leave two points strictly after it, and each later
  // breakpoint needs room for two points per remaining segment.
  size_t max_index = xs.size() - 1 - 2 * static_cast<size_t>(remaining);
  for (size_t i = min_index; i <= max_index; ++i) {
    chosen.push_back(i);
    search(xs, ys, chosen, i + 2, remaining - 1, best);
    chosen.pop_back();
  }
}

PiecewiseFit finish(const std::vector<double>& xs, const std::vector<double>& ys,
                    int segments, const CandidateFit& best) {
  PiecewiseFit fit;
  fit.segments = segments;
  for (size_t index : best.breakpoint_indices) {
    fit.breakpoints_log.push_back(xs[index]);
    fit.breakpoints.push_back(std::exp(xs[index]));
  }
  fit.intercept = best.coeff[0];
  double slope = best.coeff[1];
  fit.slopes.push_back(slope);
  for (int j = 0; j < segments - 1; ++j) {
    slope += best.coeff[static_cast<size_t>(j) + 2];
    fit.slopes.push_back(slope);
  }
  fit.sse = best.sse;

  double mean = 0.0;
  for (double y : ys) mean += y;
  mean /= static_cast<double>(ys.size());
  double ss_tot = 0.0;
  for (double y : ys) ss_tot += (y - mean) * (y - mean);
  if (ss_tot == 0.0) throw DataError("R2 undefined: observed frequencies are all equal");
  fit.r2 = 1.0 - best.sse / ss_tot;
  return fit;
}

}  // namespace

PiecewiseFit fit_piecewise_curve(std::span<const double> ranks,
                                 std::span<const double> values, int segments) {
  if (segments < 1) throw DataError("segments must be >= 1");
  if (ranks.size() != values.size()) throw DataError("rank/value length mismatch");
  if (ranks.size() < 2 * static_cast<size_t>(segments) + 1) {
    throw DataError("insufficient data: need at least " +
                    std::to_string(2 * segments + 1) + " points for " +
                    std::to_string(segments) + " segments");
  }
  std::vector<double> xs(ranks.size()), ys(ranks.size());
  for (size_t i = 0; i < ranks.size(); ++i) {
    if (!(ranks[i] > 0.0) || !(values[i] > 0.0)) {
      throw DataError("ranks and frequencies must be positive");
    }
    if (i > 0 && !(ranks[i] > ranks[i - 1])) {
      throw DataError("ranks must be strictly increasing");
    }
    xs[i] = std::log(ranks[i]);
    ys[i] = std::log(values[i]);
  }

  CandidateFit best;
  std::vector<size_t> chosen;
  // Leftmost breakpoint leaves two points on the left (index >= 1).
  search(xs, ys, chosen, 1, segments - 1, best);
  if (!std::isfinite(best.sse)) throw DataError("piecewise fit failed");
  return finish(xs, ys, segments, best);
}

PiecewiseFit fit_piecewise_loglog(const RankFrequencyTable& table, int segments) {
  std::vector<double> ranks(table.distinct_units());
  for (size_t i = 0; i < ranks.size(); ++i) ranks[i] = static_cast<double>(i + 1);
  std::vector<double> values = table.frequencies();
  return fit_piecewise_curve(ranks, values, segments);
}

double evaluate_piecewise(const PiecewiseFit& fit, double rank) {
  if (!(rank > 0.0)) throw DomainError("rank must be positive");
  double x = std::log(rank);
  double y = fit.intercept + fit.slopes[0] * x;
  for (size_t j = 0; j < fit.breakpoints_log.size(); ++j) {
    if (x > fit.breakpoints_log[j]) {
      y += (fit.slopes[j + 1] - fit.slopes[j]) * (x - fit.breakpoints_log[j]);
    }
  }
  return std::exp(y);
}

}  // namespace zipfian
