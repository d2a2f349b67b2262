// Joint distribution of two independent Zipfian variables: closed-form
// superlevel-set area, its inverse (the continuous rank-frequency curve),
// lattice counting and sorting oracles, and the R2 verification grid.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "zipfian/zm_fit.hpp"

namespace zipfian {

/// Joint density f(x1, x2) = x1^(-t1) x2^(-t2) on [1, inf)^2.
struct JointLawSpec {
  double exponent1 = 1.0;  // t1 > 0
  double exponent2 = 1.0;  // t2 > 0
};

/// Mesh 1/N1 x 1/N2 lattice over [1, inf)^2.
struct LatticeSpec {
  std::int64_t n1 = 1;
  std::int64_t n2 = 1;
};

/// Area of the superlevel set {f >= f0}. Two closed-form branches; nearly
/// equal exponents evaluate through a series around the midpoint to dodge
/// the cancellation in the generic branch. Throws DomainError unless
/// 0 < f0 <= 1.
double area_closed_form(const JointLawSpec& law, double f0);

/// Inverse of the area function by bisection on (0, 1]:
/// |area(result) - r| <= 1e-10 * max(1, r). Throws DomainError for r < 0.
double area_inverse(const JointLawSpec& law, double r);

struct TheoreticalCurve {
  JointLawSpec law;
  std::vector<double> ranks;
  std::vector<double> values;  // f*(r), strictly decreasing
};

/// Samples f*(r) = A^{-1}(r) on strictly increasing ranks.
TheoreticalCurve theoretical_curve(const JointLawSpec& law,
                                   std::span<const double> ranks);

constexpr std::uint64_t kDefaultLatticeBudget = 100000000;  // bounding-box points

/// Normalized counting functional: #(lattice points with f >= f0) / (N1 N2),
/// by exact enumeration over the bounding box. Ties at the threshold are
/// inside the set. Throws BudgetError when the bounding box exceeds the
/// budget.
double lattice_count(const JointLawSpec& law, const LatticeSpec& lattice, double f0,
                     std::uint64_t budget = kDefaultLatticeBudget);

/// The rank_c-th largest lattice value of f, ties counted with multiplicity.
/// Chooses a threshold from the inverse area with a safety margin, widens it
/// until at least rank_c values are enumerated, then selects.
double lattice_sorted_value(const JointLawSpec& law, const LatticeSpec& lattice,
                            std::uint64_t rank_c,
                            std::uint64_t budget = kDefaultLatticeBudget);

struct Prop1Row {
  std::int64_t n;          // lattice size (N, N)
  std::uint64_t c;         // nearest integer to r * N^2
  double rank_gap;         // |r - c / N^2|
  double value_error;      // |A^{-1}(r) - sorted value at c|
};

struct Prop1Report {
  double r = 0.0;
  double inverse_value = 0.0;  // A^{-1}(r)
  std::vector<Prop1Row> rows;
  bool value_converged = false;      // last value_error < eps1
  bool rank_converged = false;       // last rank_gap < eps2
  bool nonincreasing_after_first = false;
};

/// Convergence check for the sorting proposition: at each lattice size N the
/// rank c is the nearest integer to r N^2, and the sorted value there is
/// compared with the inverse-area curve.
Prop1Report verify_prop1(const JointLawSpec& law, double r, double eps1, double eps2,
                         std::span<const std::int64_t> schedule,
                         std::uint64_t budget = kDefaultLatticeBudget);

/// Sampling grid for the verification fits: ranks are log-spaced from
/// r_min to the rank where the curve falls to value_floor (clamped to
/// [r_min * 10, max_rank]).
struct JointFitGrid {
  int points = 200;
  double r_min = 1.0;
  double value_floor = 1e-3;
  double max_rank = 1e8;
};

/// Fits the ZM model to the sampled theoretical curve. Raw mode follows the
/// bounded linear-residual protocol of fit_zm_curve; normalized mode fits on
/// the curve's natural (0, 1] relative-frequency scale with log-space
/// residuals, which makes the score independent of any rescaling.
ZMFit fit_joint_zm(const JointLawSpec& law, FitMode mode,
                   const JointFitGrid& grid = {});

struct R2Grid {
  std::vector<double> t_values;
  FitMode mode = FitMode::Normalized;
  // cells[i][j] holds the fit for (t_values[i], t_values[j]) when j >= i.
  std::vector<std::vector<ZMFit>> cells;
};

/// Upper-triangular verification matrix over the exponent grid.
R2Grid r2_grid(std::span<const double> t_values, FitMode mode,
               const JointFitGrid& grid = {});

/// The standard verification grid: 0.5, 1.0, ..., 4.0.
std::vector<double> default_t_values();

}  // namespace zipfian
