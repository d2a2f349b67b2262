#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "zipfian/errors.hpp"
#include "zipfian/joint.hpp"

using namespace zipfian;

namespace {

// Independent oracle: the area of the superlevel set as the slice integral
//   A(f0) = integral_1^{f0^(-1/t2)} (f0^(-1/t1) x^(-t2/t1) - 1) dx,
// evaluated by adaptive Simpson in long double after the substitution
// x = e^u, which turns the power-law tail into a bounded smooth integrand.
long double simpson_recurse(const auto& f, long double a, long double b, long double fa,
                            long double fb, long double fm, long double whole,
                            long double tol, int depth) {
  long double m = 0.5L * (a + b);
  long double lm = f(0.5L * (a + m));
  long double rm = f(0.5L * (m + b));
  long double left = (m - a) / 6.0L * (fa + 4.0L * lm + fm);
  long double right = (b - m) / 6.0L * (fm + 4.0L * rm + fb);
  long double delta = left + right - whole;
  if (depth <= 0 || fabsl(delta) <= 15.0L * tol) {
    return left + right + delta / 15.0L;
  }
  return simpson_recurse(f, a, m, fa, fm, lm, left, 0.5L * tol, depth - 1) +
         simpson_recurse(f, m, b, fm, fb, rm, right, 0.5L * tol, depth - 1);
}

double area_by_quadrature(double t1, double t2, double f0) {
  if (f0 >= 1.0) return 0.0;
  long double big_l = -logl((long double)f0);
  long double alpha = (long double)t2 / t1;
  long double c = expl(big_l / t1);
  auto integrand = [&](long double u) {
    long double x = expl(u);
    return (c * expl(-alpha * u) - 1.0L) * x;
  };
  long double hi = big_l / t2;
  long double fa = integrand(0.0L);
  long double fb = integrand(hi);
  long double fm = integrand(0.5L * hi);
  long double whole = hi / 6.0L * (fa + 4.0L * fm + fb);
  long double tol = 1e-13L * (fabsl(whole) + 1.0L);
  return (double)simpson_recurse(integrand, 0.0L, hi, fa, fb, fm, whole, tol, 40);
}

constexpr double kE = 2.718281828459045;

}  // namespace

TEST_CASE("area closed form: fixed points") {
  CHECK(area_closed_form({1.0, 2.0}, 1.0) == 0.0);
  CHECK(area_closed_form({0.7, 0.7}, 1.0) == 0.0);
  // t1=1, t2=2, f0=1/4: quadrature oracle gives exactly 1
  CHECK(area_closed_form({1.0, 2.0}, 0.25) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(area_by_quadrature(1.0, 2.0, 0.25) == doctest::Approx(1.0).epsilon(1e-10));
  // t1=t2=1, f0=e^-2: e^2 + 1
  double expected = kE * kE + 1.0;
  CHECK(area_closed_form({1.0, 1.0}, std::exp(-2.0)) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(area_by_quadrature(1.0, 1.0, std::exp(-2.0)) ==
        doctest::Approx(expected).epsilon(1e-10));

  CHECK_THROWS_AS(area_closed_form({1.0, 2.0}, 0.0), DomainError);
  CHECK_THROWS_AS(area_closed_form({1.0, 2.0}, 1.5), DomainError);
  CHECK_THROWS_AS(area_closed_form({-1.0, 2.0}, 0.5), DomainError);
}

TEST_CASE("closed form agrees with quadrature across the exponent grid") {
  std::vector<double> ts = {0.5, 1.0, 2.0, 3.0, 4.0};
  std::vector<double> f0s = {0.9, 0.5, 0.1, 0.01, 1e-4};
  for (double t1 : ts) {
    for (double t2 : ts) {
      for (double f0 : f0s) {
        double closed = area_closed_form({t1, t2}, f0);
        double quad = area_by_quadrature(t1, t2, f0);
        CAPTURE(t1);
        CAPTURE(t2);
        CAPTURE(f0);
        CHECK(std::abs(closed - quad) <= 1e-8 + 1e-14 * std::abs(closed));
      }
    }
  }
  // near-degenerate pairs route through the series branch
  for (double t : ts) {
    for (double f0 : f0s) {
      double closed = area_closed_form({t, t + 1e-6}, f0);
      double quad = area_by_quadrature(t, t + 1e-6, f0);
      CHECK(std::abs(closed - quad) <= 1e-8 + 1e-14 * std::abs(closed));
    }
  }
}

TEST_CASE("area is symmetric in the exponents") {
  for (double f0 : {0.9, 0.3, 0.01}) {
    CHECK(area_closed_form({0.5, 3.0}, f0) == area_closed_form({3.0, 0.5}, f0));
    CHECK(area_closed_form({1.0, 2.0}, f0) == area_closed_form({2.0, 1.0}, f0));
  }
}

TEST_CASE("branch switch adds no jump beyond the true variation") {
  // The true area moves by dA/dt2 * 1e-6 between (t, t) and (t, t + 1e-6),
  // which can exceed any fixed relative bound; the continuity requirement is
  // that both branches track the true value tightly on either side of the
  // series threshold |t1 - t2| = 1e-4 max(t1, t2).
  for (double t : {0.5, 1.0, 3.0}) {
    for (double f0 : {0.5, 0.01}) {
      for (double factor : {0.99e-4, 1.01e-4}) {
        double t2 = t * (1.0 + factor);
        double closed = area_closed_form({t, t2}, f0);
        double quad = area_by_quadrature(t, t2, f0);
        CAPTURE(t);
        CAPTURE(f0);
        CAPTURE(factor);
        CHECK(std::abs(closed - quad) <= 1e-9 * std::max(1.0, std::abs(closed)));
      }
    }
  }
}

TEST_CASE("area_inverse brackets and bisects") {
  CHECK(area_inverse({1.0, 2.0}, 0.0) == 1.0);
  CHECK(area_inverse({1.0, 2.0}, 1.0) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK_THROWS_AS(area_inverse({1.0, 2.0}, -0.5), DomainError);

  JointLawSpec law{0.8, 1.7};
  for (double r : {0.1, 1.0, 10.0, 1e4}) {
    double f0 = area_inverse(law, r);
    CHECK(std::abs(area_closed_form(law, f0) - r) <= 1e-9 * std::max(1.0, r));
  }
}

TEST_CASE("inverse round-trip across twelve decades") {
  JointLawSpec law{1.0, 1.0};
  for (double r = 1e-6; r <= 1e6; r *= 10.0) {
    double f0 = area_inverse(law, r);
    CHECK(f0 > 0.0);
    CHECK(f0 <= 1.0);
    CHECK(std::abs(area_closed_form(law, f0) - r) <= 1e-9 * std::max(1.0, r));
  }
}

TEST_CASE("theoretical curve samples the inverse and stays decreasing") {
  std::vector<double> single = {1.0};
  TheoreticalCurve curve = theoretical_curve({1.0, 2.0}, single);
  REQUIRE(curve.values.size() == 1);
  CHECK(curve.values[0] == doctest::Approx(0.25).epsilon(1e-9));

  std::vector<double> ranks;
  for (double r = 1.0; r <= 1e6; r *= 2.0) ranks.push_back(r);
  curve = theoretical_curve({0.5, 1.5}, ranks);
  for (size_t i = 1; i < curve.values.size(); ++i) {
    CHECK(curve.values[i] < curve.values[i - 1]);
  }
  CHECK(curve.values.back() < 1e-3);  // tail heads to zero

  std::vector<double> bad = {1.0, 1.0};
  CHECK_THROWS_AS(theoretical_curve({1.0, 1.0}, bad), DataError);
}

TEST_CASE("lattice count: corner case and the mn <= 4 hand case") {
  CHECK(lattice_count({2.0, 3.0}, {1, 1}, 1.0) == 1.0);
  CHECK(lattice_count({2.0, 3.0}, {5, 7}, 1.0) == doctest::Approx(1.0 / 35).epsilon(1e-15));
  // t1=t2=1, N=1, f0=1/4: pairs with m n <= 4
  CHECK(lattice_count({1.0, 1.0}, {1, 1}, 0.25) == 8.0);
}

TEST_CASE("lattice count converges to the closed-form area from above") {
  JointLawSpec law{1.0, 2.0};
  double area = area_closed_form(law, 0.25);
  CHECK(area == doctest::Approx(1.0).epsilon(1e-12));
  double previous_error = std::numeric_limits<double>::infinity();
  for (std::int64_t n : {1, 10, 100, 1000}) {
    double count = lattice_count(law, {n, n}, 0.25);
    CHECK(count >= area);  // the grid over-covers the region
    double error = std::abs(count - area);
    if (n > 1) CHECK(error < previous_error);
    previous_error = error;
  }
  CHECK(previous_error < 5.0 / 1000.0);  // O(1/N) boundary term
}

TEST_CASE("lattice count over-covers across laws and thresholds") {
  for (double t1 : {0.5, 1.0, 2.5}) {
    for (double f0 : {0.5, 0.1, 0.05}) {
      JointLawSpec law{t1, 1.3};
      double area = area_closed_form(law, f0);
      for (std::int64_t n : {2, 17, 48}) {
        CHECK(lattice_count(law, {n, n}, f0) >= area - 1e-12);
      }
    }
  }
}

TEST_CASE("lattice enumeration budget") {
  CHECK_THROWS_AS(lattice_count({0.5, 0.5}, {100, 100}, 1e-3), BudgetError);
  // deep rank on a shallow law: the threshold bounding box blows the budget
  CHECK_THROWS_AS(lattice_sorted_value({0.5, 0.5}, {1000, 1000}, 1000000, 1000000),
                  BudgetError);
}

TEST_CASE("lattice sorted values: hand sequence for 1/(m n)") {
  JointLawSpec law{1.0, 1.0};
  LatticeSpec lattice{1, 1};
  CHECK(lattice_sorted_value(law, lattice, 1) == 1.0);
  std::vector<double> expected = {1.0, 0.5, 0.5, 1.0 / 3, 1.0 / 3, 0.25};
  for (size_t c = 1; c <= expected.size(); ++c) {
    CHECK(lattice_sorted_value(law, lattice, c) ==
          doctest::Approx(expected[c - 1]).epsilon(1e-15));
  }
  // the maximum sits at the lattice corner for any law
  CHECK(lattice_sorted_value({0.7, 3.1}, {3, 2}, 1) == 1.0);
}

TEST_CASE("lattice sorted values are non-increasing with multiplicity") {
  JointLawSpec law{0.8, 1.4};
  LatticeSpec lattice{2, 3};
  double previous = std::numeric_limits<double>::infinity();
  for (std::uint64_t c = 1; c <= 40; ++c) {
    double value = lattice_sorted_value(law, lattice, c);
    CHECK(value <= previous + 1e-15);
    previous = value;
  }
}

TEST_CASE("unit-lattice sorting matches the product-table rank-frequency plot") {
  // Marginal counts 720720/m are exactly Zipfian, so the product table's
  // sorted relative frequencies are the sorted values of 1/(m n) scaled by
  // (720720 / L_marginal)^2. The first 20 ranks (every pair with mn <= 8)
  // are inside the 8x8 support and must match the infinite-lattice order.
  std::vector<std::pair<ZipfianUnit, std::uint64_t>> ca, cb;
  std::uint64_t marginal_total = 0;
  for (int m = 1; m <= 8; ++m) {
    ca.emplace_back(ZipfianUnit::of(Rational(m, 1)), 720720u / m);
    cb.emplace_back(ZipfianUnit::of(Rational(m, 12)), 720720u / m);
    marginal_total += 720720u / m;
  }
  auto prod = product_table(RankFrequencyTable::from_counts(std::move(ca)),
                            RankFrequencyTable::from_counts(std::move(cb)));
  double scale = (720720.0 / static_cast<double>(marginal_total)) *
                 (720720.0 / static_cast<double>(marginal_total));
  for (std::uint64_t rank = 1; rank <= 20; ++rank) {
    double lattice = lattice_sorted_value({1.0, 1.0}, {1, 1}, rank);
    CHECK(prod.row(rank).rel_freq / scale ==
          doctest::Approx(lattice).epsilon(1e-12));
  }
}

TEST_CASE("prop1 verification on the (1,2) law") {
  std::vector<std::int64_t> schedule = {1, 10, 100};
  Prop1Report report = verify_prop1({1.0, 2.0}, 1.0, 0.05, 0.05, schedule);
  REQUIRE(report.rows.size() == 3);
  CHECK(report.inverse_value == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(report.rows[0].value_error > report.rows.back().value_error);
  CHECK(report.nonincreasing_after_first);
  CHECK(report.rows.back().value_error < 0.05);
  CHECK(report.rank_converged);
}

TEST_CASE("prop1 with infinite tolerances trivially converges") {
  std::vector<std::int64_t> schedule = {1, 4};
  double inf = std::numeric_limits<double>::infinity();
  Prop1Report report = verify_prop1({1.5, 0.9}, 2.0, inf, inf, schedule);
  CHECK(report.value_converged);
  CHECK(report.rank_converged);
}

TEST_CASE("prop1 handles a threshold that ties lattice values") {
  // t1=t2=1: A^{-1}(r) = 1/2 at r = A(1/2) = 2 ln 2 - 1; the threshold value
  // 1/2 is attained by (1,2) and (2,1), so the count at the tie must include
  // both. The report stays well-defined.
  double r = 2.0 * std::log(2.0) - 1.0;
  std::vector<std::int64_t> schedule = {1, 10, 100};
  Prop1Report report = verify_prop1({1.0, 1.0}, r, 0.3, 0.6, schedule);
  REQUIRE(report.rows.size() == 3);
  for (const auto& row : report.rows) {
    CHECK(std::isfinite(row.value_error));
    CHECK(row.value_error <= 0.5 + 1e-12);
  }
  CHECK(report.value_converged);

  std::vector<std::int64_t> bad = {10, 10};
  CHECK_THROWS_AS(verify_prop1({1.0, 1.0}, 1.0, 0.1, 0.1, bad), DataError);
}

TEST_CASE("joint fits reproduce the reference spot checks") {
  // normalized / raw scores for three corners of the verification table
  ZMFit half = fit_joint_zm({0.5, 0.5}, FitMode::Normalized);
  CHECK(half.r2 >= 0.997);
  CHECK(half.r2 == doctest::Approx(0.9990).epsilon(0.011));

  ZMFit half_raw = fit_joint_zm({0.5, 0.5}, FitMode::Raw);
  CHECK(std::abs(half_raw.r2 - 0.9630) <= 0.02);

  ZMFit four = fit_joint_zm({4.0, 4.0}, FitMode::Normalized);
  CHECK(four.r2 >= 0.999);
  ZMFit four_raw = fit_joint_zm({4.0, 4.0}, FitMode::Raw);
  CHECK(four_raw.r2 >= 0.998);
}

TEST_CASE("r2_grid single entry reduces to fit_joint_zm") {
  std::vector<double> single = {1.0};
  R2Grid grid = r2_grid(single, FitMode::Normalized);
  REQUIRE(grid.cells.size() == 1);
  REQUIRE(grid.cells[0].size() == 1);
  ZMFit direct = fit_joint_zm({1.0, 1.0}, FitMode::Normalized);
  CHECK(grid.cells[0][0].r2 == direct.r2);
  CHECK(grid.cells[0][0].params.shift == direct.params.shift);

  std::vector<double> bad = {1.0, 0.5};
  CHECK_THROWS_AS(r2_grid(bad, FitMode::Raw), DataError);
}
