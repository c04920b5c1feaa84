#include "oracles.hpp"

#include "k2bench/error.hpp"
#include "k2bench/regression.hpp"

#include <doctest.h>

#include <cmath>

using namespace k2bench;

namespace {

std::vector<FitPoint> saturation_points(Rng& rng, double c1, std::size_t n, double noise) {
  std::vector<FitPoint> pts;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(rng.uniform_int(0, 2000));
    pts.push_back({x, 1.0 - std::exp(-c1 * std::sqrt(x)) + noise * oracle::gaussian(rng)});
  }
  return pts;
}

std::vector<FitPoint> decay_points(Rng& rng, double c2, double c3, std::size_t n, double noise) {
  std::vector<FitPoint> pts;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(rng.uniform_int(0, 2000));
    pts.push_back({x, c2 * std::exp(-c3 * std::sqrt(x)) + noise * oracle::gaussian(rng)});
  }
  return pts;
}

double rss_m1(const std::vector<FitPoint>& pts, double c1) {
  double s = 0;
  for (const auto& p : pts) s += std::pow(p.value - (1.0 - std::exp(-c1 * std::sqrt(p.cases))), 2);
  return s;
}

/// For fixed c3 the best c2 is linear least squares.
double profile_c2(const std::vector<FitPoint>& pts, double c3) {
  double num = 0, den = 0;
  for (const auto& p : pts) {
    const double e = std::exp(-c3 * std::sqrt(p.cases));
    num += p.value * e;
    den += e * e;
  }
  return num / den;
}

double rss_m2(const std::vector<FitPoint>& pts, double c2, double c3) {
  double s = 0;
  for (const auto& p : pts) s += std::pow(p.value - c2 * std::exp(-c3 * std::sqrt(p.cases)), 2);
  return s;
}

}  // namespace

TEST_CASE("curves evaluate their closed forms") {
  Eigen::ArrayXd x(3);
  x << 0, 100, 400;
  const auto s = saturation_curve(0.1, x);
  CHECK(s(0) == 0.0);
  CHECK(s(1) == doctest::Approx(1 - std::exp(-1.0)));
  const auto d = decay_curve(2.0, 0.05, x);
  CHECK(d(0) == 2.0);
  CHECK(d(2) == doctest::Approx(2 * std::exp(-1.0)));
}

TEST_CASE("noiseless data recover the parameters") {
  Rng rng(1);
  const auto p1 = saturation_points(rng, 0.135, 40, 0.0);
  const auto f1 = fit_m1(p1);
  REQUIRE(f1.converged);
  CHECK(std::abs(f1.coefficients(0) - 0.135) <= 1e-6);
  CHECK(f1.r_squared == doctest::Approx(1.0));

  const auto p2 = decay_points(rng, 0.9, 0.07, 40, 0.0);
  const auto f2 = fit_m2(p2);
  REQUIRE(f2.converged);
  CHECK(std::abs(f2.coefficients(0) - 0.9) <= 1e-6);
  CHECK(std::abs(f2.coefficients(1) - 0.07) <= 1e-6);
}

TEST_CASE("property: noisy fits agree with a grid-search oracle") {
  Rng rng(2024);
  for (int trial = 0; trial < 30; ++trial) {
    const double c1 = 0.02 + 0.2 * rng.uniform01();
    const auto p1 = saturation_points(rng, c1, 67, 0.1);
    const auto f1 = fit_m1(p1);
    REQUIRE(f1.converged);
    const double step = 1e-5;
    const double grid = oracle::grid_argmin(0.001, 0.5, step, [&](double c) { return rss_m1(p1, c); });
    CHECK(std::abs(f1.coefficients(0) - grid) <= step);
    CHECK(f1.rss <= rss_m1(p1, grid) + 1e-12);
    CHECK(std::abs(f1.coefficients(0) - c1) <= 4 * f1.standard_errors(0));

    const double c2 = 0.2 + 2.0 * rng.uniform01();
    const double c3 = 0.01 + 0.1 * rng.uniform01();
    const auto p2 = decay_points(rng, c2, c3, 67, 0.02);
    const auto f2 = fit_m2(p2);
    REQUIRE(f2.converged);
    const double g3 =
        oracle::grid_argmin(0.0, 0.3, step, [&](double c) { return rss_m2(p2, profile_c2(p2, c), c); });
    const double g2 = profile_c2(p2, g3);
    CHECK(std::abs(f2.coefficients(1) - g3) <= 2 * step);
    CHECK(std::abs(f2.coefficients(0) - g2) <= 1e-3 * std::max(1.0, std::abs(g2)));
    CHECK(f2.rss <= rss_m2(p2, g2, g3) + 1e-12);
  }
}

TEST_CASE("property: accepted steps never increase the RSS") {
  Rng rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const auto pts = decay_points(rng, 1.5, 0.05, 50, 0.05);
    const auto f = fit_m2(pts, Eigen::Vector2d(5.0, 0.5));
    for (std::size_t i = 1; i < f.rss_history.size(); ++i) CHECK(f.rss_history[i] <= f.rss_history[i - 1]);
    CHECK(f.rss == f.rss_history.back());
  }
}

TEST_CASE("R squared is one minus RSS over TSS") {
  Rng rng(9);
  const auto pts = saturation_points(rng, 0.1, 30, 0.05);
  const auto f = fit_m1(pts);
  double mean = 0;
  for (const auto& p : pts) mean += p.value;
  mean /= static_cast<double>(pts.size());
  double tss = 0;
  for (const auto& p : pts) tss += (p.value - mean) * (p.value - mean);
  CHECK(f.tss == doctest::Approx(tss));
  CHECK(f.r_squared == doctest::Approx(1 - f.rss / tss));
  CHECK(f.points == pts.size());
}

TEST_CASE("standard error follows the linearized covariance") {
  Rng rng(10);
  const auto pts = saturation_points(rng, 0.1, 30, 0.05);
  const auto f = fit_m1(pts);
  double jtj = 0;
  for (const auto& p : pts) {
    const double s = std::sqrt(p.cases);
    jtj += std::pow(s * std::exp(-f.coefficients(0) * s), 2);
  }
  CHECK(f.standard_errors(0) == doctest::Approx(std::sqrt(f.rss / (30 - 1) / jtj)).epsilon(1e-9));
}

TEST_CASE("degenerate inputs") {
  std::vector<FitPoint> zeros{{0, 0.5}, {0, 0.7}, {0, 0.6}};
  CHECK_THROWS_AS(fit_m1(zeros), SingularJacobian);
  CHECK_THROWS_AS(fit_m2(zeros), SingularJacobian);
  std::vector<FitPoint> two{{100, 0.5}, {400, 0.7}};
  CHECK_THROWS_AS(fit_m2(two), Error);
  std::vector<FitPoint> one{{100, 0.5}};
  CHECK_THROWS_AS(fit_m1(one), Error);
}

TEST_CASE("fit_all produces six fits and reports unfittable strata") {
  Rng rng(3);
  std::vector<EvaluationRecord> records;
  for (int i = 0; i < 20; ++i) {
    EvaluationRecord r;
    r.cases = static_cast<std::size_t>(rng.uniform_int(1, 2000));
    r.ordinality = 2;
    r.arcs_gs = 10;
    r.m1 = 1 - std::exp(-0.1 * std::sqrt(static_cast<double>(r.cases)));
    r.m2 = 0.5 * std::exp(-0.05 * std::sqrt(static_cast<double>(r.cases)));
    records.push_back(r);
  }
  const auto fits = fit_all(records);
  REQUIRE(fits.size() == 6);
  int converged = 0;
  for (const auto& f : fits) {
    if (f.converged) ++converged;
    else CHECK(!f.diagnostics.empty());
  }
  CHECK(converged == 4);  // no ternary records
  const auto csv = format_regression_csv(fits);
  CHECK(csv.rfind("model,stratum,points,coefficient,estimate,standard_error,r_squared,iterations,converged", 0) == 0);
  CHECK(!format_regression_text(fits).empty());
  const auto m1 = m1_points(records);
  CHECK(m1.size() == 20);
  CHECK(m1[0].value == records[0].m1);
}
