#include "fixtures.hpp"

#include "k2bench/error.hpp"
#include "k2bench/sampler.hpp"

#include <doctest.h>

#include <cmath>
#include <map>

using namespace k2bench;

TEST_CASE("case counts are uniform on the configured range") {
  Rng a(77), b(77);
  const auto first = draw_case_count(a);
  CHECK(first <= 2000);
  CHECK(draw_case_count(b) == first);

  Rng rng(3);
  const int n = 100000;
  double sum = 0, sumsq = 0;
  for (int i = 0; i < n; ++i) {
    const double v = static_cast<double>(draw_case_count(rng));
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / n;
  const double sd = std::sqrt((sumsq - n * mean * mean) / (n - 1));
  // Discrete uniform on 0..2000: mean 1000, variance (2001^2 - 1) / 12.
  const double sigma = std::sqrt((2001.0 * 2001.0 - 1.0) / 12.0);
  CHECK(std::abs(mean - 1000.0) <= 3 * sigma / std::sqrt(static_cast<double>(n)));
  // Uniform kurtosis is 1.8, so SE(sd) ~ sigma * sqrt(0.8 / (4n)).
  CHECK(std::abs(sd - sigma) <= 3 * sigma * std::sqrt(0.8 / (4.0 * n)));

  Rng fixed(1);
  for (int i = 0; i < 20; ++i) CHECK(draw_case_count(fixed, {5, 5}) == 5);
  CHECK_THROWS_AS(draw_case_count(fixed, {6, 5}), Error);
}

TEST_CASE("one-hot CPTs force a single configuration") {
  BeliefNetwork net;
  fixtures::add(net, "A", 3, {}, {{0, 0, 1}});
  fixtures::add(net, "B", 2, {0}, {{1, 0}, {1, 0}, {0, 1}});
  Rng rng(4);
  const auto db = sample(net, 500, rng);
  REQUIRE(db.case_count() == 500);
  CHECK((db.data.col(0).array() == 2).all());
  CHECK((db.data.col(1).array() == 1).all());
}

TEST_CASE("zero cases gives an empty database with the right columns") {
  Rng rng(4);
  const auto db = sample(fixtures::two_node(), 0, rng);
  CHECK(db.case_count() == 0);
  CHECK(db.column_names == std::vector<std::string>{"A", "B"});
  const auto back = cases_from_string(cases_to_string(db));
  CHECK(back.case_count() == 0);
  CHECK(back.column_names == db.column_names);
}

TEST_CASE("two-node empirical joint matches joint_probability within 3 sigma") {
  const auto net = fixtures::two_node(0.2, 0.7);
  Rng rng(2718);
  const std::size_t n = 50000;
  const auto db = sample(net, n, rng);
  std::map<std::pair<int, int>, double> counts;
  for (Eigen::Index r = 0; r < db.data.rows(); ++r) counts[{db.data(r, 0), db.data(r, 1)}] += 1;
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) {
      const double p = joint_probability(net, Evidence{{0, a}, {1, b}});
      const double expected = n * p;
      const double sigma = std::sqrt(n * p * (1 - p));
      CHECK(std::abs(counts[{static_cast<int>(a), static_cast<int>(b)}] - expected) <= 3 * sigma);
    }
}

TEST_CASE("impossible configurations never appear and roots converge to priors") {
  BeliefNetwork net;
  fixtures::add(net, "A", 3, {}, {{0.25, 0.0, 0.75}});
  fixtures::add(net, "B", 2, {0}, {{0.0, 1.0}, {0.5, 0.5}, {0.6, 0.4}});
  Rng rng(5);
  const std::size_t n = 50000;
  const auto db = sample(net, n, rng);
  double a0 = 0;
  for (Eigen::Index r = 0; r < db.data.rows(); ++r) {
    const std::vector<std::size_t> v{static_cast<std::size_t>(db.data(r, 0)), static_cast<std::size_t>(db.data(r, 1))};
    REQUIRE(joint_probability(net, std::span<const std::size_t>(v)) > 0.0);
    a0 += db.data(r, 0) == 0;
  }
  CHECK(std::abs(a0 - 0.25 * n) <= 3 * std::sqrt(n * 0.25 * 0.75));
}

TEST_CASE("case files round-trip and a fixed seed reproduces the bytes") {
  Rng gen(9);
  const auto net = fixtures::random_small(gen, 5, 2);
  Rng r1(10), r2(10);
  auto d1 = sample(net, 300, r1);
  auto d2 = sample(net, 300, r2);
  d1.seed = d2.seed = 10;
  const auto text = cases_to_string(d1);
  CHECK(text == cases_to_string(d2));
  const auto back = cases_from_string(text);
  CHECK(back.data == d1.data);
  CHECK(back.ordinalities == d1.ordinalities);
  CHECK(back.seed == 10);
  CHECK(back.source_network == "random");
  CHECK(text.rfind("# source: random\n# seed: 10\n# ordinality: ", 0) == 0);
}

TEST_CASE("malformed case files are rejected") {
  CHECK_THROWS_AS(cases_from_string("# ordinality: 2,2\nA,B\n0,1\n0\n"), Error);
  CHECK_THROWS_AS(cases_from_string("# ordinality: 2,2\nA,B\n0,2\n"), Error);
  CHECK_THROWS_AS(cases_from_string("# ordinality: 2,2\nA,B\n0,x\n"), Error);
  CHECK_THROWS_AS(cases_from_string(""), Error);
  const auto inferred = cases_from_string("A,B\n0,2\n1,0\n");
  CHECK(inferred.ordinalities == std::vector<std::size_t>{2, 3});
}
