#include "fixtures.hpp"
#include "oracles.hpp"

#include "k2bench/error.hpp"
#include "k2bench/evaluation.hpp"
#include "k2bench/k2.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace k2bench;

namespace {

CaseDatabase random_database(Rng& rng, std::size_t columns, std::size_t max_cases) {
  CaseDatabase db;
  for (std::size_t c = 0; c < columns; ++c) {
    db.column_names.push_back("V" + std::to_string(c));
    db.ordinalities.push_back(static_cast<std::size_t>(rng.uniform_int(2, 3)));
  }
  const auto n = static_cast<Eigen::Index>(rng.uniform_int(0, static_cast<std::int64_t>(max_cases)));
  db.data.resize(n, static_cast<Eigen::Index>(columns));
  for (Eigen::Index r = 0; r < n; ++r)
    for (std::size_t c = 0; c < columns; ++c)
      db.data(r, static_cast<Eigen::Index>(c)) =
          static_cast<int>(rng.uniform_int(0, static_cast<std::int64_t>(db.ordinalities[c]) - 1));
  return db;
}

/// Count rows per observed parent configuration, built directly from the data.
std::vector<std::vector<long>> raw_count_rows(const CaseDatabase& db, std::size_t child,
                                              const std::vector<std::size_t>& parents) {
  std::map<std::vector<int>, std::vector<long>> rows;
  for (Eigen::Index r = 0; r < db.data.rows(); ++r) {
    std::vector<int> key;
    for (auto p : parents) key.push_back(db.data(r, static_cast<Eigen::Index>(p)));
    auto& row = rows[key];
    row.resize(db.ordinalities[child], 0);
    ++row[static_cast<std::size_t>(db.data(r, static_cast<Eigen::Index>(child)))];
  }
  std::vector<std::vector<long>> out;
  for (auto& [k, v] : rows) out.push_back(v);
  return out;
}

CaseDatabase single_column(std::initializer_list<int> values, std::size_t r = 2) {
  CaseDatabase db;
  db.column_names = {"X"};
  db.ordinalities = {r};
  db.data.resize(static_cast<Eigen::Index>(values.size()), 1);
  Eigen::Index i = 0;
  for (int v : values) db.data(i++, 0) = v;
  return db;
}

}  // namespace

TEST_CASE("family score: binary child, counts (2, 1) gives 1/12") {
  const auto db = single_column({0, 1, 0});
  CHECK(family_log_score(db, 0, {}) == doctest::Approx(std::log(1.0 / 12.0)).epsilon(1e-14));
  const auto counts = family_counts(db, 0, {});
  CHECK(counts.q == 1);
  CHECK(counts.counts(0, 0) == 2);
  CHECK(counts.counts(0, 1) == 1);
  CHECK(family_log_score(counts) == doctest::Approx(std::log(1.0 / 12.0)).epsilon(1e-14));
}

TEST_CASE("family score of an empty database is zero") {
  Rng rng(1);
  auto db = random_database(rng, 4, 0);
  db.data.resize(0, 4);
  const std::vector<std::size_t> parents{1, 2, 3};
  CHECK(family_log_score(db, 0, {}) == 0.0);
  CHECK(family_log_score(db, 0, parents) == 0.0);
}

TEST_CASE("family score rejects a child among its parents") {
  Rng rng(1);
  const auto db = random_database(rng, 3, 10);
  const std::vector<std::size_t> bad{1, 0};
  CHECK_THROWS_AS(family_log_score(db, 0, bad), Error);
  CHECK_THROWS_AS(family_counts(db, 0, bad), Error);
}

TEST_CASE("property: family score matches the exact factorial-ratio oracle") {
  Rng rng(606);
  for (int trial = 0; trial < 200; ++trial) {
    const auto db = random_database(rng, 4, 30);
    const std::size_t child = static_cast<std::size_t>(rng.uniform_int(0, 3));
    std::vector<std::size_t> parents;
    for (std::size_t c = 0; c < 4; ++c)
      if (c != child && rng.uniform01() < 0.5) parents.push_back(c);
    const double exact = oracle::to_double(
        oracle::exact_family_score(raw_count_rows(db, child, parents), static_cast<long>(db.ordinalities[child])));
    const double got = std::exp(family_log_score(db, child, parents));
    CHECK(std::abs(got - exact) <= 1e-12 * exact);
    CHECK(std::exp(family_log_score(family_counts(db, child, parents))) == doctest::Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("property: family score is a set function of the parents") {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const auto db = random_database(rng, 5, 200);
    std::vector<std::size_t> parents{1, 2, 3, 4};
    const double base = family_log_score(db, 0, parents);
    std::reverse(parents.begin(), parents.end());
    CHECK(family_log_score(db, 0, parents) == base);
    std::swap(parents[0], parents[2]);
    CHECK(family_log_score(db, 0, parents) == base);
  }
}

TEST_CASE("family counts satisfy their invariants") {
  Rng rng(3);
  const auto db = random_database(rng, 3, 100);
  const std::vector<std::size_t> parents{1, 2};
  const auto c = family_counts(db, 0, parents);
  CHECK(c.q == db.ordinalities[1] * db.ordinalities[2]);
  CHECK((c.counts.array() >= 0).all());
  CHECK(c.counts.sum() == static_cast<int>(db.case_count()));
  CHECK(c.row_totals == c.counts.rowwise().sum());
}

TEST_CASE("K2 on zero cases returns the empty-arc network") {
  Rng rng(2);
  auto db = random_database(rng, 5, 0);
  db.data.resize(0, 5);
  const auto net = k2(db, {});
  CHECK(arc_count(net) == 0);
  CHECK(validate(net).empty());
}

TEST_CASE("K2 recovers a strong A -> B dependence") {
  const auto gold = fixtures::two_node(0.9, 0.1);
  Rng rng(5000);
  const auto db = sample(gold, 5000, rng);
  const std::vector<std::size_t> a{0};
  // Score-comparison oracle on the actual sample.
  REQUIRE(family_log_score(db, 1, a) > family_log_score(db, 1, {}));
  LearnerConfig cfg;
  cfg.ordering = {"A", "B"};
  const auto net = k2(db, cfg);
  CHECK(arcs(net) == std::vector<Arc>{{0, 1}});
}

TEST_CASE("property: greedy families never beat the exhaustive optimum and dominate the empty network") {
  Rng rng(4444);
  for (int trial = 0; trial < 100; ++trial) {
    auto gold = fixtures::random_small(rng, 4, 3);
    while (gold.size() != 4) gold = fixtures::random_small(rng, 4, 3);
    auto db = sample(gold, static_cast<std::size_t>(rng.uniform_int(0, 300)), rng);
    LearnerConfig cfg;
    cfg.max_parents = 3;
    for (NodeIndex i : gold.ordering) cfg.ordering.push_back(gold[i].name);
    const auto result = k2_search(db, cfg);
    double total = 0, empty = 0;
    for (std::size_t pos = 0; pos < 4; ++pos) {
      const std::size_t child = db.column_of(cfg.ordering[pos]);
      std::vector<std::size_t> preds;
      for (std::size_t k = 0; k < pos; ++k) preds.push_back(db.column_of(cfg.ordering[k]));
      double best = -INFINITY;
      for (unsigned mask = 0; mask < (1u << preds.size()); ++mask) {
        std::vector<std::size_t> subset;
        for (std::size_t k = 0; k < preds.size(); ++k)
          if (mask & (1u << k)) subset.push_back(preds[k]);
        if (subset.size() <= cfg.max_parents) best = std::max(best, family_log_score(db, child, subset));
      }
      std::vector<std::size_t> chosen;
      for (NodeIndex p : result.network[child].parents) chosen.push_back(p);
      const double greedy = family_log_score(db, child, chosen);
      CHECK(greedy == result.family_scores[child]);
      CHECK(greedy <= best);
      total += greedy;
      empty += family_log_score(db, child, {});

      const auto& trace = result.score_trace[child];
      for (std::size_t k = 1; k < trace.size(); ++k) CHECK(trace[k] > trace[k - 1]);
      CHECK(trace.size() == chosen.size() + 1);
    }
    CHECK(total >= empty);
  }
}

TEST_CASE("property: induced arcs respect the ordering and the parent limit") {
  Rng rng(8080);
  for (int trial = 0; trial < 20; ++trial) {
    auto gold = fixtures::random_small(rng, 8, 4);
    const auto db = sample(gold, 400, rng);
    LearnerConfig cfg;
    cfg.max_parents = 2;
    for (NodeIndex i : gold.ordering) cfg.ordering.push_back(gold[i].name);
    const auto net = k2(db, cfg);
    CHECK(validate(net).empty());
    const auto pos = ordering_positions(net);
    for (const auto& a : arcs(net)) CHECK(pos[a.from] < pos[a.to]);
    for (const auto& n : net.nodes) CHECK(n.parents.size() <= 2);
  }
}

TEST_CASE("ties go to the candidate earliest in the ordering") {
  // B and C are identical copies, so adding either to D scores the same.
  CaseDatabase db;
  db.column_names = {"C", "B", "D"};
  db.ordinalities = {2, 2, 2};
  Rng rng(1);
  db.data.resize(400, 3);
  for (Eigen::Index r = 0; r < 400; ++r) {
    const int v = static_cast<int>(rng.uniform_int(0, 1));
    db.data(r, 0) = v;
    db.data(r, 1) = v;
    db.data(r, 2) = rng.uniform01() < 0.95 ? v : 1 - v;
  }
  LearnerConfig cfg;
  cfg.ordering = {"B", "C", "D"};
  const auto net = k2(db, cfg);
  const auto d = net.index_of("D");
  REQUIRE(!net[d].parents.empty());
  CHECK(net[net[d].parents[0]].name == "B");
}

TEST_CASE("ordering mismatches are errors") {
  Rng rng(1);
  const auto db = random_database(rng, 3, 20);
  LearnerConfig cfg;
  cfg.ordering = {"V0", "V1"};
  CHECK_THROWS_AS(k2(db, cfg), Error);
  cfg.ordering = {"V0", "V1", "nope"};
  CHECK_THROWS_AS(k2(db, cfg), Error);
  cfg.ordering = {"V0", "V1", "V1"};
  CHECK_THROWS_AS(k2(db, cfg), Error);
}

TEST_CASE("CPT estimates use Laplace smoothing") {
  const auto db = single_column({0, 0, 0, 0, 0, 0, 0, 0, 0, 1});
  BeliefNetwork structure;
  fixtures::add(structure, "X", 2, {}, {{0.5, 0.5}});
  const auto net = estimate_cpts(db, structure);
  CHECK(net[0].cpt(0, 0) == doctest::Approx(10.0 / 12.0));
  CHECK(net[0].cpt(0, 1) == doctest::Approx(2.0 / 12.0));

  auto empty = single_column({}, 3);
  BeliefNetwork s3;
  fixtures::add(s3, "X", 3, {}, {{0.2, 0.3, 0.5}});
  const auto uniform = estimate_cpts(empty, s3);
  for (Eigen::Index k = 0; k < 3; ++k) CHECK(uniform[0].cpt(0, k) == doctest::Approx(1.0 / 3.0));

  Rng rng(6);
  const auto gold = fixtures::random_small(rng, 6, 3);
  const auto learned = estimate_cpts(sample(gold, 250, rng), gold);
  for (const auto& node : learned.nodes)
    for (Eigen::Index r = 0; r < node.cpt.rows(); ++r) CHECK(std::abs(node.cpt.row(r).sum() - 1.0) <= 1e-12);
}

TEST_CASE("more cases do not hurt recall on a fixed 5-node network") {
  GenerationConfig gcfg;
  gcfg.variable_count_choices = {5};
  gcfg.max_in_degree = 2;
  gcfg.parent_selection = ParentSelection::kPredecessors;
  Rng grng(55);
  auto gold = parameterize(generate_structure(gcfg, grng), grng);
  while (arc_count(gold) < 3) gold = parameterize(generate_structure(gcfg, grng), grng);
  LearnerConfig cfg;
  for (NodeIndex i : gold.ordering) cfg.ordering.push_back(gold[i].name);
  double small = 0, large = 0;
  for (int rep = 0; rep < 30; ++rep) {
    Rng rng(derive_seed(99, static_cast<std::uint64_t>(rep)));
    small += compare(gold, k2(sample(gold, 100, rng), cfg)).m1;
    large += compare(gold, k2(sample(gold, 2000, rng), cfg)).m1;
  }
  CHECK(large / 30 >= small / 30);
}
