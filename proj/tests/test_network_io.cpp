#include "fixtures.hpp"

#include "k2bench/error.hpp"
#include "k2bench/network_io.hpp"

#include <doctest.h>

#include <cstring>

using namespace k2bench;

TEST_CASE("property: network text round-trips bit-exactly") {
  Rng rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    const auto net = fixtures::random_small(rng, 12, 4);
    const auto text = network_to_string(net);
    const auto back = network_from_json(nlohmann::ordered_json::parse(text), LoadOptions{.renormalize = false});
    REQUIRE(back.size() == net.size());
    CHECK(back.ordering == net.ordering);
    for (NodeIndex i = 0; i < net.size(); ++i) {
      CHECK(back[i].parents == net[i].parents);
      REQUIRE(back[i].cpt.size() == net[i].cpt.size());
      CHECK(std::memcmp(back[i].cpt.data(), net[i].cpt.data(), sizeof(double) * static_cast<std::size_t>(net[i].cpt.size())) == 0);
    }
    CHECK(network_to_string(back) == text);
  }
}

TEST_CASE("probabilities are written with 17 significant digits") {
  CHECK(format_probability(0.1) == "0.10000000000000001");
  CHECK(parse_probability(nlohmann::ordered_json("0.10000000000000001")) == 0.1);
  CHECK(parse_probability(nlohmann::ordered_json(0.25)) == 0.25);
  CHECK_THROWS_AS(parse_probability(nlohmann::ordered_json("0.1x")), Error);
}

TEST_CASE("loading renormalizes near-unit rows and rejects broken ones") {
  const char* near = R"({"format":"k2bench-network","name":"n","nodes":[
      {"name":"A","ordinality":2,"parents":[],"cpt":[[0.51,0.5]]}]})";
  const auto net = network_from_json(nlohmann::ordered_json::parse(near));
  CHECK(net[0].cpt.row(0).sum() == doctest::Approx(1.0).epsilon(1e-15));

  const char* broken = R"({"format":"k2bench-network","name":"n","nodes":[
      {"name":"A","ordinality":2,"parents":[],"cpt":[[0.6,0.6]]}]})";
  CHECK_THROWS_WITH_AS(network_from_json(nlohmann::ordered_json::parse(broken)), doctest::Contains("sums to"), Error);

  const char* unknown_parent = R"({"format":"k2bench-network","name":"n","nodes":[
      {"name":"A","ordinality":2,"parents":["Z"],"cpt":[[0.5,0.5]]}]})";
  CHECK_THROWS_WITH_AS(network_from_json(nlohmann::ordered_json::parse(unknown_parent)),
                       doctest::Contains("unknown node 'Z'"), Error);
}

TEST_CASE("missing ordering defaults to storage order") {
  const char* doc = R"({"format":"k2bench-network","name":"n","nodes":[
      {"name":"A","ordinality":2,"parents":[],"cpt":[["0.5","0.5"]]},
      {"name":"B","ordinality":2,"parents":["A"],"cpt":[["1","0"],["0","1"]]}]})";
  const auto net = network_from_json(nlohmann::ordered_json::parse(doc));
  CHECK(net.ordering == std::vector<NodeIndex>{0, 1});
  CHECK(net[1].parents == std::vector<NodeIndex>{0});
}
