#pragma once

#include "k2bench/belief_network.hpp"
#include "k2bench/generate.hpp"
#include "k2bench/random.hpp"

#include <initializer_list>
#include <string>
#include <vector>

namespace fixtures {

using k2bench::BeliefNetwork;
using k2bench::NodeIndex;

/// Adds a node; `rows` are CPT rows in leftmost-parent-slowest order.
inline NodeIndex add(BeliefNetwork& net, std::string name, std::size_t r, std::vector<NodeIndex> parents,
                     std::initializer_list<std::initializer_list<double>> rows) {
  k2bench::NodeSpec node;
  node.name = std::move(name);
  node.ordinality = r;
  node.parents = std::move(parents);
  node.cpt.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(r));
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double v : row) node.cpt(i, j++) = v;
    ++i;
  }
  net.nodes.push_back(std::move(node));
  net.ordering.push_back(net.nodes.size() - 1);
  return net.nodes.size() - 1;
}

/// A -> B with P(A=0) = 0.5, P(B=0|A=0) = b0, P(B=0|A=1) = b1.
inline BeliefNetwork two_node(double b0 = 0.2, double b1 = 0.7) {
  BeliefNetwork net;
  net.name = "ab";
  add(net, "A", 2, {}, {{0.5, 0.5}});
  add(net, "B", 2, {0}, {{b0, 1 - b0}, {b1, 1 - b1}});
  return net;
}

/// Random small parameterized network (predecessor parent law).
inline BeliefNetwork random_small(k2bench::Rng& rng, std::size_t max_nodes, std::size_t max_in_degree = 3) {
  k2bench::GenerationConfig cfg;
  cfg.variable_count_choices.clear();
  for (std::size_t n = 1; n <= max_nodes; ++n) cfg.variable_count_choices.push_back(n);
  cfg.max_in_degree = max_in_degree;
  cfg.parent_selection = k2bench::ParentSelection::kPredecessors;
  auto net = k2bench::parameterize(k2bench::generate_structure(cfg, rng), rng);
  net.name = "random";
  return net;
}

}  // namespace fixtures
