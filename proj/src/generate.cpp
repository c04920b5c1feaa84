#include "k2bench/generate.hpp"

#include "k2bench/error.hpp"

#include <algorithm>
#include <numeric>

namespace k2bench {

const char* to_string(ParentSelection s) {
  return s == ParentSelection::kPredecessors ? "predecessors" : "filter-by-ordering";
}

ParentSelection parse_parent_selection(const std::string& s) {
  if (s == "predecessors") return ParentSelection::kPredecessors;
  if (s == "filter-by-ordering") return ParentSelection::kFilterByOrdering;
  throw Error("parent selection must be 'predecessors' or 'filter-by-ordering'");
}

void check(const GenerationConfig& cfg) {
  if (cfg.variable_count_choices.empty()) throw Error("variable count choices are empty");
  if (cfg.ordinality_choices.empty()) throw Error("ordinality choices are empty");
  for (auto r : cfg.ordinality_choices)
    if (r < 2) throw Error("ordinality choices must be >= 2");
  for (auto n : cfg.variable_count_choices)
    if (n < 1) throw Error("variable count choices must be >= 1");
}

namespace {

template <class T>
const T& pick(const std::vector<T>& choices, Rng& rng) {
  return choices[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(choices.size()) - 1))];
}

}  // namespace

BeliefNetwork generate_structure(const GenerationConfig& cfg, Rng& rng) {
  check(cfg);
  const std::size_t n = pick(cfg.variable_count_choices, rng);
  const std::size_t ordinality = pick(cfg.ordinality_choices, rng);

  BeliefNetwork net;
  net.nodes.resize(n);
  for (NodeIndex i = 0; i < n; ++i) {
    net[i].name = "X" + std::to_string(i + 1);
    net[i].ordinality = ordinality;
  }

  net.ordering.resize(n);
  std::iota(net.ordering.begin(), net.ordering.end(), NodeIndex{0});
  for (std::size_t k = n; k > 1; --k) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(k) - 1));
    std::swap(net.ordering[k - 1], net.ordering[j]);
  }

  std::vector<std::size_t> slots;
  for (std::size_t k = 0; k < n; ++k) {
    const NodeIndex child = net.ordering[k];
    // Candidate pool as ordering positions: predecessors only, or every other node.
    const bool predecessors_only = cfg.parent_selection == ParentSelection::kPredecessors;
    const std::size_t pool = predecessors_only ? k : n - 1;
    const std::size_t cap = std::min(cfg.max_in_degree, pool);
    const auto degree = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(cap)));
    slots.resize(pool);
    for (std::size_t s = 0; s < pool; ++s) slots[s] = s < k ? s : s + 1;
    // Partial Fisher-Yates.
    for (std::size_t d = 0; d < degree; ++d) {
      const auto j = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(d), static_cast<std::int64_t>(pool) - 1));
      std::swap(slots[d], slots[j]);
    }
    std::vector<std::size_t> chosen(slots.begin(), slots.begin() + static_cast<std::ptrdiff_t>(degree));
    std::sort(chosen.begin(), chosen.end());
    auto& parents = net[child].parents;
    for (std::size_t position : chosen)
      if (position < k) parents.push_back(net.ordering[position]);
  }
  return net;
}

BeliefNetwork parameterize(BeliefNetwork net, Rng& rng) {
  // Nodes are filled in ordering order so the draw sequence does not depend
  // on storage layout.
  for (NodeIndex i : net.ordering) {
    auto& node = net[i];
    const auto rows = static_cast<Eigen::Index>(parent_configurations(net, i));
    const auto cols = static_cast<Eigen::Index>(node.ordinality);
    node.cpt.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) node.cpt(r, c) = rng.exponential();
      double sum = node.cpt.row(r).sum();
      // All-zero exponentials need u == 0 in every column; redraw.
      while (!(sum > 0.0)) {
        for (Eigen::Index c = 0; c < cols; ++c) node.cpt(r, c) = rng.exponential();
        sum = node.cpt.row(r).sum();
      }
      node.cpt.row(r) /= sum;
    }
  }
  return net;
}

BeliefNetwork generate_network(const GenerationConfig& cfg) {
  Rng rng(cfg.seed);
  auto net = parameterize(generate_structure(cfg, rng), rng);
  net.name = "gold-" + std::to_string(cfg.seed);
  return net;
}

}  // namespace k2bench
