#pragma once

#include "k2bench/belief_network.hpp"
#include "k2bench/random.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace k2bench {

/// How a node's parents are chosen once its in-degree d is drawn.
enum class ParentSelection {
  /// d ~ U{0..min(max_in_degree, k)} for the node at ordering position k;
  /// d distinct parents drawn from its k predecessors.
  kPredecessors,
  /// d ~ U{0..min(max_in_degree, n-1)}; d distinct candidates drawn from all
  /// other nodes, keeping only those earlier in the ordering. Yields about
  /// max_in_degree / 4 arcs per node.
  kFilterByOrdering,
};

const char* to_string(ParentSelection s);
ParentSelection parse_parent_selection(const std::string& s);

struct GenerationConfig {
  std::vector<std::size_t> variable_count_choices{2, 10, 20, 30, 40, 50};
  std::size_t max_in_degree = 10;
  /// One value is drawn per network and shared by all its nodes.
  std::vector<std::size_t> ordinality_choices{2, 3};
  ParentSelection parent_selection = ParentSelection::kFilterByOrdering;
  std::uint64_t seed = 0;
};

/// Throws Error if the configuration is unusable.
void check(const GenerationConfig& cfg);

/// Random DAG with empty CPTs.
///
/// Node count and ordinality are drawn uniformly from the configured choices
/// and a uniformly random ordering is fixed; parents then follow
/// cfg.parent_selection and are stored in ordering order.
BeliefNetwork generate_structure(const GenerationConfig& cfg, Rng& rng);

/// Fills every CPT row with an independent flat-Dirichlet draw
/// (normalized unit exponentials).
BeliefNetwork parameterize(BeliefNetwork net, Rng& rng);

/// generate_structure + parameterize from a generator seeded with cfg.seed.
BeliefNetwork generate_network(const GenerationConfig& cfg);

}  // namespace k2bench
