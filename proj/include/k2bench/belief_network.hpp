#pragma once

#include <Eigen/Core>

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace k2bench {

using NodeIndex = std::size_t;

/// Partial (or full) assignment: node index -> value index.
using Evidence = std::map<NodeIndex, std::size_t>;

struct NodeSpec {
  std::string name;
  std::size_t ordinality = 2;
  /// Parent order fixes CPT row layout: leftmost parent is the most
  /// significant digit (changes slowest).
  std::vector<NodeIndex> parents;
  /// rows = product of parent ordinalities, cols = ordinality
  Eigen::MatrixXd cpt;
  /// Optional display labels, one per value.
  std::vector<std::string> value_labels;
};

struct BeliefNetwork {
  std::string name;
  std::vector<NodeSpec> nodes;
  /// Ancestral order as a permutation of node indices.
  std::vector<NodeIndex> ordering;

  std::size_t size() const { return nodes.size(); }
  const NodeSpec& operator[](NodeIndex i) const { return nodes[i]; }
  NodeSpec& operator[](NodeIndex i) { return nodes[i]; }

  std::optional<NodeIndex> find(const std::string& node_name) const;
  /// Throws Error for an unknown name.
  NodeIndex index_of(const std::string& node_name) const;
};

struct Arc {
  NodeIndex from;
  NodeIndex to;
  auto operator<=>(const Arc&) const = default;
};

std::vector<Arc> arcs(const BeliefNetwork& net);
std::size_t arc_count(const BeliefNetwork& net);

/// Number of CPT rows the node needs. Throws if it would overflow.
std::size_t parent_configurations(const BeliefNetwork& net, NodeIndex node);

/// Row of `node`'s CPT selected by a full value vector indexed by node.
std::size_t parent_config_index(const BeliefNetwork& net, NodeIndex node,
                                std::span<const std::size_t> values);

/// Ordering position of every node (inverse permutation of net.ordering).
std::vector<std::size_t> ordering_positions(const BeliefNetwork& net);

struct ValidationIssue {
  enum class Kind {
    kOrdering,
    kParent,
    kCycle,
    kOrdinality,
    kShape,
    kProbabilityRange,
    kRowSum,
    kName,
    kLabels,
  };
  Kind kind;
  std::optional<NodeIndex> node;
  std::optional<std::size_t> row;
  std::string message;
};

using ValidationReport = std::vector<ValidationIssue>;

/// Every violated invariant; empty iff the network is well-formed.
ValidationReport validate(const BeliefNetwork& net, double row_sum_tolerance = 1e-9);

/// Throws Error with the first few issues if the report is non-empty.
void require_valid(const BeliefNetwork& net);

/// Divides each CPT row by its sum when |sum - 1| <= tolerance.
/// Rows further off are left alone (validate reports them).
void renormalize_rows(BeliefNetwork& net, double tolerance = 0.02);

/// Product over nodes of P(x_i | parents(x_i)). Assignment must cover every node.
double joint_probability(const BeliefNetwork& net, const Evidence& full_assignment);
double joint_probability(const BeliefNetwork& net, std::span<const std::size_t> values);
double log_joint_probability(const BeliefNetwork& net, std::span<const std::size_t> values);

/// Exact posterior P(target | evidence) by enumerating every joint
/// configuration consistent with the evidence.
/// Throws ZeroProbabilityEvidence when P(evidence) == 0.
Eigen::VectorXd infer(const BeliefNetwork& net, NodeIndex target, const Evidence& evidence);

}  // namespace k2bench
