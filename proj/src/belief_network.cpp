#include "k2bench/belief_network.hpp"

#include "k2bench/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace k2bench {

std::optional<NodeIndex> BeliefNetwork::find(const std::string& node_name) const {
  for (NodeIndex i = 0; i < nodes.size(); ++i)
    if (nodes[i].name == node_name) return i;
  return std::nullopt;
}

NodeIndex BeliefNetwork::index_of(const std::string& node_name) const {
  if (auto i = find(node_name)) return *i;
  throw Error("unknown node '" + node_name + "' in network '" + name + "'");
}

std::vector<Arc> arcs(const BeliefNetwork& net) {
  std::vector<Arc> out;
  for (NodeIndex child = 0; child < net.size(); ++child)
    for (NodeIndex parent : net[child].parents) out.push_back({parent, child});
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t arc_count(const BeliefNetwork& net) {
  std::size_t n = 0;
  for (const auto& node : net.nodes) n += node.parents.size();
  return n;
}

std::size_t parent_configurations(const BeliefNetwork& net, NodeIndex node) {
  std::size_t q = 1;
  for (NodeIndex p : net[node].parents) {
    const std::size_t r = net[p].ordinality;
    if (r != 0 && q > std::numeric_limits<std::size_t>::max() / r)
      throw Error("parent configuration count overflows for node '" + net[node].name + "'");
    q *= r;
  }
  return q;
}

std::size_t parent_config_index(const BeliefNetwork& net, NodeIndex node,
                                std::span<const std::size_t> values) {
  std::size_t row = 0;
  for (NodeIndex p : net[node].parents) row = row * net[p].ordinality + values[p];
  return row;
}

std::vector<std::size_t> ordering_positions(const BeliefNetwork& net) {
  std::vector<std::size_t> pos(net.size(), net.size());
  for (std::size_t k = 0; k < net.ordering.size(); ++k)
    if (net.ordering[k] < net.size()) pos[net.ordering[k]] = k;
  return pos;
}

namespace {

bool has_cycle(const BeliefNetwork& net) {
  // Kahn's algorithm on the parent lists, ignoring out-of-range parents.
  const std::size_t n = net.size();
  std::vector<std::size_t> indegree(n, 0);
  std::vector<std::vector<NodeIndex>> children(n);
  for (NodeIndex c = 0; c < n; ++c)
    for (NodeIndex p : net[c].parents)
      if (p < n) {
        ++indegree[c];
        children[p].push_back(c);
      }
  std::vector<NodeIndex> ready;
  for (NodeIndex i = 0; i < n; ++i)
    if (indegree[i] == 0) ready.push_back(i);
  std::size_t visited = 0;
  while (!ready.empty()) {
    NodeIndex v = ready.back();
    ready.pop_back();
    ++visited;
    for (NodeIndex c : children[v])
      if (--indegree[c] == 0) ready.push_back(c);
  }
  return visited != n;
}

}  // namespace

ValidationReport validate(const BeliefNetwork& net, double row_sum_tolerance) {
  using Kind = ValidationIssue::Kind;
  ValidationReport report;
  const std::size_t n = net.size();

  std::set<std::string> names;
  for (NodeIndex i = 0; i < n; ++i) {
    if (net[i].name.empty())
      report.push_back({Kind::kName, i, std::nullopt, "node " + std::to_string(i) + " has no name"});
    else if (!names.insert(net[i].name).second)
      report.push_back({Kind::kName, i, std::nullopt, "duplicate node name '" + net[i].name + "'"});
  }

  bool ordering_ok = net.ordering.size() == n;
  if (ordering_ok) {
    std::vector<bool> seen(n, false);
    for (NodeIndex v : net.ordering) {
      if (v >= n || seen[v]) {
        ordering_ok = false;
        break;
      }
      seen[v] = true;
    }
  }
  if (!ordering_ok)
    report.push_back({Kind::kOrdering, std::nullopt, std::nullopt,
                      "ordering is not a permutation of the " + std::to_string(n) + " nodes"});

  const auto pos = ordering_positions(net);
  bool parents_in_range = true;
  for (NodeIndex i = 0; i < n; ++i) {
    const auto& node = net[i];
    std::set<NodeIndex> distinct;
    for (NodeIndex p : node.parents) {
      if (p >= n) {
        parents_in_range = false;
        report.push_back({Kind::kParent, i, std::nullopt,
                          "node '" + node.name + "' has out-of-range parent " + std::to_string(p)});
        continue;
      }
      if (p == i)
        report.push_back({Kind::kParent, i, std::nullopt, "node '" + node.name + "' is its own parent"});
      if (!distinct.insert(p).second)
        report.push_back({Kind::kParent, i, std::nullopt,
                          "node '" + node.name + "' lists parent '" + net[p].name + "' twice"});
      if (ordering_ok && p != i && pos[p] > pos[i])
        report.push_back({Kind::kOrdering, i, std::nullopt,
                          "parent '" + net[p].name + "' does not precede '" + node.name + "' in the ordering"});
    }
    if (node.ordinality < 2)
      report.push_back({Kind::kOrdinality, i, std::nullopt,
                        "node '" + node.name + "' has ordinality " + std::to_string(node.ordinality)});
    if (!node.value_labels.empty() && node.value_labels.size() != node.ordinality)
      report.push_back({Kind::kLabels, i, std::nullopt,
                        "node '" + node.name + "' has " + std::to_string(node.value_labels.size()) +
                            " value labels for ordinality " + std::to_string(node.ordinality)});
  }

  if (has_cycle(net)) report.push_back({Kind::kCycle, std::nullopt, std::nullopt, "graph contains a directed cycle"});

  if (!parents_in_range) return report;

  for (NodeIndex i = 0; i < n; ++i) {
    const auto& node = net[i];
    std::size_t q = 0;
    try {
      q = parent_configurations(net, i);
    } catch (const Error& e) {
      report.push_back({Kind::kShape, i, std::nullopt, e.what()});
      continue;
    }
    if (static_cast<std::size_t>(node.cpt.rows()) != q ||
        static_cast<std::size_t>(node.cpt.cols()) != node.ordinality) {
      std::ostringstream msg;
      msg << "node '" << node.name << "' CPT is " << node.cpt.rows() << "x" << node.cpt.cols()
          << ", expected " << q << "x" << node.ordinality;
      report.push_back({Kind::kShape, i, std::nullopt, msg.str()});
      continue;
    }
    for (Eigen::Index row = 0; row < node.cpt.rows(); ++row) {
      const auto values = node.cpt.row(row);
      if (!values.allFinite() || (values.array() < 0.0).any() || (values.array() > 1.0).any()) {
        report.push_back({Kind::kProbabilityRange, i, static_cast<std::size_t>(row),
                          "node '" + node.name + "' row " + std::to_string(row) +
                              " has a probability outside [0, 1]"});
        continue;
      }
      const double sum = values.sum();
      if (std::abs(sum - 1.0) > row_sum_tolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "node '" << node.name << "' row " << row << " sums to " << sum;
        report.push_back({Kind::kRowSum, i, static_cast<std::size_t>(row), msg.str()});
      }
    }
  }
  return report;
}

void require_valid(const BeliefNetwork& net) {
  const auto report = validate(net);
  if (report.empty()) return;
  std::string msg = "invalid network '" + net.name + "':";
  for (std::size_t k = 0; k < report.size() && k < 5; ++k) msg += "\n  " + report[k].message;
  if (report.size() > 5) msg += "\n  (" + std::to_string(report.size() - 5) + " more)";
  throw Error(msg);
}

void renormalize_rows(BeliefNetwork& net, double tolerance) {
  for (auto& node : net.nodes)
    for (Eigen::Index row = 0; row < node.cpt.rows(); ++row) {
      const double sum = node.cpt.row(row).sum();
      if (std::isfinite(sum) && sum > 0.0 && std::abs(sum - 1.0) <= tolerance) node.cpt.row(row) /= sum;
    }
}

namespace {

std::vector<std::size_t> dense_assignment(const BeliefNetwork& net, const Evidence& full) {
  std::vector<std::size_t> values(net.size());
  std::vector<std::string> missing;
  for (NodeIndex i = 0; i < net.size(); ++i) {
    auto it = full.find(i);
    if (it == full.end()) {
      missing.push_back(net[i].name);
      continue;
    }
    if (it->second >= net[i].ordinality)
      throw Error("value " + std::to_string(it->second) + " out of range for node '" + net[i].name + "'");
    values[i] = it->second;
  }
  if (!missing.empty()) {
    std::string msg = "incomplete assignment; missing:";
    for (const auto& m : missing) msg += " " + m;
    throw Error(msg);
  }
  return values;
}

}  // namespace

double joint_probability(const BeliefNetwork& net, std::span<const std::size_t> values) {
  double p = 1.0;
  for (NodeIndex i = 0; i < net.size(); ++i) {
    p *= net[i].cpt(static_cast<Eigen::Index>(parent_config_index(net, i, values)),
                    static_cast<Eigen::Index>(values[i]));
    if (p == 0.0) break;
  }
  return p;
}

double joint_probability(const BeliefNetwork& net, const Evidence& full_assignment) {
  const auto values = dense_assignment(net, full_assignment);
  return joint_probability(net, std::span<const std::size_t>(values));
}

double log_joint_probability(const BeliefNetwork& net, std::span<const std::size_t> values) {
  double lp = 0.0;
  for (NodeIndex i = 0; i < net.size(); ++i)
    lp += std::log(net[i].cpt(static_cast<Eigen::Index>(parent_config_index(net, i, values)),
                              static_cast<Eigen::Index>(values[i])));
  return lp;
}

Eigen::VectorXd infer(const BeliefNetwork& net, NodeIndex target, const Evidence& evidence) {
  if (target >= net.size()) throw Error("inference target out of range");
  if (evidence.contains(target)) throw Error("target '" + net[target].name + "' is also in the evidence");
  require_valid(net);

  std::vector<std::size_t> values(net.size(), 0);
  std::vector<NodeIndex> free;
  constexpr std::size_t kMaxConfigurations = std::size_t{1} << 28;
  std::size_t configurations = 1;
  for (NodeIndex i = 0; i < net.size(); ++i) {
    if (auto it = evidence.find(i); it != evidence.end()) {
      if (it->second >= net[i].ordinality)
        throw Error("evidence value " + std::to_string(it->second) + " out of range for node '" +
                    net[i].name + "'");
      values[i] = it->second;
    } else {
      free.push_back(i);
      configurations *= net[i].ordinality;
      if (configurations > kMaxConfigurations)
        throw Error("network too large for enumeration inference");
    }
  }
  for (const auto& [node, value] : evidence)
    if (node >= net.size()) throw Error("evidence names node index " + std::to_string(node) + " out of range");

  Eigen::VectorXd posterior = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(net[target].ordinality));
  // Odometer over the free nodes.
  while (true) {
    posterior(static_cast<Eigen::Index>(values[target])) += joint_probability(net, values);
    std::size_t k = 0;
    for (; k < free.size(); ++k) {
      if (++values[free[k]] < net[free[k]].ordinality) break;
      values[free[k]] = 0;
    }
    if (k == free.size()) break;
  }
  const double evidence_probability = posterior.sum();
  if (!(evidence_probability > 0.0)) throw ZeroProbabilityEvidence();
  return posterior / evidence_probability;
}

}  // namespace k2bench
