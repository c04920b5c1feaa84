#include "k2bench/metamodel.hpp"

#include "k2bench/error.hpp"
#include "k2bench/network_io.hpp"

#include <cstdio>
#include <cstdlib>

#ifndef K2BENCH_DATA_DIR
#define K2BENCH_DATA_DIR "data"
#endif

namespace k2bench::meta {

BinScheme cases_meta_bins(CasesMerge merge) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (merge == CasesMerge::kMergeTop)
    return {"cases", 1.0, {{"0-200", 200}, {"201-500", 500}, {"501-1000", 1000}, {">1000", kInf}}};
  return {"cases", 1.0, {{"0-500", 500}, {"501-1000", 1000}, {"1001-1500", 1500}, {">1500", kInf}}};
}

const BinScheme& variables_meta_bins() {
  static const BinScheme s{"variables", 1.0, {{"2", 2}, {"10", 10}, {"20", 20}, {"30", 30}, {"40", 40}, {"50", 50}}};
  return s;
}

std::map<std::string, std::string> binning(const RawAttributes& raw, CasesMerge merge) {
  std::map<std::string, std::string> out;
  if (raw.variables) {
    if (*raw.variables < 1 || *raw.variables > 50)
      throw Error("variable count " + std::to_string(*raw.variables) + " is outside 1..50");
    out["VAR_NUM"] = variables_meta_bins().label_of(static_cast<double>(*raw.variables));
  }
  if (raw.arcs) out["ARCS"] = arcs_bins().label_of(static_cast<double>(*raw.arcs));
  if (raw.ordinality) {
    if (*raw.ordinality != 2 && *raw.ordinality != 3)
      throw Error("ordinality " + std::to_string(*raw.ordinality) + " is not 2 or 3");
    out["M_DIM"] = *raw.ordinality == 2 ? "binary" : "ternary";
  }
  if (raw.cases) out["CASES"] = cases_meta_bins(merge).label_of(static_cast<double>(*raw.cases));
  if (raw.m1) {
    if (*raw.m1 < 0.0 || *raw.m1 > 1.0) throw Error("M1 must lie in [0, 1]");
    out["M1"] = m1_bins().label_of(*raw.m1);
  }
  if (raw.m2) {
    if (!(*raw.m2 >= 0.0)) throw Error("M2 must be non-negative");
    out["M2"] = m2_bins().label_of(*raw.m2);
  }
  return out;
}

std::filesystem::path default_model_path() {
  if (const char* env = std::getenv("K2BENCH_METAMODEL"); env && *env) return env;
  return std::filesystem::path(K2BENCH_DATA_DIR) / "metamodel.json";
}

BeliefNetwork load_model(const std::filesystem::path& path) {
  auto net = read_network(path);
  for (NodeIndex i = 0; i < net.size(); ++i)
    if (net[i].value_labels.empty())
      for (std::size_t k = 0; k < net[i].ordinality; ++k) net[i].value_labels.push_back(std::to_string(k + 1));
  return net;
}

void check_published_structure(const BeliefNetwork& net) {
  const std::map<std::string, std::pair<std::size_t, std::vector<std::string>>> expected{
      {"VAR_NUM", {6, {}}}, {"ARCS", {4, {"VAR_NUM"}}}, {"M_DIM", {2, {}}},
      {"CASES", {4, {}}},   {"M1", {6, {"CASES"}}},     {"M2", {5, {"M_DIM", "CASES"}}}};
  if (net.size() != expected.size()) throw Error("meta-model must have 6 nodes");
  for (const auto& [name, spec] : expected) {
    const auto& node = net[net.index_of(name)];
    if (node.ordinality != spec.first) throw Error("meta-model node " + name + " has the wrong ordinality");
    std::vector<std::string> parents;
    for (NodeIndex p : node.parents) parents.push_back(net[p].name);
    if (parents != spec.second) throw Error("meta-model node " + name + " has the wrong parents");
  }
}

std::size_t resolve_value(const BeliefNetwork& model, NodeIndex node, const std::string& label) {
  const auto& n = model[node];
  for (std::size_t k = 0; k < n.value_labels.size(); ++k)
    if (n.value_labels[k] == label) return k;
  if (label.size() > 1 && label[0] == '#') {
    char* end = nullptr;
    const long k = std::strtol(label.c_str() + 1, &end, 10);
    if (*end == '\0' && k >= 1 && static_cast<std::size_t>(k) <= n.ordinality) return static_cast<std::size_t>(k - 1);
  }
  std::string msg = "unknown value '" + label + "' for " + n.name + "; valid values:";
  for (const auto& l : n.value_labels) msg += " " + l;
  msg += " (or #1..#" + std::to_string(n.ordinality) + ")";
  throw Error(msg);
}

namespace {

NodeIndex resolve_node(const BeliefNetwork& model, const std::string& name) {
  if (auto i = model.find(name)) return *i;
  std::string msg = "unknown variable '" + name + "'; valid variables:";
  for (const auto& n : model.nodes) msg += " " + n.name;
  throw Error(msg);
}

}  // namespace

Prediction predict(const BeliefNetwork& model, const std::map<std::string, std::string>& evidence,
                   const std::string& target) {
  const NodeIndex t = resolve_node(model, target);
  Evidence ev;
  for (const auto& [name, label] : evidence) {
    const NodeIndex i = resolve_node(model, name);
    ev[i] = resolve_value(model, i, label);
  }
  Prediction p;
  p.target = model[t].name;
  p.labels = model[t].value_labels;
  if (p.labels.empty())
    for (std::size_t k = 0; k < model[t].ordinality; ++k) p.labels.push_back(std::to_string(k + 1));
  p.probabilities = infer(model, t, ev);
  return p;
}

std::string format_prediction(const Prediction& p) {
  std::string out = "value,probability\n";
  for (std::size_t k = 0; k < p.labels.size(); ++k) {
    out += p.labels[k] + "," + format_probability(p.probabilities(static_cast<Eigen::Index>(k))) + "\n";
  }
  return out;
}

BeliefNetwork refit(std::span<const EvaluationRecord> records, CasesMerge merge, std::size_t max_parents) {
  const auto cases_scheme = cases_meta_bins(merge);
  const std::map<std::string, std::vector<std::string>> labels{
      {"VAR_NUM", {"2", "10", "20", "30", "40", "50"}},
      {"ARCS", {"0-20", "21-60", "61-100", ">100"}},
      {"M_DIM", {"binary", "ternary"}},
      {"CASES", [&] {
         std::vector<std::string> l;
         for (const auto& b : cases_scheme.bins) l.push_back(b.label);
         return l;
       }()},
      {"M1", {"0-50%", "51-70%", "71-90%", "91-95%", "96-98%", ">98%"}},
      {"M2", {"0-2%", "3-5%", "6-10%", "11-30%", "31-50%", ">50%"}}};

  CaseDatabase db;
  db.source_network = "evaluation-records";
  for (const auto& name : kOrdering) {
    db.column_names.push_back(name);
    db.ordinalities.push_back(labels.at(name).size());
  }
  std::vector<std::map<std::string, std::string>> rows;
  for (const auto& r : records) {
    if (r.degenerate) continue;
    rows.push_back(binning({r.variables, r.arcs_gs, r.ordinality, r.cases, r.m1, r.m2}, merge));
  }
  if (rows.empty()) throw Error("no non-degenerate records to learn from");
  db.data.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(kOrdering.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t c = 0; c < kOrdering.size(); ++c) {
      const auto& l = labels.at(kOrdering[c]);
      const auto it = std::find(l.begin(), l.end(), rows[i].at(kOrdering[c]));
      db.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = static_cast<int>(it - l.begin());
    }

  LearnerConfig cfg;
  cfg.max_parents = max_parents;
  cfg.ordering = kOrdering;
  auto net = k2(db, cfg);
  net.name = "accuracy-meta-model-refit";
  for (auto& node : net.nodes) node.value_labels = labels.at(node.name);
  return net;
}

}  // namespace k2bench::meta
