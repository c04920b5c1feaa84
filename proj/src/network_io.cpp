#include "k2bench/network_io.hpp"

#include "k2bench/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace k2bench {

using nlohmann::ordered_json;

std::string format_probability(double p) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, p, std::chars_format::general, 17);
  if (ec != std::errc{}) throw Error("cannot format probability");
  return std::string(buf, end);
}

double parse_probability(const ordered_json& value) {
  if (value.is_number()) return value.get<double>();
  if (!value.is_string()) throw Error("probability must be a number or a decimal string");
  const auto& text = value.get_ref<const std::string&>();
  double out = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc{} || end != text.data() + text.size())
    throw Error("malformed probability '" + text + "'");
  return out;
}

ordered_json to_json(const BeliefNetwork& net) {
  ordered_json doc;
  doc["format"] = "k2bench-network";
  doc["version"] = 1;
  doc["name"] = net.name;
  auto& ordering = doc["ordering"] = ordered_json::array();
  for (NodeIndex i : net.ordering) ordering.push_back(net[i].name);
  auto& nodes = doc["nodes"] = ordered_json::array();
  for (const auto& node : net.nodes) {
    ordered_json j;
    j["name"] = node.name;
    j["ordinality"] = node.ordinality;
    auto& parents = j["parents"] = ordered_json::array();
    for (NodeIndex p : node.parents) parents.push_back(net[p].name);
    if (!node.value_labels.empty()) j["values"] = node.value_labels;
    auto& cpt = j["cpt"] = ordered_json::array();
    for (Eigen::Index r = 0; r < node.cpt.rows(); ++r) {
      ordered_json row = ordered_json::array();
      for (Eigen::Index c = 0; c < node.cpt.cols(); ++c) row.push_back(format_probability(node.cpt(r, c)));
      cpt.push_back(std::move(row));
    }
    nodes.push_back(std::move(j));
  }
  return doc;
}

BeliefNetwork network_from_json(const ordered_json& doc, const LoadOptions& options) {
  try {
    if (doc.value("format", "") != "k2bench-network") throw Error("not a k2bench-network document");
    BeliefNetwork net;
    net.name = doc.value("name", "");
    const auto& nodes = doc.at("nodes");
    for (const auto& j : nodes) {
      NodeSpec node;
      node.name = j.at("name").get<std::string>();
      node.ordinality = j.at("ordinality").get<std::size_t>();
      if (j.contains("values")) node.value_labels = j.at("values").get<std::vector<std::string>>();
      net.nodes.push_back(std::move(node));
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (const auto& p : nodes[i].at("parents")) net.nodes[i].parents.push_back(net.index_of(p.get<std::string>()));
      const auto& rows = nodes[i].at("cpt");
      const auto cols = static_cast<Eigen::Index>(net.nodes[i].ordinality);
      Eigen::MatrixXd cpt(static_cast<Eigen::Index>(rows.size()), cols);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != net.nodes[i].ordinality)
          throw Error("node '" + net.nodes[i].name + "' CPT row " + std::to_string(r) + " has " +
                      std::to_string(rows[r].size()) + " entries");
        for (Eigen::Index c = 0; c < cols; ++c)
          cpt(static_cast<Eigen::Index>(r), c) = parse_probability(rows[r][static_cast<std::size_t>(c)]);
      }
      net.nodes[i].cpt = std::move(cpt);
    }
    if (doc.contains("ordering")) {
      for (const auto& name : doc.at("ordering")) net.ordering.push_back(net.index_of(name.get<std::string>()));
    } else {
      for (NodeIndex i = 0; i < net.size(); ++i) net.ordering.push_back(i);
    }
    if (options.renormalize) renormalize_rows(net, options.renormalize_tolerance);
    if (options.validate) require_valid(net);
    return net;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed network document: ") + e.what());
  }
}

std::string network_to_string(const BeliefNetwork& net) {
  // One line per top-level key and one line per node keeps large CPTs diffable.
  const auto doc = to_json(net);
  std::string out = "{\n";
  bool first_key = true;
  for (const auto& [key, value] : doc.items()) {
    if (!first_key) out += ",\n";
    first_key = false;
    out += " " + ordered_json(key).dump() + ": ";
    if (key != "nodes") {
      out += value.dump();
      continue;
    }
    out += "[";
    for (std::size_t i = 0; i < value.size(); ++i) out += (i ? ",\n  " : "\n  ") + value[i].dump();
    out += "\n ]";
  }
  return out + "\n}\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_network(const std::filesystem::path& path, const BeliefNetwork& net) {
  write_text_file(path, network_to_string(net));
}

BeliefNetwork read_network(const std::filesystem::path& path, const LoadOptions& options) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("cannot parse '" + path.string() + "': " + e.what());
  }
  return network_from_json(doc, options);
}

}  // namespace k2bench
