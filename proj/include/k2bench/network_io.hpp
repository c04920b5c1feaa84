#pragma once

#include "k2bench/belief_network.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

namespace k2bench {

/// Network documents are JSON:
///
///   { "format": "k2bench-network", "version": 1, "name": "...",
///     "ordering": ["A", "B"],
///     "nodes": [ { "name": "B", "ordinality": 2, "parents": ["A"],
///                  "values": ["lo", "hi"],            // optional
///                  "cpt": [["0.2", "0.8"], ...] } ] }
///
/// CPT rows follow the leftmost-parent-slowest convention. Probabilities are
/// written as decimal strings with 17 significant digits so that they
/// round-trip bit-exactly; plain JSON numbers are accepted on input.
struct LoadOptions {
  /// Rows within this distance of 1 are divided by their sum.
  bool renormalize = true;
  double renormalize_tolerance = 0.02;
  /// Throw unless the loaded network validates cleanly.
  bool validate = true;
};

nlohmann::ordered_json to_json(const BeliefNetwork& net);
BeliefNetwork network_from_json(const nlohmann::ordered_json& doc, const LoadOptions& options = {});

std::string format_probability(double p);
double parse_probability(const nlohmann::ordered_json& value);

void write_network(const std::filesystem::path& path, const BeliefNetwork& net);
BeliefNetwork read_network(const std::filesystem::path& path, const LoadOptions& options = {});

/// Serialized text exactly as write_network would emit it.
std::string network_to_string(const BeliefNetwork& net);

/// Writes `text` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace k2bench
