#pragma once

#include "k2bench/belief_network.hpp"
#include "k2bench/random.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace k2bench {

/// Complete discrete observations, one row per case, one column per variable.
struct CaseDatabase {
  std::vector<std::string> column_names;
  std::vector<std::size_t> ordinalities;
  Eigen::MatrixXi data;  // cases x columns, value indices
  std::string source_network;
  std::uint64_t seed = 0;

  std::size_t case_count() const { return static_cast<std::size_t>(data.rows()); }
  std::size_t column_count() const { return column_names.size(); }
  std::size_t column_of(const std::string& name) const;
};

/// Throws Error if shapes disagree or a value is out of its column's range.
void check(const CaseDatabase& db);

struct CaseCountBounds {
  std::size_t min = 0;
  std::size_t max = 2000;
};

/// Uniform integer in [bounds.min, bounds.max].
std::size_t draw_case_count(Rng& rng, CaseCountBounds bounds = {});

/// Logic sampling: each case visits nodes in ancestral order and draws each
/// node from the CPT row picked by its already-sampled parents, using one
/// uniform per node per case and inverting the row's cumulative sum.
/// Columns follow node index order.
CaseDatabase sample(const BeliefNetwork& net, std::size_t n, Rng& rng);

/// CSV with `#` header lines for source, seed and ordinalities, then a row of
/// column names, then one line of integer value indices per case.
std::string cases_to_string(const CaseDatabase& db);
CaseDatabase cases_from_string(const std::string& text);
void write_cases(const std::filesystem::path& path, const CaseDatabase& db);
CaseDatabase read_cases(const std::filesystem::path& path);

}  // namespace k2bench
