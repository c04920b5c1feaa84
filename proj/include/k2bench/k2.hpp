#pragma once

#include "k2bench/belief_network.hpp"
#include "k2bench/sampler.hpp"

#include <Eigen/Core>

#include <span>
#include <string>
#include <vector>

namespace k2bench {

/// Sufficient statistics of one family: counts[j, k] is the number of cases
/// with parent configuration j (leftmost parent slowest) and child value k.
struct FamilyCounts {
  std::size_t r = 0;
  std::size_t q = 0;
  Eigen::MatrixXi counts;      // q x r
  Eigen::VectorXi row_totals;  // N_j
};

FamilyCounts family_counts(const CaseDatabase& db, std::size_t child, std::span<const std::size_t> parents);

/// log of the K2 family score
///   g = prod_j (r-1)! / (N_j + r - 1)! * prod_k N_jk!
/// Parent-configuration rows with N_j = 0 contribute exactly zero.
double family_log_score(const FamilyCounts& counts);

/// Same score computed straight from the database; `parents` is a set, so the
/// result is bit-identical under any permutation of it.
/// Throws Error if the child appears among the parents.
double family_log_score(const CaseDatabase& db, std::size_t child, std::span<const std::size_t> parents);

struct LearnerConfig {
  std::size_t max_parents = 10;
  /// Column names, earliest first. Empty means the database column order.
  std::vector<std::string> ordering;
};

struct K2Result {
  BeliefNetwork network;
  /// Per column: the empty-set score followed by each accepted family score.
  std::vector<std::vector<double>> score_trace;
  /// Final family score per column.
  std::vector<double> family_scores;
};

/// Greedy K2 search. Each node starts with no parents and repeatedly adds the
/// single predecessor that raises its family score the most, stopping when no
/// candidate gives a strictly higher score or max_parents is reached. Ties go
/// to the candidate earliest in the ordering. CPTs come from estimate_cpts.
K2Result k2_search(const CaseDatabase& db, const LearnerConfig& cfg);
BeliefNetwork k2(const CaseDatabase& db, const LearnerConfig& cfg);

/// Fills CPTs of `structure` with (N_jk + 1) / (N_j + r). Node names must
/// match database columns.
BeliefNetwork estimate_cpts(const CaseDatabase& db, BeliefNetwork structure);

}  // namespace k2bench
