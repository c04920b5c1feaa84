#pragma once

#include "k2bench/belief_network.hpp"
#include "k2bench/evaluation.hpp"
#include "k2bench/k2.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace k2bench::meta {

/// Node names of the accuracy meta-model, in the order used to learn it.
inline const std::vector<std::string> kOrdering{"VAR_NUM", "ARCS", "M_DIM", "CASES", "M1", "M2"};

/// The meta-model has four case-count values while the case table has five
/// bins. kMergeTop joins 1001-1500 and >1500 (its prior 0.55 matches their
/// combined share); kMergeBottom joins 0-200 and 201-500.
enum class CasesMerge { kMergeTop, kMergeBottom };

BinScheme cases_meta_bins(CasesMerge merge = CasesMerge::kMergeTop);
const BinScheme& variables_meta_bins();  // 2, 10, 20, 30, 40, 50 (upper-inclusive)

/// Raw dataset attributes, any subset of which may be given.
struct RawAttributes {
  std::optional<std::size_t> variables;
  std::optional<std::size_t> arcs;
  std::optional<std::size_t> ordinality;
  std::optional<std::size_t> cases;
  std::optional<double> m1;
  std::optional<double> m2;
};

/// Meta-model node name -> value label for every attribute present.
/// Throws Error for values outside the binned ranges.
std::map<std::string, std::string> binning(const RawAttributes& raw, CasesMerge merge = CasesMerge::kMergeTop);

/// Path of the bundled model: $K2BENCH_METAMODEL if set, else the installed
/// data directory.
std::filesystem::path default_model_path();
BeliefNetwork load_model(const std::filesystem::path& path = default_model_path());

/// Throws Error unless `net` has the published meta-model structure.
void check_published_structure(const BeliefNetwork& net);

/// Value index of `label` on `node`. Accepts a value label or "#k" (1-based).
/// Errors list the valid labels.
std::size_t resolve_value(const BeliefNetwork& model, NodeIndex node, const std::string& label);

struct Prediction {
  std::string target;
  std::vector<std::string> labels;
  Eigen::VectorXd probabilities;
};

/// Posterior over `target` given labelled evidence, by exact enumeration.
Prediction predict(const BeliefNetwork& model, const std::map<std::string, std::string>& evidence,
                   const std::string& target);

std::string format_prediction(const Prediction& p);

/// Learns a replacement meta-model from non-degenerate records: attributes are
/// binned, then K2 runs with kOrdering.
BeliefNetwork refit(std::span<const EvaluationRecord> records, CasesMerge merge = CasesMerge::kMergeTop,
                    std::size_t max_parents = 3);

}  // namespace k2bench::meta
