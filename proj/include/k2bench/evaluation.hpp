#pragma once

#include "k2bench/belief_network.hpp"

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace k2bench {

/// One gold/induced pair. m1 and m2 are fractions, not percentages.
///
/// Degenerate pairs (gold has no arcs) use m1 = 1 if the induced network is
/// also empty and 0 otherwise, and m2 = number of induced arcs. They are
/// excluded from every aggregate and fit.
struct EvaluationRecord {
  std::size_t variables = 0;
  std::size_t arcs_gs = 0;
  std::size_t ordinality = 0;  // 0 if the gold network mixes ordinalities
  std::size_t cases = 0;
  double m1 = 0.0;
  double m2 = 0.0;
  bool degenerate = false;
  std::size_t arcs_induced = 0;
  std::size_t arcs_recovered = 0;
  std::size_t arcs_extraneous = 0;
};

/// Directed-arc comparison by node name. Throws Error if the node sets differ.
EvaluationRecord compare(const BeliefNetwork& gold, const BeliefNetwork& induced, std::size_t cases = 0);

/// Upper-inclusive bins over a non-negative quantity. Values are multiplied
/// by `scale` first (100 for metrics stored as fractions).
struct BinScheme {
  struct Bin {
    std::string label;
    double upper;
  };
  std::string metric;
  double scale = 1.0;
  std::vector<Bin> bins;

  std::size_t index_of(double value) const;
  const std::string& label_of(double value) const { return bins[index_of(value)].label; }
};

const BinScheme& arcs_bins();   // 0-20, 21-60, 61-100, >100
const BinScheme& cases_bins();  // 0-200, 201-500, 501-1000, 1001-1500, >1500
const BinScheme& m1_bins();     // 0-50%, 51-70%, 71-90%, 91-95%, 96-98%, >98%
const BinScheme& m2_bins();     // 0-2%, 3-5%, 6-10%, 11-30%, 31-50%, >50%

struct FrequencyRow {
  std::string label;
  std::size_t count = 0;
  double percent = 0.0;
};

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;  // n - 1 denominator; 0 for a single value
  std::size_t n = 0;
};

MeanSd mean_sd(std::span<const double> values);

/// Descriptive statistics in the layout of the attribute and metric tables.
/// Attributes cover every record; metrics cover non-degenerate records only.
struct Summary {
  std::size_t records = 0;
  std::size_t degenerate = 0;
  std::vector<FrequencyRow> variables;
  std::vector<FrequencyRow> ordinality;
  MeanSd arcs;
  MeanSd cases;
  std::vector<FrequencyRow> arcs_binned;
  std::vector<FrequencyRow> cases_binned;
  MeanSd m1;  // fractions
  MeanSd m2;
  std::vector<FrequencyRow> m1_binned;
  std::vector<FrequencyRow> m2_binned;
  double share_m1_at_least_70 = 0.0;
  double share_m2_at_most_10 = 0.0;
};

/// Throws Error when there is no non-degenerate record.
Summary describe(std::span<const EvaluationRecord> records);

std::string format_summary_text(const Summary& summary);
/// Long format: table,row,statistic,value
std::string format_summary_csv(const Summary& summary);

enum class Stratum { kAll, kOrd2, kOrd3 };
const char* to_string(Stratum s);

/// Non-degenerate records split by ordinality, plus the pooled set.
struct Strata {
  std::vector<EvaluationRecord> all;
  std::vector<EvaluationRecord> ord2;
  std::vector<EvaluationRecord> ord3;

  const std::vector<EvaluationRecord>& operator[](Stratum s) const;
};

Strata stratify(std::span<const EvaluationRecord> records);

/// records CSV: pair,variables,arcs_gs,ordinality,cases,m1,m2,degenerate
struct PairRecord {
  std::size_t pair = 0;
  EvaluationRecord record;
};
std::string records_to_csv(std::span<const PairRecord> records);
std::vector<PairRecord> records_from_csv(const std::string& text);

}  // namespace k2bench
