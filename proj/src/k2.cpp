#include "k2bench/k2.hpp"

#include "k2bench/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace k2bench {

namespace {

double log_factorial(std::int64_t k) { return std::lgamma(static_cast<double>(k) + 1.0); }

/// Per-row score term; sorting the terms before summation makes the total a
/// function of the multiset of count rows only.
double sum_sorted(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double total = 0.0;
  for (double t : terms) total += t;
  return total;
}

void check_family(const CaseDatabase& db, std::size_t child, std::span<const std::size_t> parents) {
  if (child >= db.column_count()) throw Error("family child out of range");
  std::set<std::size_t> seen;
  for (auto p : parents) {
    if (p >= db.column_count()) throw Error("family parent out of range");
    if (p == child) throw Error("child '" + db.column_names[child] + "' listed among its own parents");
    if (!seen.insert(p).second) throw Error("parent '" + db.column_names[p] + "' listed twice");
  }
}

/// Scores the family whose case keys are `keys` (config * r + value).
/// `keys` is sorted in place.
double score_keys(std::vector<std::uint64_t>& keys, std::uint64_t r, std::vector<double>& terms) {
  std::sort(keys.begin(), keys.end());
  terms.clear();
  const double log_r_minus_1 = log_factorial(static_cast<std::int64_t>(r) - 1);
  std::size_t i = 0;
  while (i < keys.size()) {
    const std::uint64_t config = keys[i] / r;
    std::int64_t total = 0;
    double term = log_r_minus_1;
    while (i < keys.size() && keys[i] / r == config) {
      const std::uint64_t key = keys[i];
      std::int64_t run = 0;
      while (i < keys.size() && keys[i] == key) {
        ++run;
        ++i;
      }
      term += log_factorial(run);
      total += run;
    }
    term -= log_factorial(total + static_cast<std::int64_t>(r) - 1);
    terms.push_back(term);
  }
  return sum_sorted(terms);
}

std::uint64_t checked_radix(std::uint64_t q, std::uint64_t r, const std::string& what) {
  if (r != 0 && q > std::numeric_limits<std::uint64_t>::max() / r)
    throw Error("too many parent configurations for " + what);
  return q * r;
}

}  // namespace

FamilyCounts family_counts(const CaseDatabase& db, std::size_t child, std::span<const std::size_t> parents) {
  check_family(db, child, parents);
  FamilyCounts out;
  out.r = db.ordinalities[child];
  out.q = 1;
  for (auto p : parents) out.q = checked_radix(out.q, db.ordinalities[p], db.column_names[child]);
  out.counts = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(out.q), static_cast<Eigen::Index>(out.r));
  for (Eigen::Index row = 0; row < db.data.rows(); ++row) {
    std::size_t j = 0;
    for (auto p : parents) j = j * db.ordinalities[p] + static_cast<std::size_t>(db.data(row, static_cast<Eigen::Index>(p)));
    ++out.counts(static_cast<Eigen::Index>(j), db.data(row, static_cast<Eigen::Index>(child)));
  }
  out.row_totals = out.counts.rowwise().sum();
  return out;
}

double family_log_score(const FamilyCounts& counts) {
  std::vector<double> terms;
  const auto r = static_cast<std::int64_t>(counts.r);
  for (Eigen::Index j = 0; j < counts.counts.rows(); ++j) {
    if (counts.row_totals(j) == 0) continue;
    double term = log_factorial(r - 1) - log_factorial(counts.row_totals(j) + r - 1);
    for (Eigen::Index k = 0; k < counts.counts.cols(); ++k) term += log_factorial(counts.counts(j, k));
    terms.push_back(term);
  }
  return sum_sorted(terms);
}

double family_log_score(const CaseDatabase& db, std::size_t child, std::span<const std::size_t> parents) {
  check_family(db, child, parents);
  const std::uint64_t r = db.ordinalities[child];
  std::uint64_t radix = r;
  for (auto p : parents) radix = checked_radix(radix, db.ordinalities[p], db.column_names[child]);
  std::vector<std::uint64_t> keys(db.case_count(), 0);
  for (auto p : parents)
    for (std::size_t row = 0; row < keys.size(); ++row)
      keys[row] = keys[row] * db.ordinalities[p] +
                  static_cast<std::uint64_t>(db.data(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(p)));
  for (std::size_t row = 0; row < keys.size(); ++row)
    keys[row] = keys[row] * r +
                static_cast<std::uint64_t>(db.data(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(child)));
  std::vector<double> terms;
  return score_keys(keys, r, terms);
}

namespace {

std::vector<std::size_t> resolve_ordering(const CaseDatabase& db, const LearnerConfig& cfg) {
  std::vector<std::size_t> order;
  if (cfg.ordering.empty()) {
    for (std::size_t c = 0; c < db.column_count(); ++c) order.push_back(c);
    return order;
  }
  if (cfg.ordering.size() != db.column_count())
    throw Error("ordering names " + std::to_string(cfg.ordering.size()) + " variables but the database has " +
                std::to_string(db.column_count()) + " columns");
  std::vector<bool> seen(db.column_count(), false);
  for (const auto& name : cfg.ordering) {
    const auto c = db.column_of(name);
    if (seen[c]) throw Error("ordering lists '" + name + "' twice");
    seen[c] = true;
    order.push_back(c);
  }
  return order;
}

}  // namespace

K2Result k2_search(const CaseDatabase& db, const LearnerConfig& cfg) {
  check(db);
  const auto order = resolve_ordering(db, cfg);
  const std::size_t n = db.column_count();
  const std::size_t cases = db.case_count();

  K2Result result;
  result.score_trace.resize(n);
  result.family_scores.resize(n);
  BeliefNetwork& net = result.network;
  net.name = "induced-" + (db.source_network.empty() ? std::string("cases") : db.source_network);
  net.nodes.resize(n);
  for (std::size_t c = 0; c < n; ++c) {
    net[c].name = db.column_names[c];
    net[c].ordinality = db.ordinalities[c];
  }
  net.ordering = order;

  const auto positions = ordering_positions(net);
  std::vector<std::uint64_t> config(cases), keys(cases);
  std::vector<double> terms;
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t child = order[pos];
    const std::uint64_t r = db.ordinalities[child];
    const auto child_col = db.data.col(static_cast<Eigen::Index>(child));
    std::fill(config.begin(), config.end(), 0);
    std::uint64_t q = 1;

    for (std::size_t row = 0; row < cases; ++row) keys[row] = static_cast<std::uint64_t>(child_col(static_cast<Eigen::Index>(row)));
    double current = score_keys(keys, r, terms);
    result.score_trace[child].push_back(current);

    std::vector<std::size_t> parents;
    std::vector<bool> is_parent(n, false);
    while (parents.size() < cfg.max_parents) {
      double best = current;
      std::size_t best_candidate = n;
      for (std::size_t cpos = 0; cpos < pos; ++cpos) {
        const std::size_t candidate = order[cpos];
        if (is_parent[candidate]) continue;
        const std::uint64_t rp = db.ordinalities[candidate];
        checked_radix(checked_radix(q, rp, db.column_names[child]), r, db.column_names[child]);
        const auto cand_col = db.data.col(static_cast<Eigen::Index>(candidate));
        for (std::size_t row = 0; row < cases; ++row) {
          const auto e = static_cast<Eigen::Index>(row);
          keys[row] = (config[row] * rp + static_cast<std::uint64_t>(cand_col(e))) * r +
                      static_cast<std::uint64_t>(child_col(e));
        }
        const double score = score_keys(keys, r, terms);
        if (score > best) {
          best = score;
          best_candidate = candidate;
        }
      }
      if (best_candidate == n) break;
      const std::uint64_t rp = db.ordinalities[best_candidate];
      const auto col = db.data.col(static_cast<Eigen::Index>(best_candidate));
      for (std::size_t row = 0; row < cases; ++row)
        config[row] = config[row] * rp + static_cast<std::uint64_t>(col(static_cast<Eigen::Index>(row)));
      q *= rp;
      parents.push_back(best_candidate);
      is_parent[best_candidate] = true;
      current = best;
      result.score_trace[child].push_back(current);
    }
    result.family_scores[child] = current;

    std::sort(parents.begin(), parents.end(),
              [&](std::size_t a, std::size_t b) { return positions[a] < positions[b]; });
    net[child].parents = std::move(parents);
  }

  result.network = estimate_cpts(db, std::move(result.network));
  return result;
}

BeliefNetwork k2(const CaseDatabase& db, const LearnerConfig& cfg) { return k2_search(db, cfg).network; }

BeliefNetwork estimate_cpts(const CaseDatabase& db, BeliefNetwork structure) {
  check(db);
  for (NodeIndex i = 0; i < structure.size(); ++i) {
    auto& node = structure[i];
    const std::size_t child = db.column_of(node.name);
    std::vector<std::size_t> parent_cols;
    for (NodeIndex p : node.parents) parent_cols.push_back(db.column_of(structure[p].name));
    const auto counts = family_counts(db, child, parent_cols);
    if (counts.r != node.ordinality)
      throw Error("node '" + node.name + "' has ordinality " + std::to_string(node.ordinality) +
                  " but its column has " + std::to_string(counts.r));
    const double r = static_cast<double>(counts.r);
    node.cpt = (counts.counts.cast<double>().array() + 1.0).colwise() /
               (counts.row_totals.cast<double>().array() + r);
  }
  return structure;
}

}  // namespace k2bench
