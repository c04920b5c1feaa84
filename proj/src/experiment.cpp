#include "k2bench/experiment.hpp"

#include "k2bench/error.hpp"
#include "k2bench/network_io.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <thread>

namespace k2bench {

using nlohmann::ordered_json;

void check(const ExperimentConfig& cfg) {
  if (cfg.pair_count < 1) throw Error("pair count must be at least 1");
  if (!cfg.seed) throw Error("an experiment seed is required");
  check(cfg.generation);
  if (cfg.cases.max < cfg.cases.min) throw Error("case count bounds are reversed");
}

std::uint64_t pair_seed(std::uint64_t experiment_seed, std::size_t pair) { return derive_seed(experiment_seed, pair); }

std::vector<EvaluationRecord> ExperimentReport::records() const {
  std::vector<EvaluationRecord> out;
  for (const auto& p : pairs)
    if (p.ok) out.push_back(p.record);
  return out;
}

namespace {

std::string pair_dir(std::size_t pair) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "pairs/pair-%04zu", pair);
  return buf;
}

std::string pair_label(std::size_t pair) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "gold-%04zu", pair);
  return buf;
}

}  // namespace

PairOutcome run_pair(const ExperimentConfig& cfg, std::size_t pair) {
  PairOutcome out;
  out.pair = pair;
  out.seed = pair_seed(*cfg.seed, pair);
  std::string stage = "generate";
  try {
    Rng generation_rng(derive_seed(out.seed, kGenerationStream));
    auto gold = parameterize(generate_structure(cfg.generation, generation_rng), generation_rng);
    gold.name = pair_label(pair);

    stage = "sample";
    const std::uint64_t sampling_seed = derive_seed(out.seed, kSamplingStream);
    Rng sampling_rng(sampling_seed);
    const std::size_t n = draw_case_count(sampling_rng, cfg.cases);
    auto db = sample(gold, n, sampling_rng);
    db.seed = sampling_seed;

    stage = "learn";
    LearnerConfig learner;
    learner.max_parents = cfg.max_parents;
    for (NodeIndex i : gold.ordering) learner.ordering.push_back(gold[i].name);
    const auto induced = k2(db, learner);

    stage = "compare";
    out.record = compare(gold, induced, n);

    if (!cfg.output_dir.empty() && cfg.write_pair_artifacts) {
      stage = "write";
      const auto dir = pair_dir(pair);
      write_network(cfg.output_dir / dir / "gold.json", gold);
      write_cases(cfg.output_dir / dir / "cases.csv", db);
      write_network(cfg.output_dir / dir / "induced.json", induced);
      out.artifacts = {dir + "/gold.json", dir + "/cases.csv", dir + "/induced.json"};
    }
    out.ok = true;
  } catch (const std::exception& e) {
    out.ok = false;
    out.error = stage + ": " + e.what();
  }
  return out;
}

std::string plot_arcs_vs_cases_csv(std::span<const EvaluationRecord> records, std::size_t ordinality) {
  std::string out = "variables,cases,arcs\n";
  for (const auto& r : records)
    if (r.ordinality == ordinality)
      out += std::to_string(r.variables) + "," + std::to_string(r.cases) + "," + std::to_string(r.arcs_gs) + "\n";
  return out;
}

std::string plot_metrics_vs_cases_csv(std::span<const EvaluationRecord> records) {
  std::string out = "cases,m1,m2\n";
  for (const auto& r : records)
    if (!r.degenerate)
      out += std::to_string(r.cases) + "," + format_probability(r.m1) + "," + format_probability(r.m2) + "\n";
  return out;
}

std::string plot_metrics_vs_variables_csv(std::span<const EvaluationRecord> records) {
  std::string out = "variables,m1,m2\n";
  for (const auto& r : records)
    if (!r.degenerate)
      out += std::to_string(r.variables) + "," + format_probability(r.m1) + "," + format_probability(r.m2) + "\n";
  return out;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  check(cfg);
  ExperimentReport report;
  report.config = cfg;
  report.pairs.resize(cfg.pair_count);

  const std::size_t jobs = std::clamp<std::size_t>(cfg.jobs, 1, cfg.pair_count);
  if (jobs == 1) {
    for (std::size_t i = 0; i < cfg.pair_count; ++i) report.pairs[i] = run_pair(cfg, i + 1);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (std::size_t w = 0; w < jobs; ++w)
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < cfg.pair_count; i = next++) report.pairs[i] = run_pair(cfg, i + 1);
      });
    for (auto& t : workers) t.join();
  }

  std::vector<PairRecord> rows;
  for (const auto& p : report.pairs) {
    if (p.ok)
      rows.push_back({p.pair, p.record});
    else
      ++report.failed;
  }
  const auto records = report.records();
  if (!records.empty()) {
    try {
      report.summary = describe(records);
    } catch (const Error& e) {
      report.summary_error = e.what();
    }
    report.fits = fit_all(records);
  } else {
    report.summary_error = "no successful pairs";
  }

  if (cfg.output_dir.empty()) return report;

  auto emit = [&](const std::string& rel, const std::string& text) {
    write_text_file(cfg.output_dir / rel, text);
    report.artifacts.push_back(rel);
  };
  emit("records.csv", records_to_csv(rows));
  if (report.summary) {
    emit("summary.txt", format_summary_text(*report.summary));
    emit("summary.csv", format_summary_csv(*report.summary));
  }
  if (!report.fits.empty()) {
    emit("regression.csv", format_regression_csv(report.fits));
    emit("regression.txt", format_regression_text(report.fits));
  }
  emit("plots/arcs_vs_cases_ord2.csv", plot_arcs_vs_cases_csv(records, 2));
  emit("plots/arcs_vs_cases_ord3.csv", plot_arcs_vs_cases_csv(records, 3));
  emit("plots/metrics_vs_cases.csv", plot_metrics_vs_cases_csv(records));
  emit("plots/metrics_vs_variables.csv", plot_metrics_vs_variables_csv(records));
  write_text_file(cfg.output_dir / "manifest.json", manifest_json(report).dump(1) + "\n");
  return report;
}

ordered_json config_to_json(const ExperimentConfig& cfg) {
  ordered_json j;
  j["pair_count"] = cfg.pair_count;
  if (cfg.seed) j["seed"] = std::to_string(*cfg.seed);
  j["variable_count_choices"] = cfg.generation.variable_count_choices;
  j["max_in_degree"] = cfg.generation.max_in_degree;
  j["ordinality_choices"] = cfg.generation.ordinality_choices;
  j["parent_selection"] = to_string(cfg.generation.parent_selection);
  j["min_cases"] = cfg.cases.min;
  j["max_cases"] = cfg.cases.max;
  j["max_parents"] = cfg.max_parents;
  j["write_pair_artifacts"] = cfg.write_pair_artifacts;
  return j;
}

ExperimentConfig config_from_json(const ordered_json& j) {
  try {
    ExperimentConfig cfg;
    cfg.pair_count = j.value("pair_count", cfg.pair_count);
    if (j.contains("seed")) {
      const auto& s = j.at("seed");
      cfg.seed = s.is_string() ? std::stoull(s.get<std::string>()) : s.get<std::uint64_t>();
    }
    cfg.generation.variable_count_choices =
        j.value("variable_count_choices", cfg.generation.variable_count_choices);
    cfg.generation.max_in_degree = j.value("max_in_degree", cfg.generation.max_in_degree);
    cfg.generation.ordinality_choices = j.value("ordinality_choices", cfg.generation.ordinality_choices);
    if (j.contains("parent_selection"))
      cfg.generation.parent_selection = parse_parent_selection(j.at("parent_selection").get<std::string>());
    cfg.cases.min = j.value("min_cases", cfg.cases.min);
    cfg.cases.max = j.value("max_cases", cfg.cases.max);
    cfg.max_parents = j.value("max_parents", cfg.max_parents);
    cfg.write_pair_artifacts = j.value("write_pair_artifacts", cfg.write_pair_artifacts);
    return cfg;
  } catch (const std::exception& e) {
    throw Error(std::string("malformed experiment config: ") + e.what());
  }
}

ordered_json manifest_json(const ExperimentReport& report) {
  ordered_json m;
  m["format"] = "k2bench-manifest";
  m["version"] = 1;
  m["config"] = config_to_json(report.config);
  m["seed_derivation"] = "pair i: derive_seed(seed, i); generation: derive_seed(pair, 1); sampling: derive_seed(pair, 2)";
  auto& pairs = m["pairs"] = ordered_json::array();
  for (const auto& p : report.pairs) {
    ordered_json j;
    j["pair"] = p.pair;
    j["seed"] = std::to_string(p.seed);
    j["status"] = p.ok ? "ok" : "failed";
    if (!p.ok) j["error"] = p.error;
    if (p.ok) {
      j["variables"] = p.record.variables;
      j["arcs_gs"] = p.record.arcs_gs;
      j["cases"] = p.record.cases;
      j["degenerate"] = p.record.degenerate;
    }
    j["artifacts"] = p.artifacts;
    pairs.push_back(std::move(j));
  }
  m["artifacts"] = report.artifacts;
  m["failed_pairs"] = report.failed;
  if (report.summary) m["degenerate_pairs"] = report.summary->degenerate;
  if (!report.summary_error.empty()) m["summary_error"] = report.summary_error;
  return m;
}

}  // namespace k2bench
