// Command-line front end: generate, sample, learn, evaluate, describe, fit,
// predict, run-experiment, refit-metamodel, validate.

#include "k2bench/error.hpp"
#include "k2bench/evaluation.hpp"
#include "k2bench/experiment.hpp"
#include "k2bench/generate.hpp"
#include "k2bench/k2.hpp"
#include "k2bench/metamodel.hpp"
#include "k2bench/network_io.hpp"
#include "k2bench/regression.hpp"
#include "k2bench/sampler.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace k2bench;

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_text_file(path, text);
}

std::vector<EvaluationRecord> load_records(const std::string& path) {
  std::vector<EvaluationRecord> out;
  for (const auto& pr : records_from_csv(read_text_file(path))) out.push_back(pr.record);
  return out;
}

meta::CasesMerge parse_merge(const std::string& s) {
  if (s == "top") return meta::CasesMerge::kMergeTop;
  if (s == "bottom") return meta::CasesMerge::kMergeBottom;
  throw Error("--cases-merge must be 'top' or 'bottom'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random belief networks, logic sampling, K2 structure learning and accuracy analysis"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string out_path;

  // generate
  GenerationConfig gen;
  auto* generate_cmd = app.add_subcommand("generate", "Generate a random gold-standard network");
  generate_cmd->add_option("--seed", gen.seed, "Random seed");
  generate_cmd->add_option("--variables", gen.variable_count_choices, "Variable count choices")->delimiter(',');
  generate_cmd->add_option("--max-in-degree", gen.max_in_degree, "Maximum parents per node");
  generate_cmd->add_option("--ordinality", gen.ordinality_choices, "Ordinality choices")->delimiter(',');
  std::string parent_selection = "filter-by-ordering";
  generate_cmd->add_option("--parent-selection", parent_selection, "predecessors | filter-by-ordering");
  generate_cmd->add_option("-o,--out", out_path, "Output network file ('-' for stdout)");

  // sample
  std::string network_path;
  std::optional<std::size_t> fixed_cases;
  CaseCountBounds bounds;
  auto* sample_cmd = app.add_subcommand("sample", "Simulate a case database by logic sampling");
  sample_cmd->add_option("--network", network_path, "Network file")->required();
  sample_cmd->add_option("--seed", seed, "Random seed");
  sample_cmd->add_option("--cases", fixed_cases, "Exact case count (default: drawn uniformly)");
  sample_cmd->add_option("--min-cases", bounds.min, "Lower bound of the drawn case count");
  sample_cmd->add_option("--max-cases", bounds.max, "Upper bound of the drawn case count");
  sample_cmd->add_option("-o,--out", out_path, "Output case file ('-' for stdout)");

  // learn
  std::string cases_path, gold_path;
  LearnerConfig learner;
  auto* learn_cmd = app.add_subcommand("learn", "Induce a network with K2");
  learn_cmd->add_option("--cases", cases_path, "Case file")->required();
  learn_cmd->add_option("--ordering", learner.ordering, "Variable ordering, earliest first")->delimiter(',');
  learn_cmd->add_option("--gold", gold_path, "Take the ordering from this network");
  learn_cmd->add_option("--max-parents", learner.max_parents, "Maximum parents per node");
  learn_cmd->add_option("--seed", seed, "Accepted for uniformity; K2 is deterministic");
  learn_cmd->add_option("-o,--out", out_path, "Output network file ('-' for stdout)");

  // evaluate
  std::string induced_path;
  std::size_t eval_cases = 0;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Compare a gold and an induced network (M1, M2)");
  evaluate_cmd->add_option("--gold", gold_path, "Gold-standard network")->required();
  evaluate_cmd->add_option("--induced", induced_path, "Induced network")->required();
  evaluate_cmd->add_option("--cases", eval_cases, "Case count recorded with the pair");
  evaluate_cmd->add_option("--seed", seed, "Accepted for uniformity; unused");
  evaluate_cmd->add_option("-o,--out", out_path, "Output records CSV ('-' for stdout)");

  // describe
  std::string records_path, csv_path;
  auto* describe_cmd = app.add_subcommand("describe", "Descriptive statistics of evaluation records");
  describe_cmd->add_option("--records", records_path, "Records CSV")->required();
  describe_cmd->add_option("--csv", csv_path, "Also write the tables as CSV");
  describe_cmd->add_option("--seed", seed, "Accepted for uniformity; unused");

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "Fit the accuracy-versus-cases models");
  fit_cmd->add_option("--records", records_path, "Records CSV")->required();
  fit_cmd->add_option("--csv", csv_path, "Also write the fits as CSV");
  fit_cmd->add_option("--seed", seed, "Accepted for uniformity; unused");

  // predict
  std::string target, model_path, merge_name = "top";
  std::vector<std::string> evidence_args;
  meta::RawAttributes raw;
  auto* predict_cmd = app.add_subcommand("predict", "Query the accuracy meta-model");
  predict_cmd->add_option("--target", target, "Variable to predict (VAR_NUM, ARCS, M_DIM, CASES, M1, M2)")->required();
  predict_cmd->add_option("-e,--evidence", evidence_args, "NAME=LABEL (or NAME=#k); repeatable");
  predict_cmd->add_option("--variables", raw.variables, "Raw number of variables");
  predict_cmd->add_option("--arcs", raw.arcs, "Raw number of arcs");
  predict_cmd->add_option("--ordinality", raw.ordinality, "Raw ordinality (2 or 3)");
  predict_cmd->add_option("--cases", raw.cases, "Raw number of cases");
  predict_cmd->add_option("--m1", raw.m1, "Raw M1 fraction");
  predict_cmd->add_option("--m2", raw.m2, "Raw M2 fraction");
  predict_cmd->add_option("--model", model_path, "Meta-model file (default: bundled)");
  predict_cmd->add_option("--cases-merge", merge_name, "How raw case counts map to 4 bins: top|bottom");
  predict_cmd->add_option("--seed", seed, "Accepted for uniformity; inference is exact");

  // run-experiment
  ExperimentConfig exp;
  std::optional<std::uint64_t> exp_seed;
  std::string out_dir, manifest_path;
  bool no_pair_artifacts = false;
  auto* run_cmd = app.add_subcommand("run-experiment", "Run the full generate/sample/learn/evaluate/fit batch");
  run_cmd->add_option("--seed", exp_seed, "Experiment seed (required)");
  run_cmd->add_option("--out", out_dir, "Output directory")->required();
  run_cmd->add_option("--pairs", exp.pair_count, "Number of gold/induced pairs");
  run_cmd->add_option("--variables", exp.generation.variable_count_choices, "Variable count choices")->delimiter(',');
  run_cmd->add_option("--max-in-degree", exp.generation.max_in_degree, "Maximum parents per gold node");
  run_cmd->add_option("--ordinality", exp.generation.ordinality_choices, "Ordinality choices")->delimiter(',');
  run_cmd->add_option("--parent-selection", parent_selection, "predecessors | filter-by-ordering");
  run_cmd->add_option("--min-cases", exp.cases.min, "Lower bound of case counts");
  run_cmd->add_option("--max-cases", exp.cases.max, "Upper bound of case counts");
  run_cmd->add_option("--max-parents", exp.max_parents, "K2 parent limit");
  run_cmd->add_option("--jobs", exp.jobs, "Worker threads");
  run_cmd->add_flag("--no-pair-artifacts", no_pair_artifacts, "Skip per-pair network and case files");
  run_cmd->add_option("--from-manifest", manifest_path, "Re-run the configuration stored in a manifest");

  // refit-metamodel
  std::size_t meta_parents = 3;
  auto* refit_cmd = app.add_subcommand("refit-metamodel", "Learn an accuracy meta-model from records");
  refit_cmd->add_option("--records", records_path, "Records CSV")->required();
  refit_cmd->add_option("--max-parents", meta_parents, "K2 parent limit");
  refit_cmd->add_option("--cases-merge", merge_name, "How case counts map to 4 bins: top|bottom");
  refit_cmd->add_option("--seed", seed, "Accepted for uniformity; K2 is deterministic");
  refit_cmd->add_option("-o,--out", out_path, "Output network file ('-' for stdout)");

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "Check a network file");
  validate_cmd->add_option("--network", network_path, "Network file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate_cmd) {
      gen.parent_selection = parse_parent_selection(parent_selection);
      emit(out_path, network_to_string(generate_network(gen)));
    } else if (*sample_cmd) {
      const auto net = read_network(network_path);
      Rng rng(seed);
      const std::size_t n = fixed_cases ? *fixed_cases : draw_case_count(rng, bounds);
      auto db = sample(net, n, rng);
      db.seed = seed;
      emit(out_path, cases_to_string(db));
    } else if (*learn_cmd) {
      const auto db = read_cases(cases_path);
      if (!gold_path.empty()) {
        if (!learner.ordering.empty()) throw Error("give either --ordering or --gold, not both");
        const auto gold = read_network(gold_path);
        for (NodeIndex i : gold.ordering) learner.ordering.push_back(gold[i].name);
      }
      emit(out_path, network_to_string(k2(db, learner)));
    } else if (*evaluate_cmd) {
      const auto rec = compare(read_network(gold_path), read_network(induced_path), eval_cases);
      const PairRecord row{1, rec};
      emit(out_path, records_to_csv(std::span<const PairRecord>(&row, 1)));
    } else if (*describe_cmd) {
      const auto summary = describe(load_records(records_path));
      std::cout << format_summary_text(summary);
      if (!csv_path.empty()) write_text_file(csv_path, format_summary_csv(summary));
    } else if (*fit_cmd) {
      const auto fits = fit_all(load_records(records_path));
      std::cout << format_regression_text(fits);
      if (!csv_path.empty()) write_text_file(csv_path, format_regression_csv(fits));
    } else if (*predict_cmd) {
      const auto model = model_path.empty() ? meta::load_model() : meta::load_model(model_path);
      auto evidence = meta::binning(raw, parse_merge(merge_name));
      for (const auto& arg : evidence_args) {
        const auto eq = arg.find('=');
        if (eq == std::string::npos) throw Error("evidence '" + arg + "' is not NAME=LABEL");
        evidence[arg.substr(0, eq)] = arg.substr(eq + 1);
      }
      std::cout << meta::format_prediction(meta::predict(model, evidence, target));
    } else if (*run_cmd) {
      if (!manifest_path.empty()) {
        const auto doc = nlohmann::ordered_json::parse(read_text_file(manifest_path));
        exp = config_from_json(doc.at("config"));
      } else {
        exp.seed = exp_seed;
        exp.generation.parent_selection = parse_parent_selection(parent_selection);
        exp.write_pair_artifacts = !no_pair_artifacts;
      }
      if (!exp.seed) throw Error("run-experiment requires --seed (or --from-manifest)");
      exp.output_dir = out_dir;
      const auto report = run_experiment(exp);
      if (report.summary) std::cout << format_summary_text(*report.summary) << "\n";
      if (!report.summary_error.empty()) std::cout << "summary unavailable: " << report.summary_error << "\n";
      std::cout << format_regression_text(report.fits);
      for (const auto& p : report.pairs)
        if (!p.ok) std::cerr << "pair " << p.pair << " failed: " << p.error << "\n";
      return report.failed == 0 ? 0 : 1;
    } else if (*refit_cmd) {
      emit(out_path, network_to_string(meta::refit(load_records(records_path), parse_merge(merge_name), meta_parents)));
    } else if (*validate_cmd) {
      LoadOptions opts;
      opts.validate = false;
      const auto report = validate(read_network(network_path, opts));
      for (const auto& issue : report) std::cout << issue.message << "\n";
      if (report.empty()) std::cout << "ok\n";
      return report.empty() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
