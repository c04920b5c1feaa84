#include "k2bench/evaluation.hpp"

#include "k2bench/error.hpp"
#include "k2bench/network_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <utility>

namespace k2bench {

EvaluationRecord compare(const BeliefNetwork& gold, const BeliefNetwork& induced, std::size_t cases) {
  std::set<std::string> gold_names, induced_names;
  for (const auto& n : gold.nodes) gold_names.insert(n.name);
  for (const auto& n : induced.nodes) induced_names.insert(n.name);
  if (gold_names != induced_names || gold_names.size() != gold.size() || induced_names.size() != induced.size())
    throw Error("networks '" + gold.name + "' and '" + induced.name + "' have different node sets");

  using NamedArc = std::pair<std::string, std::string>;
  auto named_arcs = [](const BeliefNetwork& net) {
    std::set<NamedArc> out;
    for (const auto& a : arcs(net)) out.emplace(net[a.from].name, net[a.to].name);
    return out;
  };
  const auto gold_arcs = named_arcs(gold);
  const auto induced_arcs = named_arcs(induced);

  EvaluationRecord rec;
  rec.variables = gold.size();
  rec.arcs_gs = gold_arcs.size();
  rec.cases = cases;
  rec.arcs_induced = induced_arcs.size();
  for (const auto& a : induced_arcs) {
    if (gold_arcs.contains(a))
      ++rec.arcs_recovered;
    else
      ++rec.arcs_extraneous;
  }
  if (!gold.nodes.empty()) {
    rec.ordinality = gold[0].ordinality;
    for (const auto& n : gold.nodes)
      if (n.ordinality != rec.ordinality) rec.ordinality = 0;
  }
  if (rec.arcs_gs == 0) {
    rec.degenerate = true;
    rec.m1 = rec.arcs_induced == 0 ? 1.0 : 0.0;
    rec.m2 = static_cast<double>(rec.arcs_extraneous);
  } else {
    rec.m1 = static_cast<double>(rec.arcs_recovered) / static_cast<double>(rec.arcs_gs);
    rec.m2 = static_cast<double>(rec.arcs_extraneous) / static_cast<double>(rec.arcs_gs);
  }
  return rec;
}

std::size_t BinScheme::index_of(double value) const {
  const double v = value * scale;
  if (!(v >= 0.0)) throw Error(metric + " value " + std::to_string(value) + " is outside the binned range");
  // Tolerance absorbs fractions like 0.1 * 100 landing a hair above 10.
  constexpr double kEdgeTolerance = 1e-9;
  for (std::size_t k = 0; k < bins.size(); ++k)
    if (v <= bins[k].upper + kEdgeTolerance) return k;
  return bins.size() - 1;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

const BinScheme& arcs_bins() {
  static const BinScheme s{"arcs", 1.0, {{"0-20", 20}, {"21-60", 60}, {"61-100", 100}, {">100", kInf}}};
  return s;
}

const BinScheme& cases_bins() {
  static const BinScheme s{
      "cases", 1.0, {{"0-200", 200}, {"201-500", 500}, {"501-1000", 1000}, {"1001-1500", 1500}, {">1500", kInf}}};
  return s;
}

const BinScheme& m1_bins() {
  static const BinScheme s{
      "M1", 100.0, {{"0-50%", 50}, {"51-70%", 70}, {"71-90%", 90}, {"91-95%", 95}, {"96-98%", 98}, {">98%", kInf}}};
  return s;
}

const BinScheme& m2_bins() {
  static const BinScheme s{
      "M2", 100.0, {{"0-2%", 2}, {"3-5%", 5}, {"6-10%", 10}, {"11-30%", 30}, {"31-50%", 50}, {">50%", kInf}}};
  return s;
}

MeanSd mean_sd(std::span<const double> values) {
  MeanSd out;
  out.n = values.size();
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

namespace {

std::vector<FrequencyRow> binned(const BinScheme& scheme, std::span<const double> values) {
  std::vector<FrequencyRow> rows;
  for (const auto& b : scheme.bins) rows.push_back({b.label, 0, 0.0});
  for (double v : values) ++rows[scheme.index_of(v)].count;
  for (auto& r : rows)
    r.percent = values.empty() ? 0.0 : 100.0 * static_cast<double>(r.count) / static_cast<double>(values.size());
  return rows;
}

std::vector<FrequencyRow> categorical(std::span<const std::size_t> values) {
  std::map<std::size_t, std::size_t> counts;
  for (auto v : values) ++counts[v];
  std::vector<FrequencyRow> rows;
  for (const auto& [value, count] : counts)
    rows.push_back({std::to_string(value), count,
                    100.0 * static_cast<double>(count) / static_cast<double>(values.size())});
  return rows;
}

}  // namespace

Summary describe(std::span<const EvaluationRecord> records) {
  if (records.empty()) throw Error("no evaluation records to describe");
  Summary s;
  s.records = records.size();
  std::vector<std::size_t> variables, ordinality;
  std::vector<double> arcs, cases, m1, m2;
  for (const auto& r : records) {
    variables.push_back(r.variables);
    ordinality.push_back(r.ordinality);
    arcs.push_back(static_cast<double>(r.arcs_gs));
    cases.push_back(static_cast<double>(r.cases));
    if (r.degenerate) {
      ++s.degenerate;
      continue;
    }
    m1.push_back(r.m1);
    m2.push_back(r.m2);
  }
  if (m1.empty()) throw Error("every evaluation record is degenerate (gold networks without arcs)");
  s.variables = categorical(variables);
  s.ordinality = categorical(ordinality);
  s.arcs = mean_sd(arcs);
  s.cases = mean_sd(cases);
  s.arcs_binned = binned(arcs_bins(), arcs);
  s.cases_binned = binned(cases_bins(), cases);
  s.m1 = mean_sd(m1);
  s.m2 = mean_sd(m2);
  s.m1_binned = binned(m1_bins(), m1);
  s.m2_binned = binned(m2_bins(), m2);
  const auto n = static_cast<double>(m1.size());
  s.share_m1_at_least_70 = static_cast<double>(std::count_if(m1.begin(), m1.end(), [](double v) { return v >= 0.7; })) / n;
  s.share_m2_at_most_10 = static_cast<double>(std::count_if(m2.begin(), m2.end(), [](double v) { return v <= 0.1 + 1e-12; })) / n;
  return s;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

void text_frequencies(std::string& out, const std::string& title, const std::vector<FrequencyRow>& rows) {
  out += "  " + title + "\n";
  for (const auto& r : rows)
    out += "    " + pad(r.label, 12) + pad(fixed(r.percent, 1), 8) + "(" + std::to_string(r.count) + ")\n";
}

void csv_frequencies(std::string& out, const std::string& table, const std::string& quantity,
                     const std::vector<FrequencyRow>& rows) {
  for (const auto& r : rows) {
    out += table + "," + quantity + " " + r.label + ",count," + std::to_string(r.count) + "\n";
    out += table + "," + quantity + " " + r.label + ",percent," + format_probability(r.percent) + "\n";
  }
}

}  // namespace

std::string format_summary_text(const Summary& s) {
  std::string out;
  out += "records: " + std::to_string(s.records) + " (degenerate, excluded from metrics: " +
         std::to_string(s.degenerate) + ")\n\n";
  out += "Data attributes\n";
  text_frequencies(out, "number of variables (%)", s.variables);
  text_frequencies(out, "ordinality of variables (%)", s.ordinality);
  out += "  number of arcs   mean " + fixed(s.arcs.mean, 2) + "  s.d. " + fixed(s.arcs.sd, 2) + "\n";
  out += "  number of cases  mean " + fixed(s.cases.mean, 2) + "  s.d. " + fixed(s.cases.sd, 2) + "\n\n";
  out += "Discretized data attributes\n";
  text_frequencies(out, "number of arcs (%)", s.arcs_binned);
  text_frequencies(out, "number of cases (%)", s.cases_binned);
  out += "\nEvaluation metrics (%)\n";
  out += "  M1  mean " + fixed(100 * s.m1.mean, 1) + "  s.d. " + fixed(100 * s.m1.sd, 1) + "\n";
  out += "  M2  mean " + fixed(100 * s.m2.mean, 1) + "  s.d. " + fixed(100 * s.m2.sd, 1) + "\n\n";
  out += "Discretized evaluation metrics\n";
  text_frequencies(out, "M1 (%)", s.m1_binned);
  text_frequencies(out, "M2 (%)", s.m2_binned);
  out += "\nM1 >= 70%: " + fixed(100 * s.share_m1_at_least_70, 1) + "% of pairs\n";
  out += "M2 <= 10%: " + fixed(100 * s.share_m2_at_most_10, 1) + "% of pairs\n";
  return out;
}

std::string format_summary_csv(const Summary& s) {
  std::string out = "table,row,statistic,value\n";
  out += "counts,records,count," + std::to_string(s.records) + "\n";
  out += "counts,degenerate,count," + std::to_string(s.degenerate) + "\n";
  csv_frequencies(out, "attributes", "variables", s.variables);
  csv_frequencies(out, "attributes", "ordinality", s.ordinality);
  out += "attributes,arcs,mean," + format_probability(s.arcs.mean) + "\n";
  out += "attributes,arcs,sd," + format_probability(s.arcs.sd) + "\n";
  out += "attributes,cases,mean," + format_probability(s.cases.mean) + "\n";
  out += "attributes,cases,sd," + format_probability(s.cases.sd) + "\n";
  csv_frequencies(out, "discretized_attributes", "arcs", s.arcs_binned);
  csv_frequencies(out, "discretized_attributes", "cases", s.cases_binned);
  out += "metrics,M1,mean," + format_probability(s.m1.mean) + "\n";
  out += "metrics,M1,sd," + format_probability(s.m1.sd) + "\n";
  out += "metrics,M2,mean," + format_probability(s.m2.mean) + "\n";
  out += "metrics,M2,sd," + format_probability(s.m2.sd) + "\n";
  csv_frequencies(out, "discretized_metrics", "M1", s.m1_binned);
  csv_frequencies(out, "discretized_metrics", "M2", s.m2_binned);
  return out;
}

const char* to_string(Stratum s) {
  switch (s) {
    case Stratum::kAll: return "all";
    case Stratum::kOrd2: return "ord2";
    case Stratum::kOrd3: return "ord3";
  }
  return "?";
}

const std::vector<EvaluationRecord>& Strata::operator[](Stratum s) const {
  switch (s) {
    case Stratum::kOrd2: return ord2;
    case Stratum::kOrd3: return ord3;
    default: return all;
  }
}

Strata stratify(std::span<const EvaluationRecord> records) {
  Strata out;
  for (const auto& r : records) {
    if (r.degenerate) continue;
    out.all.push_back(r);
    if (r.ordinality == 2) out.ord2.push_back(r);
    if (r.ordinality == 3) out.ord3.push_back(r);
  }
  return out;
}

std::string records_to_csv(std::span<const PairRecord> records) {
  std::string out = "pair,variables,arcs_gs,ordinality,cases,m1,m2,degenerate\n";
  for (const auto& [pair, r] : records) {
    out += std::to_string(pair) + "," + std::to_string(r.variables) + "," + std::to_string(r.arcs_gs) + "," +
           std::to_string(r.ordinality) + "," + std::to_string(r.cases) + "," + format_probability(r.m1) + "," +
           format_probability(r.m2) + "," + (r.degenerate ? "1" : "0") + "\n";
  }
  return out;
}

std::vector<PairRecord> records_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<PairRecord> out;
  bool header = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      if (line.rfind("pair,", 0) != 0) throw Error("records CSV must start with a 'pair,...' header");
      header = false;
      continue;
    }
    std::vector<std::string> f;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) f.push_back(field);
    if (f.size() != 8) throw Error("records line " + std::to_string(line_no) + " does not have 8 fields");
    auto as_size = [&](const std::string& s) {
      std::size_t v = 0;
      auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc{} || end != s.data() + s.size())
        throw Error("records line " + std::to_string(line_no) + ": bad integer '" + s + "'");
      return v;
    };
    PairRecord pr;
    pr.pair = as_size(f[0]);
    auto& r = pr.record;
    r.variables = as_size(f[1]);
    r.arcs_gs = as_size(f[2]);
    r.ordinality = as_size(f[3]);
    r.cases = as_size(f[4]);
    r.m1 = parse_probability(f[5]);
    r.m2 = parse_probability(f[6]);
    r.degenerate = as_size(f[7]) != 0;
    if (!r.degenerate) {
      r.arcs_recovered = static_cast<std::size_t>(std::llround(r.m1 * static_cast<double>(r.arcs_gs)));
      r.arcs_extraneous = static_cast<std::size_t>(std::llround(r.m2 * static_cast<double>(r.arcs_gs)));
      r.arcs_induced = r.arcs_recovered + r.arcs_extraneous;
    }
    out.push_back(pr);
  }
  return out;
}

}  // namespace k2bench
