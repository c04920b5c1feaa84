#include "k2bench/sampler.hpp"

#include "k2bench/error.hpp"
#include "k2bench/network_io.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace k2bench {

std::size_t CaseDatabase::column_of(const std::string& name) const {
  auto it = std::find(column_names.begin(), column_names.end(), name);
  if (it == column_names.end()) throw Error("case database has no column '" + name + "'");
  return static_cast<std::size_t>(it - column_names.begin());
}

void check(const CaseDatabase& db) {
  if (db.ordinalities.size() != db.column_names.size())
    throw Error("case database has " + std::to_string(db.column_names.size()) + " columns but " +
                std::to_string(db.ordinalities.size()) + " ordinalities");
  if (db.data.rows() > 0 && static_cast<std::size_t>(db.data.cols()) != db.column_names.size())
    throw Error("case rows do not match the column count");
  for (Eigen::Index c = 0; c < db.data.cols(); ++c) {
    const int r = static_cast<int>(db.ordinalities[static_cast<std::size_t>(c)]);
    if (db.data.rows() > 0 && (db.data.col(c).minCoeff() < 0 || db.data.col(c).maxCoeff() >= r))
      throw Error("column '" + db.column_names[static_cast<std::size_t>(c)] + "' has a value outside [0, " +
                  std::to_string(r) + ")");
  }
}

std::size_t draw_case_count(Rng& rng, CaseCountBounds bounds) {
  if (bounds.max < bounds.min) throw Error("case count bounds are reversed");
  return static_cast<std::size_t>(
      rng.uniform_int(static_cast<std::int64_t>(bounds.min), static_cast<std::int64_t>(bounds.max)));
}

CaseDatabase sample(const BeliefNetwork& net, std::size_t n, Rng& rng) {
  require_valid(net);
  CaseDatabase db;
  db.source_network = net.name;
  for (const auto& node : net.nodes) {
    db.column_names.push_back(node.name);
    db.ordinalities.push_back(node.ordinality);
  }
  db.data.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(net.size()));

  std::vector<std::size_t> values(net.size(), 0);
  for (std::size_t row = 0; row < n; ++row) {
    for (NodeIndex i : net.ordering) {
      const auto cpt_row = net[i].cpt.row(static_cast<Eigen::Index>(parent_config_index(net, i, values)));
      const double u = rng.uniform01();
      double cumulative = 0.0;
      std::size_t chosen = net[i].ordinality;
      std::size_t last_positive = 0;
      for (Eigen::Index k = 0; k < cpt_row.size(); ++k) {
        if (cpt_row(k) > 0.0) last_positive = static_cast<std::size_t>(k);
        cumulative += cpt_row(k);
        if (u < cumulative) {
          chosen = static_cast<std::size_t>(k);
          break;
        }
      }
      // Rounding can leave the cumulative sum just below u.
      if (chosen == net[i].ordinality) chosen = last_positive;
      values[i] = chosen;
      db.data(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(i)) = static_cast<int>(chosen);
    }
  }
  return db;
}

std::string cases_to_string(const CaseDatabase& db) {
  check(db);
  std::string out;
  out += "# source: " + db.source_network + "\n";
  out += "# seed: " + std::to_string(db.seed) + "\n";
  out += "# ordinality: ";
  for (std::size_t c = 0; c < db.ordinalities.size(); ++c) out += (c ? "," : "") + std::to_string(db.ordinalities[c]);
  out += "\n";
  for (std::size_t c = 0; c < db.column_names.size(); ++c) out += (c ? "," : "") + db.column_names[c];
  out += "\n";
  for (Eigen::Index r = 0; r < db.data.rows(); ++r) {
    for (Eigen::Index c = 0; c < db.data.cols(); ++c) {
      if (c) out += ',';
      out += std::to_string(db.data(r, c));
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  const auto last = s.find_last_not_of(" \t\r");
  return first == std::string::npos ? std::string{} : s.substr(first, last - first + 1);
}

template <class Int>
Int parse_int(const std::string& text, const std::string& what) {
  Int out{};
  const auto t = trim(text);
  auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc{} || end != t.data() + t.size() || t.empty())
    throw Error("malformed " + what + " '" + text + "'");
  return out;
}

}  // namespace

CaseDatabase cases_from_string(const std::string& text) {
  CaseDatabase db;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  std::vector<std::vector<int>> rows;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      const auto key = trim(line.substr(1, colon - 1));
      const auto value = trim(line.substr(colon + 1));
      if (key == "source") {
        db.source_network = value;
      } else if (key == "seed") {
        db.seed = parse_int<std::uint64_t>(value, "seed");
      } else if (key == "ordinality") {
        for (const auto& f : split(value, ',')) db.ordinalities.push_back(parse_int<std::size_t>(f, "ordinality"));
      }
      continue;
    }
    const auto fields = split(line, ',');
    if (!have_header) {
      for (const auto& f : fields) db.column_names.push_back(trim(f));
      have_header = true;
      continue;
    }
    if (fields.size() != db.column_names.size())
      throw Error("case line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                  " fields, expected " + std::to_string(db.column_names.size()));
    std::vector<int> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_int<int>(f, "value on line " + std::to_string(line_no)));
    rows.push_back(std::move(row));
  }
  if (!have_header) throw Error("case file has no column header");

  db.data.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(db.column_names.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      db.data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];

  if (db.ordinalities.empty()) {
    // No header: assume the observed range, at least binary.
    for (Eigen::Index c = 0; c < db.data.cols(); ++c)
      db.ordinalities.push_back(
          std::max<std::size_t>(2, db.data.rows() ? static_cast<std::size_t>(db.data.col(c).maxCoeff()) + 1 : 2));
  }
  check(db);
  return db;
}

void write_cases(const std::filesystem::path& path, const CaseDatabase& db) {
  write_text_file(path, cases_to_string(db));
}

CaseDatabase read_cases(const std::filesystem::path& path) { return cases_from_string(read_text_file(path)); }

}  // namespace k2bench
