#pragma once

#include <array>
#include <charconv>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lrt/simulation.hpp"
#include "lrt/statistics.hpp"

// CSV input for data matrices and grouped samples, CSV output for simulated
// p-values, and JSON forms of every report type.

namespace lrt {

namespace detail {

inline bool parse_double_field(std::string_view field, double& out) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() &&
         (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
    field.remove_suffix(1);
  }
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  if (field.empty()) return false;
  const char* last = field.data() + field.size();
  const auto result = std::from_chars(field.data(), last, out);
  return result.ec == std::errc() && result.ptr == last;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

inline std::string trim_field(const std::string& field) {
  std::size_t begin = 0;
  std::size_t end = field.size();
  while (begin < end && (field[begin] == ' ' || field[begin] == '\t')) ++begin;
  while (end > begin &&
         (field[end - 1] == ' ' || field[end - 1] == '\t' || field[end - 1] == '\r')) {
    --end;
  }
  return field.substr(begin, end - begin);
}

inline bool blank_line(const std::string& line) {
  for (char c : line) {
    if (c != ' ' && c != '\t' && c != '\r') return false;
  }
  return true;
}

inline std::string shortest_double(double value) {
  std::array<char, 32> buffer{};
  const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), result.ptr);
}

}  // namespace detail

// Read a numeric matrix from CSV. A first line whose fields are not all
// numeric is treated as a header and skipped.
inline Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_number = 0;
  bool saw_content = false;
  while (std::getline(in, line)) {
    ++line_number;
    if (detail::blank_line(line)) continue;
    const std::vector<std::string> fields = detail::split_csv_line(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    std::size_t bad_field = 0;
    for (std::size_t k = 0; k < fields.size(); ++k) {
      if (!detail::parse_double_field(fields[k], row[k])) {
        numeric = false;
        bad_field = k;
        break;
      }
    }
    if (!numeric) {
      if (!saw_content) {
        saw_content = true;
        continue;
      }
      throw ParseError("'" + path + "' line " + std::to_string(line_number) + ": field " +
                       std::to_string(bad_field + 1) + " ('" + detail::trim_field(fields[bad_field]) +
                       "') is not a number");
    }
    saw_content = true;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("'" + path + "' line " + std::to_string(line_number) + ": has " +
                       std::to_string(row.size()) + " fields; expected " +
                       std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("'" + path + "' contains no data rows");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows.front().size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

// Read a grouped sample from CSV: the first column is the group label, the
// remaining columns are the observation. Groups keep first-appearance order.
// A first line whose non-label fields are not all numeric is a header.
inline GroupedSample read_grouped_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::vector<std::string> labels;
  std::vector<std::vector<std::vector<double>>> groups;
  std::string line;
  std::size_t line_number = 0;
  bool saw_content = false;
  std::size_t expected_fields = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (detail::blank_line(line)) continue;
    const std::vector<std::string> fields = detail::split_csv_line(line);
    if (fields.size() < 2) {
      throw ParseError("'" + path + "' line " + std::to_string(line_number) +
                       ": needs a label column and at least one numeric column");
    }
    std::vector<double> row(fields.size() - 1);
    bool numeric = true;
    std::size_t bad_field = 0;
    for (std::size_t k = 1; k < fields.size(); ++k) {
      if (!detail::parse_double_field(fields[k], row[k - 1])) {
        numeric = false;
        bad_field = k;
        break;
      }
    }
    if (!numeric) {
      if (!saw_content) {
        saw_content = true;
        continue;
      }
      throw ParseError("'" + path + "' line " + std::to_string(line_number) + ": field " +
                       std::to_string(bad_field + 1) + " ('" + detail::trim_field(fields[bad_field]) +
                       "') is not a number");
    }
    saw_content = true;
    if (expected_fields == 0) {
      expected_fields = fields.size();
    } else if (fields.size() != expected_fields) {
      throw ParseError("'" + path + "' line " + std::to_string(line_number) + ": has " +
                       std::to_string(fields.size()) + " fields; expected " +
                       std::to_string(expected_fields));
    }
    const std::string label = detail::trim_field(fields[0]);
    std::size_t g = 0;
    while (g < labels.size() && labels[g] != label) ++g;
    if (g == labels.size()) {
      labels.push_back(label);
      groups.emplace_back();
    }
    groups[g].push_back(std::move(row));
  }
  if (groups.empty()) throw ParseError("'" + path + "' contains no data rows");
  GroupedSample sample;
  sample.labels = labels;
  sample.groups.reserve(groups.size());
  for (const auto& rows : groups) {
    Matrix m(static_cast<Eigen::Index>(rows.size()),
             static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < rows.front().size(); ++j) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
      }
    }
    sample.groups.push_back(std::move(m));
  }
  sample.validate();
  return sample;
}

inline void to_json(nlohmann::json& j, const TestReport& report) {
  j = nlohmann::json{{"kind", to_string(report.kind)},
                     {"regime", to_string(report.regime)},
                     {"statistic", report.statistic},
                     {"center", report.center},
                     {"scale", report.scale},
                     {"z", report.z},
                     {"p_value", report.p_value},
                     {"alpha", report.alpha},
                     {"reject", report.reject},
                     {"diagnostics", report.diagnostics}};
}

inline void from_json(const nlohmann::json& j, TestReport& report) {
  report.kind = test_kind_from_string(j.at("kind").get<std::string>());
  report.regime = regime_from_string(j.at("regime").get<std::string>());
  j.at("statistic").get_to(report.statistic);
  j.at("center").get_to(report.center);
  j.at("scale").get_to(report.scale);
  j.at("z").get_to(report.z);
  j.at("p_value").get_to(report.p_value);
  j.at("alpha").get_to(report.alpha);
  j.at("reject").get_to(report.reject);
  j.at("diagnostics").get_to(report.diagnostics);
}

inline void to_json(nlohmann::json& j, const ExperimentConfig& cfg) {
  std::vector<std::string> regimes;
  regimes.reserve(cfg.regimes.size());
  for (Regime regime : cfg.regimes) regimes.emplace_back(to_string(regime));
  j = nlohmann::json{{"kind", to_string(cfg.kind)},
                     {"n", cfg.n},
                     {"blocks", cfg.blocks},
                     {"p", cfg.p},
                     {"q1", cfg.q1},
                     {"q2", cfg.q2},
                     {"group_sizes", cfg.group_sizes},
                     {"replications", cfg.replications},
                     {"seed", cfg.seed},
                     {"replication_offset", cfg.replication_offset},
                     {"alpha", cfg.alpha},
                     {"regimes", regimes},
                     {"threads", cfg.threads}};
}

inline void from_json(const nlohmann::json& j, ExperimentConfig& cfg) {
  cfg.kind = test_kind_from_string(j.at("kind").get<std::string>());
  j.at("n").get_to(cfg.n);
  j.at("blocks").get_to(cfg.blocks);
  j.at("p").get_to(cfg.p);
  j.at("q1").get_to(cfg.q1);
  j.at("q2").get_to(cfg.q2);
  j.at("group_sizes").get_to(cfg.group_sizes);
  j.at("replications").get_to(cfg.replications);
  j.at("seed").get_to(cfg.seed);
  j.at("replication_offset").get_to(cfg.replication_offset);
  j.at("alpha").get_to(cfg.alpha);
  cfg.regimes.clear();
  for (const auto& name : j.at("regimes")) {
    cfg.regimes.push_back(regime_from_string(name.get<std::string>()));
  }
  j.at("threads").get_to(cfg.threads);
}

inline void to_json(nlohmann::json& j, const RegimeResult& result) {
  j = nlohmann::json{{"pvalues", result.pvalues},
                     {"rejection_rate", result.rejection_rate},
                     {"ks", result.ks},
                     {"excluded", result.excluded},
                     {"histogram", result.histogram}};
}

inline void from_json(const nlohmann::json& j, RegimeResult& result) {
  j.at("pvalues").get_to(result.pvalues);
  j.at("rejection_rate").get_to(result.rejection_rate);
  j.at("ks").get_to(result.ks);
  j.at("excluded").get_to(result.excluded);
  j.at("histogram").get_to(result.histogram);
}

inline void to_json(nlohmann::json& j, const CalibrationReport& report) {
  nlohmann::json regimes = nlohmann::json::object();
  for (const RegimeResult& result : report.regimes) {
    regimes[to_string(result.regime)] = result;
  }
  j = nlohmann::json{{"config", report.config},
                     {"regimes", std::move(regimes)},
                     {"excluded", report.excluded},
                     {"stream_indices", report.stream_indices},
                     {"excluded_indices", report.excluded_indices},
                     {"runtime_seconds", report.runtime_seconds}};
}

inline void from_json(const nlohmann::json& j, CalibrationReport& report) {
  j.at("config").get_to(report.config);
  report.regimes.clear();
  for (const auto& item : j.at("regimes").items()) {
    RegimeResult result = item.value().get<RegimeResult>();
    result.regime = regime_from_string(item.key());
    report.regimes.push_back(std::move(result));
  }
  j.at("excluded").get_to(report.excluded);
  j.at("stream_indices").get_to(report.stream_indices);
  j.at("excluded_indices").get_to(report.excluded_indices);
  j.at("runtime_seconds").get_to(report.runtime_seconds);
}

inline void to_json(nlohmann::json& j, const CltDiagnostics& diag) {
  j = nlohmann::json{{"sup_term", diag.sup_term},
                     {"variance_sum", diag.variance_sum},
                     {"max_fourth_to_second", diag.max_fourth_to_second}};
}

inline void from_json(const nlohmann::json& j, CltDiagnostics& diag) {
  j.at("sup_term").get_to(diag.sup_term);
  j.at("variance_sum").get_to(diag.variance_sum);
  j.at("max_fourth_to_second").get_to(diag.max_fourth_to_second);
}

inline void to_json(nlohmann::json& j, const CrosscheckReport& report) {
  j = nlohmann::json{{"ks", report.ks},
                     {"ks_critical_1pct", report.ks_critical_1pct},
                     {"pass", report.pass},
                     {"mean_gap_se", report.mean_gap_se},
                     {"variance_gap_se", report.variance_gap_se},
                     {"draws", report.draws},
                     {"exact_mean", report.exact_mean},
                     {"exact_variance", report.exact_variance},
                     {"clt", report.clt}};
}

inline void from_json(const nlohmann::json& j, CrosscheckReport& report) {
  j.at("ks").get_to(report.ks);
  j.at("ks_critical_1pct").get_to(report.ks_critical_1pct);
  j.at("pass").get_to(report.pass);
  j.at("mean_gap_se").get_to(report.mean_gap_se);
  j.at("variance_gap_se").get_to(report.variance_gap_se);
  j.at("draws").get_to(report.draws);
  j.at("exact_mean").get_to(report.exact_mean);
  j.at("exact_variance").get_to(report.exact_variance);
  j.at("clt").get_to(report.clt);
}

// Write the simulated p-values as CSV with one row per surviving
// replication and regime, using shortest round-trip number formatting.
inline void write_pvalues_csv(const std::string& path, const CalibrationReport& report) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << "replication,regime,pvalue\n";
  std::vector<std::uint64_t> included;
  included.reserve(report.stream_indices.size());
  for (std::uint64_t index : report.stream_indices) {
    bool excluded = false;
    for (std::uint64_t bad : report.excluded_indices) {
      if (bad == index) {
        excluded = true;
        break;
      }
    }
    if (!excluded) included.push_back(index);
  }
  for (const RegimeResult& result : report.regimes) {
    if (result.pvalues.size() != included.size()) {
      throw ConfigError("report is inconsistent: " + std::to_string(result.pvalues.size()) +
                        " p-values for " + std::to_string(included.size()) +
                        " surviving replications");
    }
    for (std::size_t k = 0; k < included.size(); ++k) {
      out << included[k] << ',' << to_string(result.regime) << ','
          << detail::shortest_double(result.pvalues[k]) << '\n';
    }
  }
  if (!out) throw ConfigError("failed while writing '" + path + "'");
}

}  // namespace lrt
