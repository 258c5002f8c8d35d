#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lrt/lrt.hpp"

namespace {

enum class LogLevel { error = 0, info = 1, debug = 2 };

LogLevel g_log_level = LogLevel::error;

LogLevel log_level_from_env() {
  const char* raw = std::getenv("LRT_LOG");
  if (raw == nullptr) return LogLevel::error;
  const std::string value(raw);
  if (value == "debug") return LogLevel::debug;
  if (value == "info") return LogLevel::info;
  if (value == "error") return LogLevel::error;
  std::cerr << "warning: unknown LRT_LOG value '" << value << "'; using error\n";
  return LogLevel::error;
}

void log_info(const std::string& message) {
  if (g_log_level >= LogLevel::info) std::cerr << "[info] " << message << '\n';
}

void log_debug(const std::string& message) {
  if (g_log_level >= LogLevel::debug) std::cerr << "[debug] " << message << '\n';
}

int parse_positive_int(const std::string& token, const std::string& flag) {
  int value = 0;
  const char* last = token.data() + token.size();
  const auto result = std::from_chars(token.data(), last, value);
  if (result.ec != std::errc() || result.ptr != last || value < 1) {
    throw lrt::ConfigError(flag + ": '" + token + "' is not a positive integer");
  }
  return value;
}

// Comma-separated sizes; a token CxS expands to C copies of size S, so
// "40x18" means forty blocks of size eighteen and "2,3" means sizes 2 and 3.
std::vector<int> parse_sizes(const std::string& text, const std::string& flag) {
  std::vector<int> sizes;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    const std::string token = text.substr(start, comma - start);
    if (token.empty()) throw lrt::ConfigError(flag + ": empty size in '" + text + "'");
    const std::size_t cross = token.find('x');
    if (cross == std::string::npos) {
      sizes.push_back(parse_positive_int(token, flag));
    } else {
      const int count = parse_positive_int(token.substr(0, cross), flag);
      const int size = parse_positive_int(token.substr(cross + 1), flag);
      sizes.insert(sizes.end(), static_cast<std::size_t>(count), size);
    }
    start = comma + 1;
  }
  return sizes;
}

std::vector<lrt::Regime> parse_regimes(const std::string& text) {
  if (text == "both") return {lrt::Regime::growing_q, lrt::Regime::fixed_q};
  return {lrt::regime_from_string(text)};
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw lrt::ConfigError("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
  if (!out) throw lrt::ConfigError("failed while writing '" + path.string() + "'");
}

struct TestArgs {
  std::string kind;
  std::string data;
  std::string blocks;
  std::string designs;
  int q1 = 0;
  std::string beta01;
  double alpha = 0.05;
  std::string regime = "growing-q";
  std::string out;
};

struct SimulateArgs {
  std::string kind;
  std::string preset;
  std::string scale;
  int n = 0;
  std::string blocks;
  int p = 0;
  int q1 = 0;
  int q2 = 0;
  std::string groups;
  int reps = -1;
  std::uint64_t seed = 0;
  std::uint64_t offset = 0;
  double alpha = 0.05;
  std::string regime;
  int threads = 0;
  std::string out;
};

struct OracleArgs {
  std::string kind;
  int n = 0;
  std::string blocks;
  int p = 0;
  int q1 = 0;
  int q2 = 0;
  int draws = 5000;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out;
};

int run_test_command(const TestArgs& args) {
  const lrt::TestKind kind = lrt::test_kind_from_string(args.kind);
  const std::vector<lrt::Regime> regimes = parse_regimes(args.regime);
  std::vector<lrt::TestReport> reports;

  if (kind != lrt::TestKind::independence && !args.blocks.empty()) {
    throw lrt::ConfigError("--blocks applies only to the independence test");
  }
  if (kind != lrt::TestKind::regression &&
      (!args.designs.empty() || args.q1 != 0 || !args.beta01.empty())) {
    throw lrt::ConfigError("--designs, --q1 and --beta01 apply only to the regression test");
  }

  switch (kind) {
    case lrt::TestKind::independence: {
      if (args.blocks.empty()) {
        throw lrt::ConfigError("test independence requires --blocks");
      }
      const lrt::Matrix x = lrt::read_matrix_csv(args.data);
      const lrt::BlockPartition blocks{parse_sizes(args.blocks, "--blocks")};
      log_debug("independence data: " + std::to_string(x.rows()) + " rows, " +
                std::to_string(x.cols()) + " columns");
      for (lrt::Regime regime : regimes) {
        reports.push_back(lrt::run_independence_test(x, blocks, {regime, args.alpha}));
      }
      break;
    }
    case lrt::TestKind::regression: {
      if (args.designs.empty() || args.q1 < 1) {
        throw lrt::ConfigError("test regression requires --designs and --q1");
      }
      lrt::RegressionData d;
      d.responses = lrt::read_matrix_csv(args.data);
      d.designs = lrt::read_matrix_csv(args.designs);
      d.q1 = args.q1;
      const lrt::Matrix beta01 =
          args.beta01.empty()
              ? lrt::Matrix::Zero(d.responses.cols(), args.q1).eval()
              : lrt::read_matrix_csv(args.beta01);
      for (lrt::Regime regime : regimes) {
        reports.push_back(lrt::run_regression_test(d, beta01, {regime, args.alpha}));
      }
      break;
    }
    case lrt::TestKind::equal_covariance:
    case lrt::TestKind::equal_distribution: {
      const lrt::GroupedSample sample = lrt::read_grouped_csv(args.data);
      log_debug("grouped data: " + std::to_string(sample.group_count()) + " groups, p = " +
                std::to_string(sample.dim()));
      for (lrt::Regime regime : regimes) {
        reports.push_back(kind == lrt::TestKind::equal_covariance
                              ? lrt::run_equal_cov_test(sample, {regime, args.alpha})
                              : lrt::run_equal_dist_test(sample, {regime, args.alpha}));
      }
      break;
    }
  }

  nlohmann::json output;
  if (reports.size() == 1) {
    output = reports.front();
  } else {
    output = nlohmann::json{{"reports", reports}};
  }
  std::cout << output.dump(2) << '\n';
  if (!args.out.empty()) {
    const std::filesystem::path path(args.out);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    write_json_file(path, output);
    log_info("report written to " + args.out);
  }
  return 0;
}

// The figure-reproduction presets. Desk scale keeps runs to a few minutes;
// paper scale reproduces the full published configurations.
lrt::ExperimentConfig preset_config(const std::string& name, const std::string& scale) {
  if (scale != "desk" && scale != "paper") {
    throw lrt::ConfigError("unknown scale '" + scale + "'; expected desk or paper");
  }
  const bool desk = scale == "desk";
  lrt::ExperimentConfig cfg;
  cfg.replications = desk ? 2000 : 20000;
  if (name == "fig1") {
    cfg.kind = lrt::TestKind::independence;
    cfg.n = desk ? 200 : 800;
    cfg.blocks.assign(desk ? 10 : 40, desk ? 6 : 18);
    return cfg;
  }
  cfg.kind = lrt::TestKind::equal_distribution;
  if (name == "fig2") {
    cfg.p = 40;
    cfg.group_sizes.assign(300, 80);
  } else if (name == "fig3") {
    cfg.p = 100;
    cfg.group_sizes.assign(50, 200);
  } else if (name == "fig4a") {
    cfg.p = 40;
    cfg.group_sizes.assign(100, 80);
  } else if (name == "fig4b") {
    cfg.p = 40;
    cfg.group_sizes.assign(200, 80);
  } else if (name == "fig4c") {
    cfg.p = 40;
    cfg.group_sizes.assign(300, 80);
  } else {
    throw lrt::ConfigError("unknown preset '" + name +
                           "'; expected fig1, fig2, fig3, fig4a, fig4b or fig4c");
  }
  return cfg;
}

int run_simulate_command(const SimulateArgs& args, bool structural_flags_used) {
  lrt::ExperimentConfig cfg;
  if (!args.preset.empty()) {
    if (!args.kind.empty() || structural_flags_used) {
      throw lrt::ConfigError(
          "--preset conflicts with an explicit test configuration; drop the preset or the "
          "structural flags");
    }
    cfg = preset_config(args.preset, args.scale.empty() ? "desk" : args.scale);
  } else {
    if (!args.scale.empty()) {
      throw lrt::ConfigError("--scale applies only together with --preset");
    }
    if (args.kind.empty()) {
      throw lrt::ConfigError("simulate needs a test kind or a --preset");
    }
    cfg.kind = lrt::test_kind_from_string(args.kind);
    switch (cfg.kind) {
      case lrt::TestKind::independence:
        if (args.n < 1 || args.blocks.empty()) {
          throw lrt::ConfigError("simulate independence requires --n and --blocks");
        }
        cfg.n = args.n;
        cfg.blocks = parse_sizes(args.blocks, "--blocks");
        break;
      case lrt::TestKind::regression:
        if (args.n < 1 || args.p < 1 || args.q1 < 1 || args.q2 < 1) {
          throw lrt::ConfigError("simulate regression requires --n, --p, --q1 and --q2");
        }
        cfg.n = args.n;
        cfg.p = args.p;
        cfg.q1 = args.q1;
        cfg.q2 = args.q2;
        break;
      case lrt::TestKind::equal_covariance:
      case lrt::TestKind::equal_distribution:
        if (args.p < 1 || args.groups.empty()) {
          throw lrt::ConfigError("simulate " + args.kind + " requires --p and --groups");
        }
        cfg.p = args.p;
        cfg.group_sizes = parse_sizes(args.groups, "--groups");
        break;
    }
    if (args.reps < 0) {
      throw lrt::ConfigError("simulate without --preset requires --reps");
    }
  }
  if (args.reps >= 0) cfg.replications = args.reps;
  cfg.seed = args.seed;
  cfg.replication_offset = args.offset;
  cfg.alpha = args.alpha;
  cfg.threads = args.threads;
  if (args.regime.empty()) {
    cfg.regimes = cfg.kind == lrt::TestKind::regression
                      ? std::vector<lrt::Regime>{lrt::Regime::growing_q}
                      : std::vector<lrt::Regime>{lrt::Regime::growing_q, lrt::Regime::fixed_q};
  } else {
    cfg.regimes = parse_regimes(args.regime);
  }

  log_info("simulating " + std::string(lrt::to_string(cfg.kind)) + " with " +
           std::to_string(cfg.replications) + " replications");
  const lrt::CalibrationReport report = lrt::run_experiment(cfg);

  const std::filesystem::path out_dir(args.out);
  std::filesystem::create_directories(out_dir);
  write_json_file(out_dir / "report.json", nlohmann::json(report));
  lrt::write_pvalues_csv((out_dir / "pvalues.csv").string(), report);
  log_info("report.json and pvalues.csv written to " + out_dir.string());

  for (const lrt::RegimeResult& result : report.regimes) {
    const nlohmann::json summary{{"regime", lrt::to_string(result.regime)},
                                 {"rejection_rate", result.rejection_rate},
                                 {"ks", result.ks},
                                 {"excluded", result.excluded}};
    std::cout << summary.dump() << '\n';
  }
  return 0;
}

int run_oracle_command(const OracleArgs& args) {
  lrt::ExperimentConfig cfg;
  cfg.kind = lrt::test_kind_from_string(args.kind);
  cfg.n = args.n;
  if (!args.blocks.empty()) cfg.blocks = parse_sizes(args.blocks, "--blocks");
  cfg.p = args.p;
  cfg.q1 = args.q1;
  cfg.q2 = args.q2;
  cfg.replications = 1;
  cfg.seed = args.seed;
  cfg.threads = args.threads;
  if (cfg.kind == lrt::TestKind::regression) cfg.regimes = {lrt::Regime::growing_q};

  const lrt::CrosscheckReport report = lrt::oracle_crosscheck(cfg, args.draws);
  const nlohmann::json output(report);
  std::cout << output.dump(2) << '\n';
  if (!args.out.empty()) {
    const std::filesystem::path path(args.out);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    write_json_file(path, output);
  }
  log_info(std::string("oracle crosscheck ") + (report.pass ? "passed" : "failed") +
           " at KS = " + std::to_string(report.ks));
  return report.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  g_log_level = log_level_from_env();

  CLI::App app{"Likelihood-ratio tests for high-dimensional Gaussian data"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from an INI file");

  TestArgs test_args;
  CLI::App* test_cmd = app.add_subcommand("test", "Run one test on a data file");
  test_cmd->add_option("kind", test_args.kind,
                       "Test kind: independence, regression, equal-cov or equal-dist")
      ->required();
  test_cmd->add_option("--data", test_args.data, "Data CSV (grouped layout for grouped tests)")
      ->required();
  test_cmd->add_option("--blocks", test_args.blocks,
                       "Block sizes, e.g. 2,3 or 40x18 (independence only)");
  test_cmd->add_option("--designs", test_args.designs, "Design matrix CSV (regression only)");
  test_cmd->add_option("--q1", test_args.q1,
                       "Number of tested design columns, the first q1 (regression only)");
  test_cmd->add_option("--beta01", test_args.beta01,
                       "Hypothesized p x q1 coefficient CSV; defaults to zero (regression only)");
  test_cmd->add_option("--alpha", test_args.alpha, "Test level in (0, 1)")
      ->capture_default_str();
  test_cmd->add_option("--regime", test_args.regime, "growing-q, fixed-q or both")
      ->capture_default_str();
  test_cmd->add_option("--out", test_args.out, "Also write the JSON report to this file");

  SimulateArgs sim_args;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Calibrate a test under its null");
  sim_cmd->add_option("kind", sim_args.kind, "Test kind (omit when using --preset)");
  sim_cmd->add_option("--preset", sim_args.preset,
                      "Figure preset: fig1, fig2, fig3, fig4a, fig4b or fig4c");
  sim_cmd->add_option("--scale", sim_args.scale, "Preset scale: desk (default) or paper");
  CLI::Option* sim_n = sim_cmd->add_option("--n", sim_args.n, "Sample size");
  CLI::Option* sim_blocks =
      sim_cmd->add_option("--blocks", sim_args.blocks, "Block sizes, e.g. 2,3 or 40x18");
  CLI::Option* sim_p = sim_cmd->add_option("--p", sim_args.p, "Dimension");
  CLI::Option* sim_q1 = sim_cmd->add_option("--q1", sim_args.q1, "Tested design columns");
  CLI::Option* sim_q2 = sim_cmd->add_option("--q2", sim_args.q2, "Nuisance design columns");
  CLI::Option* sim_groups =
      sim_cmd->add_option("--groups", sim_args.groups, "Group sizes, e.g. 300x80 or 5,7,9");
  sim_cmd->add_option("--reps", sim_args.reps, "Replication count (preset default: 2000 desk, 20000 paper)");
  sim_cmd->add_option("--seed", sim_args.seed, "Master seed; all randomness derives from it")
      ->required();
  sim_cmd->add_option("--offset", sim_args.offset, "First replication stream index")
      ->capture_default_str();
  sim_cmd->add_option("--alpha", sim_args.alpha, "Test level in (0, 1)")->capture_default_str();
  sim_cmd->add_option("--regime", sim_args.regime,
                      "growing-q, fixed-q or both (default: both; growing-q for regression)");
  sim_cmd->add_option("--threads", sim_args.threads, "Worker threads; 0 means all available")
      ->capture_default_str();
  sim_cmd->add_option("--out", sim_args.out, "Output directory for report.json and pvalues.csv")
      ->required();

  OracleArgs oracle_args;
  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "Crosscheck a statistic against its exact Beta-product law");
  oracle_cmd->add_option("kind", oracle_args.kind, "independence or regression")->required();
  oracle_cmd->add_option("--n", oracle_args.n, "Sample size")->required();
  oracle_cmd->add_option("--blocks", oracle_args.blocks, "Block sizes (independence)");
  oracle_cmd->add_option("--p", oracle_args.p, "Dimension (regression)");
  oracle_cmd->add_option("--q1", oracle_args.q1, "Tested design columns (regression)");
  oracle_cmd->add_option("--q2", oracle_args.q2, "Nuisance design columns (regression)");
  oracle_cmd->add_option("--draws", oracle_args.draws, "Draws per sample")
      ->capture_default_str();
  oracle_cmd->add_option("--seed", oracle_args.seed, "Master seed")->required();
  oracle_cmd->add_option("--threads", oracle_args.threads, "Worker threads; 0 means all available")
      ->capture_default_str();
  oracle_cmd->add_option("--out", oracle_args.out, "Also write the JSON report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (test_cmd->parsed()) return run_test_command(test_args);
    if (sim_cmd->parsed()) {
      const bool structural = sim_n->count() > 0 || sim_blocks->count() > 0 ||
                              sim_p->count() > 0 || sim_q1->count() > 0 || sim_q2->count() > 0 ||
                              sim_groups->count() > 0;
      return run_simulate_command(sim_args, structural);
    }
    if (oracle_cmd->parsed()) return run_oracle_command(oracle_args);
  } catch (const lrt::SingularMatrixError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const lrt::SingularDesignError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const lrt::RankError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const lrt::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
