// gasdetect: simulate, replay, run experiments, compare series, rebuild reports.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 data error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"

#include "gasdetect/config.hpp"
#include "gasdetect/csv.hpp"
#include "gasdetect/detector.hpp"
#include "gasdetect/dtw.hpp"
#include "gasdetect/error.hpp"
#include "gasdetect/harness.hpp"
#include "gasdetect/presets.hpp"
#include "gasdetect/simkit.hpp"

namespace fs = std::filesystem;
using namespace gasdetect;

namespace {

constexpr int kUsage = 1;
constexpr int kDataError = 2;

struct Options {
  std::string scenario_file;
  std::string preset_name;
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::size_t repeats = 20;
  double timeout_s = 120.0;
  std::string out;
  std::string input;
  std::string other;
  bool prefiltered = false;
  bool suite = false;
  int p = 1;
};

AppConfig app_config(const Options& o) {
  return o.config_file.empty() ? AppConfig{} : load_app_config(o.config_file);
}

Scenario pick_scenario(const Options& o) {
  if (!o.scenario_file.empty() && !o.preset_name.empty()) {
    throw ConfigError("give either --scenario or --preset, not both");
  }
  if (!o.scenario_file.empty()) return load_scenario(o.scenario_file);
  if (!o.preset_name.empty()) return preset(o.preset_name);
  throw ConfigError("a scenario is required (--scenario <file> or --preset <name>)");
}

std::ofstream open_file(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
  return out;
}

int cmd_simulate(const Options& o) {
  Scenario s = pick_scenario(o);
  if (o.seed) s.seed = *o.seed;
  const auto raw = run_scenario(s);
  if (o.out.empty()) {
    write_samples_csv(std::cout, raw);
  } else {
    fs::create_directories(o.out);
    auto out = open_file(fs::path(o.out) / "raw.csv");
    write_samples_csv(out, raw);
    auto scenario = open_file(fs::path(o.out) / "scenario.json");
    scenario << to_json(s).dump(2) << "\n";
    std::cerr << fmt::format("{} samples -> {}\n", raw.size(), (fs::path(o.out) / "raw.csv").string());
  }
  return 0;
}

int cmd_detect(const Options& o) {
  AppConfig cfg = app_config(o);
  if (o.prefiltered) cfg.detector.filter_window = 1;
  const auto raw = read_samples_csv(o.input);
  const auto log = run_pipeline(raw, cfg.topology, cfg.detector);
  if (o.out.empty()) {
    write_alarm_log(std::cout, log);
  } else {
    fs::create_directories(o.out);
    auto out = open_file(fs::path(o.out) / "alarms.csv");
    write_alarm_log(out, log);
  }
  return 0;
}

int cmd_experiment(const Options& o) {
  const AppConfig cfg = app_config(o);
  std::vector<Scenario> scenarios;
  if (o.suite) {
    if (!o.scenario_file.empty() || !o.preset_name.empty()) {
      throw ConfigError("--suite cannot be combined with --scenario or --preset");
    }
    for (const auto& name : standard_suite()) scenarios.push_back(preset(name));
  } else {
    scenarios.push_back(pick_scenario(o));
  }

  std::vector<ExperimentResult> results;
  for (const auto& s : scenarios) {
    ExperimentSpec spec;
    spec.scenario = s;
    spec.repeats = o.repeats;
    spec.timeout_s = o.timeout_s;
    spec.base_seed = o.seed.value_or(1);
    spec.detector = cfg.detector;
    results.push_back(run_experiment(spec));
  }
  const fs::path out = o.out.empty() ? fs::path("results") : fs::path(o.out);
  emit_reports(results, out);
  std::cout << summary_table(results);
  std::cerr << fmt::format("reports written to {}\n", out.string());
  return 0;
}

int cmd_dtw(const Options& o) {
  const auto a = read_column_csv(o.input);
  const auto b = read_column_csv(o.other);
  if (a.empty() || b.empty()) throw DataError("both series must be non-empty");
  const auto r = dtw_distance(a, b, o.p);
  std::cout << fmt::format("{}\n", r.distance);
  return 0;
}

int cmd_report(const Options& o) {
  const fs::path dir = o.out.empty() ? fs::path("results") : fs::path(o.out);
  const auto results = read_trials_csv(dir / "trials.csv");
  if (results.empty()) throw DataError(fmt::format("{} has no trials", (dir / "trials.csv").string()));
  write_summary_reports(results, dir);
  std::cout << summary_table(results);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gas-diffusion anomaly detection: simulator, sink pipeline and experiments"};
  app.require_subcommand(1);
  Options o;

  auto add_scenario = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", o.scenario_file, "Scenario JSON file")->check(CLI::ExistingFile);
    cmd->add_option("--preset", o.preset_name, "Built-in scenario name (see `presets`)");
  };
  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", o.config_file, "Topology/detector JSON file")
        ->check(CLI::ExistingFile);
  };

  auto* simulate = app.add_subcommand("simulate", "Run a scenario and write the raw wire log");
  add_scenario(simulate);
  simulate->add_option("--seed", o.seed, "Override the scenario seed");
  simulate->add_option("--out", o.out, "Output directory (default: stdout)");

  auto* detect = app.add_subcommand("detect", "Replay a node_id,t,value log through the sink");
  detect->add_option("input", o.input, "Raw wire log CSV")->required()->check(CLI::ExistingFile);
  add_config(detect);
  detect->add_flag("--prefiltered", o.prefiltered, "Input is already filtered; skip node filtering");
  detect->add_option("--out", o.out, "Output directory for alarms.csv (default: stdout)");

  auto* experiment = app.add_subcommand("experiment", "Run seeded trials and write reports");
  add_scenario(experiment);
  experiment->add_flag("--suite", o.suite, "Run every built-in scenario");
  add_config(experiment);
  experiment->add_option("--seed", o.seed, "Base seed; trial i uses seed + i (default 1)");
  experiment->add_option("--repeats", o.repeats, "Trials per scenario")
      ->check(CLI::PositiveNumber);
  experiment->add_option("--timeout-s", o.timeout_s, "Alarm timeout after source activation")
      ->check(CLI::PositiveNumber);
  experiment->add_option("--out", o.out, "Report directory (default: results)");

  auto* dtw = app.add_subcommand("dtw", "DTW distance between two single-column CSV series");
  dtw->add_option("a", o.input, "First series")->required()->check(CLI::ExistingFile);
  dtw->add_option("b", o.other, "Second series")->required()->check(CLI::ExistingFile);
  dtw->add_option("--p", o.p, "Norm order of the local cost")->check(CLI::PositiveNumber);

  auto* report = app.add_subcommand("report", "Rebuild summary.csv, cdf.csv and report.txt");
  report->add_option("--out", o.out, "Report directory holding trials.csv (default: results)");

  auto* presets = app.add_subcommand("presets", "List built-in scenario names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*simulate) return cmd_simulate(o);
    if (*detect) return cmd_detect(o);
    if (*experiment) return cmd_experiment(o);
    if (*dtw) return cmd_dtw(o);
    if (*report) return cmd_report(o);
    if (*presets) {
      for (const auto& n : preset_names()) std::cout << n << "\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsage;
}
