#pragma once

// Node/sink pipeline, seeded experiments and report files.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gasdetect/detector.hpp"
#include "gasdetect/model.hpp"
#include "gasdetect/simkit.hpp"

namespace gasdetect {

// Filters every node's raw stream, feeds the sink tick by tick and judges each
// anomalous segment as it is reported. Within a tick segments are judged in
// node id order. Throws DataError for unknown nodes or out-of-order samples.
std::vector<Judgment> run_pipeline(std::span<const Sample> raw, const Topology& topology,
                                   const DetectorConfig& cfg);
std::vector<Judgment> run_pipeline(const Scenario& scenario, const DetectorConfig& cfg);

struct ExperimentSpec {
  Scenario scenario;
  std::size_t repeats = 20;
  double timeout_s = 120.0;
  std::uint64_t base_seed = 1;
  std::uint64_t seed_stride = 1;
  std::vector<std::uint64_t> seeds;  // when set, overrides base_seed/seed_stride
  DetectorConfig detector;

  // Throws ConfigError (repeats == 0, duplicate seeds, bad timeout, ...).
  void validate() const;
  std::vector<std::uint64_t> trial_seeds() const;
};

struct TrialOutcome {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  bool detected = false;
  std::optional<double> alarm_delay_s;  // set iff detected
  bool false_alarm = false;  // DiffusionSource before activation or with no source at all
  std::vector<Judgment> judgments;
};

// Earliest source start, or nothing for a source-free scenario.
std::optional<double> activation_time(const Scenario& scenario);

TrialOutcome score_trial(std::size_t trial, std::uint64_t seed, std::vector<Judgment> judgments,
                         std::optional<double> activation, double timeout_s);

// detection: the scenario has a source. interference / null: it does not,
// with or without interference events; any DiffusionSource is false.
enum class Category { detection, interference, null };

std::string_view to_string(Category category);
// Throws DataError for an unknown name.
Category category_from_string(std::string_view name);

struct ExperimentResult {
  std::string scenario;
  Category category = Category::detection;
  double timeout_s = 120.0;
  std::vector<TrialOutcome> outcomes;  // ordered by trial index

  bool has_source() const { return category == Category::detection; }
};

struct ExperimentSummary {
  std::size_t trials = 0;
  std::size_t detected = 0;
  std::size_t false_alarms = 0;  // trials with at least one false DiffusionSource
  double detection_ratio = 0.0;
  std::optional<double> median_delay_s;  // absent when fewer than half detected
  std::vector<std::pair<double, double>> cdf;  // (delay, cumulative fraction of all trials)
};

// Trials run concurrently; the result does not depend on scheduling.
ExperimentResult run_experiment(const ExperimentSpec& spec);

ExperimentSummary summarize(const ExperimentResult& result);

// Percentage with one decimal, a trailing ".0" dropped: 4/60 -> "6.7%", 1/20 -> "5%".
std::string format_rate(std::size_t count, std::size_t total);

// Writes cdf.csv, summary.csv, alarms.csv, trials.csv and report.txt.
// Throws DataError when the directory cannot be created or written.
void emit_reports(std::span<const ExperimentResult> results, const std::filesystem::path& out_dir);

// Rewrites cdf.csv, summary.csv and report.txt only (no judgment logs needed).
void write_summary_reports(std::span<const ExperimentResult> results,
                           const std::filesystem::path& out_dir);

// Reads trials.csv back; judgments are not stored there and come back empty.
std::vector<ExperimentResult> read_trials_csv(const std::filesystem::path& path);

// Human-readable summary table (also the body of report.txt).
std::string summary_table(std::span<const ExperimentResult> results);

}  // namespace gasdetect
