#include "gasdetect/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <map>
#include <sstream>
#include <string_view>

#include <fmt/format.h>

#include "gasdetect/error.hpp"
#include "gasdetect/nodefilter.hpp"

namespace gasdetect {

namespace {

constexpr std::string_view kReportNote =
    "Interference and null trials are scored correct iff no DiffusionSource verdict is\n"
    "emitted during the trial. All scenarios are simulated: the figures below are\n"
    "calibration targets for the detector, not a reproduction of a physical experiment.\n";

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw DataError(fmt::format("failed writing {}", path.string()));
}

void prepare_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw DataError(fmt::format("cannot create output directory {}", dir.string()));
  }
}

std::string fraction(double x) { return fmt::format("{:.4f}", x); }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  for (;;) {
    const auto comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(pos));
      return out;
    }
    out.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Pipeline

std::vector<Judgment> run_pipeline(std::span<const Sample> raw, const Topology& topology,
                                   const DetectorConfig& cfg) {
  cfg.validate();
  std::map<NodeId, double> last_t;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto& s = raw[i];
    if (!topology.contains(s.node_id)) {
      throw DataError(fmt::format("record {}: unknown node {}", i + 1, s.node_id));
    }
    auto [it, fresh] = last_t.try_emplace(s.node_id, s.t);
    if (!fresh) {
      if (!(s.t > it->second)) {
        throw DataError(fmt::format("record {}: node {} time {} does not advance past {}", i + 1,
                                    s.node_id, s.t, it->second));
      }
      it->second = s.t;
    }
  }

  // Node side.
  auto wire = filter_log(raw, cfg.filter_window);
  std::stable_sort(wire.begin(), wire.end(),
                   [](const Sample& a, const Sample& b) { return a.t < b.t; });

  // Sink side.
  Sink sink(topology, cfg);
  std::vector<Judgment> log;
  std::vector<Segment> pending;
  for (std::size_t i = 0; i < wire.size();) {
    const double t = wire[i].t;
    pending.clear();
    for (; i < wire.size() && wire[i].t == t; ++i) {
      for (auto& seg : sink.ingest(wire[i])) {
        if (seg.anomalous) pending.push_back(std::move(seg));
      }
    }
    std::stable_sort(pending.begin(), pending.end(),
                     [](const Segment& a, const Segment& b) { return a.node_id < b.node_id; });
    for (const auto& seg : pending) log.push_back(sink.judge(seg));
  }
  return log;
}

std::vector<Judgment> run_pipeline(const Scenario& scenario, const DetectorConfig& cfg) {
  const auto raw = run_scenario(scenario);
  return run_pipeline(raw, scenario.topology, cfg);
}

// ---------------------------------------------------------------------------
// Experiments

std::string_view to_string(Category category) {
  switch (category) {
    case Category::detection: return "detection";
    case Category::interference: return "interference";
    case Category::null: return "null";
  }
  return "?";
}

Category category_from_string(std::string_view name) {
  for (auto c : {Category::detection, Category::interference, Category::null}) {
    if (to_string(c) == name) return c;
  }
  throw DataError(fmt::format("unknown category '{}'", name));
}

void ExperimentSpec::validate() const {
  scenario.validate();
  detector.validate();
  if (seeds.empty() && repeats == 0) throw ConfigError("repeats must be >= 1");
  if (seeds.empty() && seed_stride == 0) throw ConfigError("seed stride must be nonzero");
  if (!(timeout_s > 0.0) || !std::isfinite(timeout_s)) {
    throw ConfigError("timeout_s must be a positive number");
  }
  auto s = trial_seeds();
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
    throw ConfigError("trial seeds must be distinct");
  }
}

std::vector<std::uint64_t> ExperimentSpec::trial_seeds() const {
  if (!seeds.empty()) return seeds;
  std::vector<std::uint64_t> out;
  out.reserve(repeats);
  for (std::size_t i = 0; i < repeats; ++i) out.push_back(base_seed + seed_stride * i);
  return out;
}

std::optional<double> activation_time(const Scenario& scenario) {
  std::optional<double> t;
  for (const auto& s : scenario.sources) {
    if (!t || s.start_t < *t) t = s.start_t;
  }
  return t;
}

TrialOutcome score_trial(std::size_t trial, std::uint64_t seed, std::vector<Judgment> judgments,
                         std::optional<double> activation, double timeout_s) {
  TrialOutcome out;
  out.trial = trial;
  out.seed = seed;
  for (const auto& j : judgments) {
    if (!j.is_alarm()) continue;
    if (!activation || j.t < *activation) {
      out.false_alarm = true;
    } else if (!out.detected && j.t - *activation <= timeout_s) {
      out.detected = true;
      out.alarm_delay_s = j.t - *activation;
    }
  }
  out.judgments = std::move(judgments);
  return out;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const auto seeds = spec.trial_seeds();
  const auto activation = activation_time(spec.scenario);

  std::vector<std::future<TrialOutcome>> trials;
  trials.reserve(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    trials.push_back(std::async(std::launch::async, [&spec, &seeds, activation, i] {
      Scenario s = spec.scenario;
      s.seed = seeds[i];
      return score_trial(i, seeds[i], run_pipeline(s, spec.detector), activation, spec.timeout_s);
    }));
  }

  ExperimentResult result;
  result.scenario = spec.scenario.name;
  result.category = activation                          ? Category::detection
                    : spec.scenario.interference.empty() ? Category::null
                                                         : Category::interference;
  result.timeout_s = spec.timeout_s;
  for (auto& f : trials) result.outcomes.push_back(f.get());
  return result;
}

ExperimentSummary summarize(const ExperimentResult& result) {
  ExperimentSummary s;
  s.trials = result.outcomes.size();
  std::vector<double> delays;
  for (const auto& o : result.outcomes) {
    if (o.detected) delays.push_back(*o.alarm_delay_s);
    if (o.false_alarm) ++s.false_alarms;
  }
  s.detected = delays.size();
  if (s.trials == 0) return s;
  s.detection_ratio = static_cast<double>(s.detected) / static_cast<double>(s.trials);

  std::sort(delays.begin(), delays.end());
  for (std::size_t i = 0; i < delays.size(); ++i) {
    if (i + 1 < delays.size() && delays[i + 1] == delays[i]) continue;
    const double f = static_cast<double>(i + 1) / static_cast<double>(s.trials);
    s.cdf.emplace_back(delays[i], f);
    if (!s.median_delay_s && f >= 0.5) s.median_delay_s = delays[i];
  }
  return s;
}

std::string format_rate(std::size_t count, std::size_t total) {
  if (total == 0) return "0%";
  std::string text = fmt::format("{:.1f}", 100.0 * static_cast<double>(count) /
                                               static_cast<double>(total));
  if (text.ends_with(".0")) text.resize(text.size() - 2);
  return text + "%";
}

// ---------------------------------------------------------------------------
// Reports

std::string summary_table(std::span<const ExperimentResult> results) {
  std::string out = fmt::format("{:<34} {:>6} {:>8} {:>7} {:>10} {:>7} {:>6} {:>7}\n", "scenario",
                                "trials", "detected", "ratio", "median_s", "correct", "false",
                                "rate");
  std::size_t total_trials = 0;
  std::size_t total_false = 0;
  for (const auto& r : results) {
    const auto s = summarize(r);
    const std::size_t correct = r.has_source() ? s.detected : s.trials - s.false_alarms;
    const std::string median =
        !r.has_source() ? "-" : s.median_delay_s ? fmt::format("{}", *s.median_delay_s) : "timeout";
    const std::string detected = r.has_source() ? fmt::format("{}", s.detected) : "-";
    const std::string ratio = r.has_source() ? fmt::format("{:.2f}", s.detection_ratio) : "-";
    out += fmt::format("{:<34} {:>6} {:>8} {:>7} {:>10} {:>7} {:>6} {:>7}\n", r.scenario, s.trials,
                       detected, ratio, median, correct, s.false_alarms,
                       format_rate(s.false_alarms, s.trials));
    if (r.category == Category::interference) {
      total_trials += s.trials;
      total_false += s.false_alarms;
    }
  }
  if (total_trials > 0) {
    out += fmt::format("{:<34} {:>6} {:>8} {:>7} {:>10} {:>7} {:>6} {:>7}\n", "total (interference)",
                       total_trials, "-", "-", "-", total_trials - total_false, total_false,
                       format_rate(total_false, total_trials));
  }
  return out;
}

void write_summary_reports(std::span<const ExperimentResult> results,
                           const std::filesystem::path& out_dir) {
  prepare_dir(out_dir);

  const auto cdf_path = out_dir / "cdf.csv";
  auto cdf = open_output(cdf_path);
  cdf << "scenario,delay_s,cumulative_fraction\n";
  for (const auto& r : results) {
    if (!r.has_source()) continue;
    const auto s = summarize(r);
    for (const auto& [d, f] : s.cdf) cdf << fmt::format("{},{},{}\n", r.scenario, d, fraction(f));
    // Closing point at the timeout so the last row always equals the detection ratio.
    if (s.cdf.empty() || s.cdf.back().first < r.timeout_s) {
      cdf << fmt::format("{},{},{}\n", r.scenario, r.timeout_s, fraction(s.detection_ratio));
    }
  }
  finish(cdf, cdf_path);

  const auto summary_path = out_dir / "summary.csv";
  auto summary = open_output(summary_path);
  summary << "scenario,category,trials,detected,detection_ratio,median_delay_s,"
             "correct_alarms,false_alarms,false_alarm_rate\n";
  std::size_t total_trials = 0;
  std::size_t total_false = 0;
  for (const auto& r : results) {
    const auto s = summarize(r);
    const std::size_t correct = r.has_source() ? s.detected : s.trials - s.false_alarms;
    std::string detected;
    std::string ratio;
    std::string median;
    if (r.has_source()) {
      detected = fmt::format("{}", s.detected);
      ratio = fraction(s.detection_ratio);
      if (s.median_delay_s) median = fmt::format("{}", *s.median_delay_s);
    } else if (r.category == Category::interference) {
      total_trials += s.trials;
      total_false += s.false_alarms;
    }
    summary << fmt::format("{},{},{},{},{},{},{},{},{}\n", r.scenario, to_string(r.category), s.trials,
                           detected, ratio, median, correct, s.false_alarms,
                           format_rate(s.false_alarms, s.trials));
  }
  if (total_trials > 0) {
    summary << fmt::format("total,interference,{},,,,{},{},{}\n", total_trials,
                           total_trials - total_false, total_false,
                           format_rate(total_false, total_trials));
  }
  finish(summary, summary_path);

  const auto report_path = out_dir / "report.txt";
  auto report = open_output(report_path);
  report << kReportNote << "\n" << summary_table(results);
  finish(report, report_path);
}

void emit_reports(std::span<const ExperimentResult> results, const std::filesystem::path& out_dir) {
  if (results.empty()) throw DataError("no experiment results to report");
  write_summary_reports(results, out_dir);

  const auto alarms_path = out_dir / "alarms.csv";
  auto alarms = open_output(alarms_path);
  alarms << "scenario,trial,seed,t,kind,node_id,trigger,min_global_dtw,min_local_dtw\n";
  for (const auto& r : results) {
    for (const auto& o : r.outcomes) {
      std::ostringstream rows;
      write_alarm_log(rows, o.judgments, false);
      std::istringstream lines(rows.str());
      std::string line;
      while (std::getline(lines, line)) {
        alarms << fmt::format("{},{},{},{}\n", r.scenario, o.trial, o.seed, line);
      }
    }
  }
  finish(alarms, alarms_path);

  const auto trials_path = out_dir / "trials.csv";
  auto trials = open_output(trials_path);
  trials << "scenario,category,timeout_s,trial,seed,detected,alarm_delay_s,false_alarm,"
            "judgments,alarms\n";
  for (const auto& r : results) {
    for (const auto& o : r.outcomes) {
      const auto n_alarms = std::count_if(o.judgments.begin(), o.judgments.end(),
                                          [](const Judgment& j) { return j.is_alarm(); });
      trials << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.scenario, to_string(r.category),
                            r.timeout_s, o.trial, o.seed, o.detected ? 1 : 0,
                            o.alarm_delay_s ? fmt::format("{}", *o.alarm_delay_s) : "",
                            o.false_alarm ? 1 : 0, o.judgments.size(), n_alarms);
    }
  }
  finish(trials, trials_path);
}

std::vector<ExperimentResult> read_trials_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  std::vector<ExperimentResult> results;
  std::string line;
  std::size_t line_no = 0;
  auto bad = [&](std::string_view why) {
    return DataError(fmt::format("{}:{}: {}", path.string(), line_no, why));
  };
  auto number = [&](std::string_view s, std::string_view what) {
    try {
      std::size_t used = 0;
      const std::string text(s);
      const double v = std::stod(text, &used);
      if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw bad(fmt::format("bad {}", what));
    }
  };
  auto flag = [&](std::string_view s, std::string_view what) {
    if (s == "0") return false;
    if (s == "1") return true;
    throw bad(fmt::format("bad {}", what));
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.starts_with("scenario,")) continue;
    const auto f = split_fields(line);
    if (f.size() != 10) throw bad("expected 10 fields");
    const std::string name(f[0]);
    Category cat;
    try {
      cat = category_from_string(f[1]);
    } catch (const DataError& e) {
      throw bad(e.what());
    }
    const double timeout = number(f[2], "timeout_s");
    if (results.empty() || results.back().scenario != name) {
      results.push_back({name, cat, timeout, {}});
    }
    TrialOutcome o;
    const double trial = number(f[3], "trial");
    const double seed = number(f[4], "seed");
    if (trial < 0 || seed < 0) throw bad("negative trial or seed");
    o.trial = static_cast<std::size_t>(trial);
    o.seed = std::stoull(std::string(f[4]));
    o.detected = flag(f[5], "detected");
    if (!f[6].empty()) o.alarm_delay_s = number(f[6], "alarm_delay_s");
    if (o.detected != o.alarm_delay_s.has_value()) throw bad("alarm_delay_s set iff detected");
    o.false_alarm = flag(f[7], "false_alarm");
    results.back().outcomes.push_back(std::move(o));
  }
  return results;
}

}  // namespace gasdetect
