#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "gasdetect/error.hpp"
#include "gasdetect/harness.hpp"
#include "gasdetect/presets.hpp"

using namespace gasdetect;
namespace fs = std::filesystem;

namespace {

Judgment verdict(JudgmentKind kind, double t) {
  Judgment j;
  j.kind = kind;
  j.t = t;
  if (kind == JudgmentKind::diffusion_source) j.trigger = Trigger::spatial;
  return j;
}

ExperimentResult synthetic(std::size_t trials, std::size_t detected) {
  ExperimentResult r;
  r.scenario = "synthetic";
  r.timeout_s = 120;
  for (std::size_t i = 0; i < trials; ++i) {
    std::vector<Judgment> js;
    if (i < detected) js.push_back(verdict(JudgmentKind::diffusion_source, 30.0 + 5.0 + double(i % 4)));
    r.outcomes.push_back(score_trial(i, i + 1, std::move(js), 30.0, 120.0));
  }
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("gasdetect_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Pipeline, EmptyLogHasNoJudgments) {
  EXPECT_TRUE(run_pipeline(std::vector<Sample>{}, grid12_topology(), DetectorConfig{}).empty());
}

TEST(Pipeline, RejectsMalformedInput) {
  const auto topo = grid12_topology();
  const DetectorConfig cfg;
  EXPECT_THROW(run_pipeline(std::vector<Sample>{{0, 0, 1}, {0, 0, 1}}, topo, cfg), DataError);
  EXPECT_THROW(run_pipeline(std::vector<Sample>{{0, 1, 1}, {0, 0, 1}}, topo, cfg), DataError);
  EXPECT_THROW(run_pipeline(std::vector<Sample>{{40, 0, 1}}, topo, cfg), DataError);
  DetectorConfig bad;
  bad.filter_window = 0;
  EXPECT_THROW(run_pipeline(std::vector<Sample>{{0, 0, 1}}, topo, bad), ConfigError);
}

TEST(Pipeline, FirstAlarmNearPositionTwo) {
  Scenario s = detection_scenario(Barrel::open, Space::open, 2);
  const auto js = run_pipeline(s, DetectorConfig{});
  const auto it = std::find_if(js.begin(), js.end(), [](const Judgment& j) { return j.is_alarm(); });
  ASSERT_NE(it, js.end());
  const std::string label = s.topology.name(it->node_id);
  EXPECT_TRUE(label == "C0" || label == "D0" || label == "C1" || label == "D1") << label;
  EXPECT_GE(it->t, kSourceStart);
}

TEST(Scoring, DetectionAndFalseAlarms) {
  std::vector<Judgment> js{verdict(JudgmentKind::watch, 20), verdict(JudgmentKind::diffusion_source, 25),
                           verdict(JudgmentKind::diffusion_source, 42),
                           verdict(JudgmentKind::diffusion_source, 50)};
  auto o = score_trial(0, 7, js, 30.0, 120.0);
  EXPECT_TRUE(o.detected);
  EXPECT_TRUE(o.false_alarm);
  EXPECT_DOUBLE_EQ(*o.alarm_delay_s, 12.0);

  o = score_trial(0, 7, js, 30.0, 10.0);
  EXPECT_FALSE(o.detected);
  EXPECT_FALSE(o.alarm_delay_s);

  o = score_trial(0, 7, {verdict(JudgmentKind::watch, 5)}, std::nullopt, 120.0);
  EXPECT_FALSE(o.false_alarm);
  o = score_trial(0, 7, {verdict(JudgmentKind::diffusion_source, 5)}, std::nullopt, 120.0);
  EXPECT_TRUE(o.false_alarm);
  EXPECT_FALSE(o.detected);
}

TEST(Summary, CdfEndsAtDetectionRatio) {
  const auto r = synthetic(20, 10);
  const auto s = summarize(r);
  EXPECT_EQ(s.detected, 10u);
  EXPECT_DOUBLE_EQ(s.detection_ratio, 0.5);
  ASSERT_FALSE(s.cdf.empty());
  EXPECT_DOUBLE_EQ(s.cdf.back().second, 0.5);
  for (std::size_t i = 1; i < s.cdf.size(); ++i) {
    EXPECT_LT(s.cdf[i - 1].first, s.cdf[i].first);
    EXPECT_LE(s.cdf[i - 1].second, s.cdf[i].second);
  }
  ASSERT_TRUE(s.median_delay_s);
  EXPECT_DOUBLE_EQ(*s.median_delay_s, 8.0);
  EXPECT_FALSE(summarize(synthetic(20, 9)).median_delay_s);
}

TEST(Summary, FormatRate) {
  EXPECT_EQ(format_rate(4, 60), "6.7%");
  EXPECT_EQ(format_rate(1, 20), "5%");
  EXPECT_EQ(format_rate(0, 20), "0%");
  EXPECT_EQ(format_rate(20, 20), "100%");
  EXPECT_EQ(format_rate(1, 3), "33.3%");
}

TEST(Summary, Categories) {
  EXPECT_EQ(category_from_string("interference"), Category::interference);
  EXPECT_EQ(to_string(Category::null), "null");
  EXPECT_THROW(category_from_string("other"), DataError);
}

TEST(Experiment, SpecValidation) {
  ExperimentSpec spec;
  spec.scenario = null_scenario();
  spec.repeats = 0;
  EXPECT_THROW(spec.validate(), ConfigError);
  spec.repeats = 3;
  spec.timeout_s = 0;
  EXPECT_THROW(spec.validate(), ConfigError);
  spec.timeout_s = 60;
  spec.seeds = {4, 5, 4};
  EXPECT_THROW(spec.validate(), ConfigError);
  spec.seeds.clear();
  spec.base_seed = 10;
  spec.seed_stride = 3;
  EXPECT_EQ(spec.trial_seeds(), (std::vector<std::uint64_t>{10, 13, 16}));
}

TEST(Experiment, CategoryFollowsScenario) {
  ExperimentSpec spec;
  spec.repeats = 2;
  spec.scenario = null_scenario();
  EXPECT_EQ(run_experiment(spec).category, Category::null);
  spec.scenario = interference_scenario(InterferenceKind::temperature);
  EXPECT_EQ(run_experiment(spec).category, Category::interference);
  spec.scenario = detection_scenario(Barrel::closed, Space::open, 1);
  const auto r = run_experiment(spec);
  EXPECT_EQ(r.category, Category::detection);
  ASSERT_EQ(r.outcomes.size(), 2u);
  EXPECT_EQ(r.outcomes[1].seed, 2u);
}

TEST(Reports, ByteIdenticalAndRoundTrip) {
  std::vector<ExperimentResult> results;
  for (const char* name : {"open-barrel-open-space-pos2", "shake"}) {
    ExperimentSpec spec;
    spec.scenario = preset(name);
    spec.repeats = 4;
    results.push_back(run_experiment(spec));
  }
  const auto a = scratch("reports_a");
  const auto b = scratch("reports_b");
  emit_reports(results, a);
  emit_reports(results, b);
  for (const char* f : {"cdf.csv", "summary.csv", "report.txt", "alarms.csv", "trials.csv"}) {
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    EXPECT_FALSE(slurp(a / f).empty()) << f;
  }

  const auto back = read_trials_csv(a / "trials.csv");
  ASSERT_EQ(back.size(), results.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].scenario, results[i].scenario);
    EXPECT_EQ(back[i].category, results[i].category);
    ASSERT_EQ(back[i].outcomes.size(), results[i].outcomes.size());
    for (std::size_t k = 0; k < back[i].outcomes.size(); ++k) {
      EXPECT_EQ(back[i].outcomes[k].seed, results[i].outcomes[k].seed);
      EXPECT_EQ(back[i].outcomes[k].detected, results[i].outcomes[k].detected);
      EXPECT_EQ(back[i].outcomes[k].alarm_delay_s, results[i].outcomes[k].alarm_delay_s);
      EXPECT_EQ(back[i].outcomes[k].false_alarm, results[i].outcomes[k].false_alarm);
    }
  }
  const auto c = scratch("reports_c");
  write_summary_reports(back, c);
  for (const char* f : {"cdf.csv", "summary.csv", "report.txt"}) EXPECT_EQ(slurp(a / f), slurp(c / f)) << f;
  fs::remove_all(a);
  fs::remove_all(b);
  fs::remove_all(c);
}

TEST(Reports, SummaryRows) {
  std::vector<ExperimentResult> results{synthetic(20, 10)};
  ExperimentResult shake;
  shake.scenario = "shake";
  shake.category = Category::interference;
  for (std::size_t i = 0; i < 60; ++i) {
    std::vector<Judgment> js;
    if (i < 4) js.push_back(verdict(JudgmentKind::diffusion_source, 50));
    shake.outcomes.push_back(score_trial(i, i + 1, js, std::nullopt, 120));
  }
  results.push_back(shake);
  const auto dir = scratch("summary_rows");
  emit_reports(results, dir);
  EXPECT_EQ(slurp(dir / "summary.csv"),
            "scenario,category,trials,detected,detection_ratio,median_delay_s,correct_alarms,"
            "false_alarms,false_alarm_rate\n"
            "synthetic,detection,20,10,0.5000,8,10,0,0%\n"
            "shake,interference,60,,,,56,4,6.7%\n"
            "total,interference,60,,,,56,4,6.7%\n");
  const auto cdf = slurp(dir / "cdf.csv");
  EXPECT_TRUE(cdf.ends_with("synthetic,120,0.5000\n")) << cdf;
  fs::remove_all(dir);
}

TEST(Reports, BadTrialsFile) {
  const auto dir = scratch("bad_trials");
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "trials.csv");
    out << "scenario,category,timeout_s,trial,seed,detected,alarm_delay_s,false_alarm,judgments,alarms\n"
        << "x,bogus,120,0,1,0,,0,0,0\n";
  }
  EXPECT_THROW(read_trials_csv(dir / "trials.csv"), DataError);
  EXPECT_THROW(read_trials_csv(dir / "missing.csv"), DataError);
  EXPECT_THROW(emit_reports({}, dir), DataError);
  fs::remove_all(dir);
}
