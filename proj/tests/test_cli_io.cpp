#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "fixtures.hpp"
#include "moodcam/cli/commands.hpp"
#include "moodcam/cli/config.hpp"
#include "moodcam/cli/io.hpp"
#include "moodcam/cli/report.hpp"

using namespace moodcam;
using namespace moodcam::cli;
namespace fs = std::filesystem;

namespace {

errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const error& e) {
    return e.code();
  }
  return errc::io_error;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const error& e) {
    return e.what();
  }
  return {};
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("moodcam_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST(SessionsJsonl, RoundTripIsExact) {
  std::vector<session> sessions{fixture::make_session("P1", "s1", 1000, 3, 60),
                                fixture::make_session("P2", "s2", 5000, 2, -300, 0.123456789)};
  sessions[0].frames[1].head.roll = -0.1 / 3.0;
  std::stringstream buf;
  write_sessions_jsonl(buf, sessions);
  auto back = read_sessions_jsonl(buf);
  EXPECT_EQ(back, sessions);
}

TEST(SessionsJsonl, ErrorsCarryLineNumbers) {
  std::stringstream ok;
  write_sessions_jsonl(ok, {fixture::make_session("P1", "s1", 0, 1)});
  std::string good = ok.str();
  std::stringstream broken(good + "{not json\n");
  auto msg = message_of([&] { read_sessions_jsonl(broken); });
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;

  auto j = json::parse(good);
  j.erase("smile_p");
  std::stringstream missing(j.dump() + "\n");
  EXPECT_EQ(code_of([&] { read_sessions_jsonl(missing); }), errc::missing_channel);

  j = json::parse(good);
  j["smile_p"] = 1.5;
  std::stringstream range(j.dump() + "\n");
  EXPECT_EQ(code_of([&] { read_sessions_jsonl(range); }), errc::out_of_range);

  j = json::parse(good);
  j["smile_p"] = "high";
  std::stringstream typed(j.dump() + "\n");
  EXPECT_EQ(code_of([&] { read_sessions_jsonl(typed); }), errc::data_error);
}

TEST(SurveysCsv, RoundTripAndErrors) {
  std::vector<survey_response> s{{"P1", 1000, 4, -2, 60}, {"P1", 2000, 0, 0, 60}, {"P2", 500, -4, 1, -300}};
  std::stringstream buf;
  write_surveys_csv(buf, s);
  auto back = read_surveys_csv(buf);
  EXPECT_EQ(back, s);

  std::stringstream bad_header("participant,timestamp_ms\n");
  EXPECT_EQ(code_of([&] { read_surveys_csv(bad_header); }), errc::data_error);
  std::stringstream bad_value(std::string(survey_header) + "\nP1,100,0,5,0\n");
  auto msg = message_of([&] { read_surveys_csv(bad_value); });
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
  EXPECT_EQ(code_of([&] { std::stringstream in(std::string(survey_header) + "\nP1,100,0,5,0\n"); read_surveys_csv(in); }),
            errc::out_of_range);
  std::stringstream bad_number(std::string(survey_header) + "\nP1,1e3,0,1,0\n");
  EXPECT_EQ(code_of([&] { read_surveys_csv(bad_number); }), errc::data_error);
}

TEST(Sha256, KnownDigest) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Config, DefaultsAndOverrides) {
  std::stringstream empty("");
  auto d = parse_config(empty, "/cfg");
  EXPECT_EQ(d.sessions_path, fs::path("/cfg/sessions.jsonl"));
  EXPECT_EQ(d.pca_components, 10);
  EXPECT_EQ(d.lags, (std::vector<int>{1, 2}));
  EXPECT_EQ(d.seed, 42u);
  EXPECT_EQ(d.cohort.seed, 42u);
  EXPECT_EQ(d.lopo().grid.size(), 12u);

  std::stringstream in(
      "[data]\nsessions = data/s.jsonl\nsurveys = /abs/s.csv\n"
      "[windows]\nlags = 1, 4\n[model]\nseed = 9\nn_trees = 7\n"
      "[synth]\nsignal_head_euler = 1.5\nn_participants = 4\n");
  auto c = parse_config(in, "/cfg");
  EXPECT_EQ(c.sessions_path, fs::path("/cfg/data/s.jsonl"));
  EXPECT_EQ(c.surveys_path, fs::path("/abs/s.csv"));
  EXPECT_EQ(c.lags, (std::vector<int>{1, 4}));
  EXPECT_EQ(c.cohort.seed, 9u);
  EXPECT_EQ(c.lopo().n_trees, 7);
  EXPECT_EQ(c.cohort.effect(feature_group::head_euler), 1.5);
  EXPECT_EQ(c.cohort.effect(feature_group::smiling), 2.0);
  EXPECT_EQ(c.cohort.n_participants, 4);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  auto parse = [](const std::string& text) {
    std::stringstream in(text);
    return parse_config(in);
  };
  auto msg = message_of([&] { parse("[model]\nn_tres = 5\n"); });
  EXPECT_NE(msg.find("n_tres"), std::string::npos);
  EXPECT_EQ(code_of([&] { parse("[model]\nn_tres = 5\n"); }), errc::config_error);
  EXPECT_EQ(code_of([&] { parse("[windows]\nlags = 3\n"); }), errc::config_error);
  EXPECT_EQ(code_of([&] { parse("[model]\nn_trees = many\n"); }), errc::config_error);
  EXPECT_EQ(code_of([&] { parse("[features]\npca_scope = sometimes\n"); }), errc::config_error);
  EXPECT_EQ(code_of([&] { parse("[features]\nau_ids = 1,2,3\n"); }), errc::config_error);
  EXPECT_EQ(code_of([&] { parse("[ablation]\nmodes = drop\n"); }), errc::config_error);
}

TEST(Config, ReferenceListsEveryKey) {
  auto md = config_reference_markdown();
  for (const auto& k : config_reference()) EXPECT_NE(md.find(std::string(k.key)), std::string::npos) << k.key;
}

TEST(Report, RenderKeepsRowOrderAndMarksMissingValues) {
  json cell{{"f1", 0.876}, {"auc", nullptr}};
  json report{{"table", "main"},
              {"rows", json::array({{{"model", "At moment"}, {"valence", cell}, {"arousal", cell}},
                                    {{"model", "Daily Average"}, {"valence", cell}, {"arousal", cell}}})}};
  auto md = render_main(report, true);
  auto first = md.find("At moment");
  auto second = md.find("Daily Average");
  ASSERT_NE(first, std::string::npos);
  ASSERT_NE(second, std::string::npos);
  EXPECT_LT(first, second);
  EXPECT_NE(md.find("0.88"), std::string::npos);
  EXPECT_NE(md.find("n/a"), std::string::npos);
  EXPECT_EQ(md.rfind("| Mood Model", 0), 0u);
  auto txt = render_main(report, false);
  EXPECT_EQ(txt.find('|'), std::string::npos);
}

TEST(Commands, SmallEndToEndRun) {
  auto dir = scratch("e2e");
  std::stringstream ini(
      "[synth]\nn_participants = 3\nn_days = 4\n"
      "[model]\nn_trees = 5\nmax_depth_grid = 3\nmin_samples_leaf_grid = 1,5\n");
  auto cfg = parse_config(ini, dir);
  auto synth_files = cmd_synth(cfg, dir);
  ASSERT_EQ(synth_files.size(), 3u);
  for (const auto& f : synth_files) EXPECT_TRUE(fs::exists(f));

  auto built = cmd_build(cfg, dir / "build");
  EXPECT_TRUE(fs::exists(dir / "build" / "at_moment.csv"));
  EXPECT_TRUE(fs::exists(dir / "build" / "next_day_lag2.csv"));
  EXPECT_EQ(built.size(), 5u);

  cmd_run(cfg, dir / "run");
  auto report = json::parse(read_file(dir / "run" / "report.json"));
  EXPECT_EQ(report.at("table"), "main");
  EXPECT_EQ(report.at("schema_version"), report_schema_version);
  ASSERT_EQ(report.at("rows").size(), 4u);
  EXPECT_EQ(report["rows"][0]["model"], "At moment");
  EXPECT_EQ(report["rows"][1]["model"], "Daily Average");
  EXPECT_EQ(report["rows"][2]["model"], "Next Day Average (1 Day Lag)");
  EXPECT_EQ(report["rows"][3]["model"], "Next Day Average (2 Day Lag)");
  for (const auto& row : report["rows"])
    for (const char* t : {"valence", "arousal"})
      for (const char* k : {"f1", "auc", "folds", "confusion"}) EXPECT_TRUE(row.at(t).contains(k)) << k;

  auto manifest = json::parse(read_file(dir / "run" / "manifest.json"));
  for (const auto& e : manifest.at("evaluations"))
    for (const auto& f : e.at("folds")) EXPECT_EQ(f.at("audit").at("held_out_rows_in_training"), 0);

  // re-rendering the JSON reproduces the rendered files
  auto rerendered = cmd_report(dir / "run" / "report.json", dir / "again");
  EXPECT_EQ(read_file(rerendered[0]), read_file(dir / "run" / "report.md"));
  EXPECT_EQ(read_file(rerendered[1]), read_file(dir / "run" / "report.txt"));
  fs::remove_all(dir);
}

TEST(Commands, MissingInputIsAnIoError) {
  auto dir = scratch("missing");
  std::stringstream ini("");
  auto cfg = parse_config(ini, dir);
  EXPECT_EQ(code_of([&] { cmd_run(cfg, dir / "out"); }), errc::io_error);
  fs::remove_all(dir);
}
