#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>

#include "meshat/service/config.hpp"
#include "meshat/service/seed.hpp"
#include "meshat/service/simulator.hpp"
#include "meshat/service/storage.hpp"
#include "meshat/state.hpp"
#include "support.hpp"

using namespace meshat;
using namespace meshat::service;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("meshat-test-" + std::to_string(std::hash<std::string>{}(
                                 ::testing::UnitTest::GetInstance()->current_test_info()->name())) +
            "-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path operator/(const char* name) const { return path / name; }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

Platform simulated(std::uint64_t seed, std::size_t weeks = 6, bool close = true) {
  Platform p;
  SimulationConfig cfg;
  cfg.seed = seed;
  cfg.groups = 2;
  cfg.members_per_group = 4;
  cfg.weeks = weeks;
  cfg.close_course = close;
  simulate(p, cfg);
  return p;
}

}  // namespace

TEST(Seed, PaperCourseShape) {
  Platform p(stepping_clock(setup_epoch()));
  seed_paper_course(p);
  const State& s = p.state();
  ASSERT_TRUE(s.course);
  EXPECT_EQ(s.course->calendar.size(), 4u);
  EXPECT_EQ(s.course->status, CourseStatus::Setup);
  EXPECT_EQ(s.groups.size(), 12u);
  std::map<Role, int> roles;
  for (const auto& [id, a] : s.actors) ++roles[a.role];
  EXPECT_EQ(roles[Role::Student] + roles[Role::ProjectLeader], 96);
  EXPECT_EQ(roles[Role::ProjectLeader], 12);
  EXPECT_EQ(roles[Role::TechnicalTutor] + roles[Role::ManagementTutor], 24);
  EXPECT_EQ(roles[Role::TechnicalManager] + roles[Role::ManagementManager], 2);
  EXPECT_EQ(roles[Role::Teacher], 1);
  EXPECT_EQ(roles[Role::Director], 1);
  for (const auto& [gid, g] : s.groups) EXPECT_EQ(g.member_ids.size(), 8u);
  // three roots, ten roles, four phases, one progress node per group
  EXPECT_EQ(s.forum.subjects().size(), 3u + 10u + 4u + 12u);
  EXPECT_EQ(s.deliverables.size(), 60u);
  EXPECT_TRUE(invariant_violations(s).empty());
  EXPECT_ERROR(seed_paper_course(p), ErrorCode::StoreNotEmpty);
}

TEST(Seed, RejectsDegenerateSizes) {
  Platform p;
  EXPECT_ERROR(seed_course(p, 0, 8), ErrorCode::InvalidConfig);
  EXPECT_ERROR(seed_course(p, 2, 1), ErrorCode::InvalidConfig);
}

TEST(Seed, IdenticalAcrossRuns) {
  Platform a(stepping_clock(setup_epoch())), b(stepping_clock(setup_epoch()));
  seed_paper_course(a);
  seed_paper_course(b);
  EXPECT_EQ(log_to_text(a.log()), log_to_text(b.log()));
}

TEST(Simulator, DeterministicPerSeed) {
  EXPECT_EQ(log_to_text(simulated(5).log()), log_to_text(simulated(5).log()));
  EXPECT_NE(log_to_text(simulated(5).log()), log_to_text(simulated(6).log()));
}

TEST(Simulator, SilentKnobsProduceNoActivity) {
  Platform p;
  SimulationConfig cfg;
  cfg.groups = 2;
  cfg.members_per_group = 3;
  cfg.silence();
  simulate(p, cfg);
  EXPECT_EQ(p.state().course->status, CourseStatus::Running);
  for (const auto& e : p.log()) EXPECT_GE(static_cast<int>(e.kind()), static_cast<int>(EventKind::CourseCreated));
}

TEST(Simulator, InvalidConfig) {
  Platform p;
  SimulationConfig cfg;
  cfg.weeks = 0;
  EXPECT_ERROR(simulate(p, cfg), ErrorCode::InvalidConfig);
  cfg = {};
  cfg.frame_of_mind_prob = 1.5;
  EXPECT_ERROR(simulate(p, cfg), ErrorCode::InvalidConfig);
  cfg = {};
  cfg.hours_per_student_week = -1;
  EXPECT_ERROR(simulate(p, cfg), ErrorCode::InvalidConfig);

  Platform seeded;
  seed_course(seeded, 2, 3);
  cfg = {};
  EXPECT_ERROR(simulate(seeded, cfg), ErrorCode::InvalidConfig);
}

TEST(Simulator, ContinuesAnExistingCourse) {
  Platform p;
  SimulationConfig cfg;
  cfg.groups = 2;
  cfg.members_per_group = 3;
  cfg.weeks = 3;
  const auto first = simulate(p, cfg);
  cfg.seed = 9;
  const auto second = simulate(p, cfg);
  EXPECT_EQ(second.first_seq, first.last_seq + 1);
  EXPECT_TRUE(invariant_violations(p.state()).empty());
}

TEST(Storage, TextRoundTripIsByteIdentical) {
  Platform p = simulated(11);
  const std::string text = log_to_text(p.log());
  const auto events = log_from_text(text);
  EXPECT_EQ(log_to_text(events), text);
  Platform q;
  load_events(q, events);
  EXPECT_EQ(q.state(), p.state());
  EXPECT_ERROR(load_events(q, events), ErrorCode::StoreNotEmpty);
}

TEST(Storage, StrictParseNamesTheSeq) {
  Platform p = simulated(3, 2, false);
  std::string text = log_to_text(p.log());
  text.pop_back();  // drop the final newline
  try {
    log_from_text(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SchemaMismatch);
    EXPECT_EQ(std::string(e.what()).rfind("seq " + std::to_string(p.last_seq()) + ":", 0), 0u)
        << e.what();
  }
  // Swap two lines: seqs no longer run in order.
  std::string lines = log_to_text(p.log());
  const auto a = lines.find('\n');
  const auto b = lines.find('\n', a + 1);
  const std::string swapped = lines.substr(a + 1, b - a) + lines.substr(0, a + 1) + lines.substr(b + 1);
  EXPECT_ERROR(log_from_text(swapped), ErrorCode::SchemaMismatch);
}

TEST(Storage, LoadRejectsInapplicableEvents) {
  Platform p = simulated(3, 2, false);
  auto events = p.log();
  // Drop a student's registration: the group then names an unknown member.
  auto it = std::find_if(events.begin(), events.end(), [](const Event& e) {
    const auto* a = e.as<payload::ActorRegistered>();
    return a && a->role == Role::Student;
  });
  events.erase(it);
  for (std::size_t i = 0; i < events.size(); ++i) events[i].seq = i + 1;
  Platform q;
  EXPECT_ERROR(load_events(q, events), ErrorCode::SchemaMismatch);
}

TEST(FileStore, AppendsSurviveReopen) {
  TempDir dir;
  const auto path = dir / "log.jsonl";
  std::string expected;
  {
    FileStore store(path);
    Platform p(stepping_clock(setup_epoch()));
    p.set_sink(&store);
    seed_course(p, 1, 3);
    expected = log_to_text(p.log());
  }
  EXPECT_EQ(slurp(path), expected);
  FileStore reopened(path);
  EXPECT_EQ(log_to_text(reopened.recovered()), expected);
  EXPECT_EQ(reopened.truncated_bytes(), 0u);
}

TEST(FileStore, TruncatesAnInterruptedAppend) {
  TempDir dir;
  const auto path = dir / "log.jsonl";
  Platform p = simulated(4, 2, false);
  const std::string text = log_to_text(p.log());
  spit(path, text + R"({"seq":)" + std::to_string(p.last_seq() + 1) + R"(,"timest)");
  FileStore store(path);
  EXPECT_EQ(store.recovered().size(), p.log().size());
  EXPECT_GT(store.truncated_bytes(), 0u);
  EXPECT_EQ(slurp(path), text);
}

TEST(FileStore, CorruptLineIsFatal) {
  TempDir dir;
  const auto path = dir / "log.jsonl";
  Platform p = simulated(4, 2, false);
  std::string text = log_to_text(p.log());
  text.insert(text.find('\n') + 1, "garbage\n");
  spit(path, text);
  EXPECT_ERROR(FileStore{path}, ErrorCode::CorruptStore);
}

TEST(FileStore, ExportImportExportIsIdentical) {
  TempDir dir;
  Platform p = simulated(8);
  write_log_file(dir / "a.jsonl", p.log());
  Platform q;
  load_events(q, read_log_file(dir / "a.jsonl"));
  write_log_file(dir / "b.jsonl", q.log());
  EXPECT_EQ(slurp(dir / "a.jsonl"), slurp(dir / "b.jsonl"));
  EXPECT_ERROR(read_log_file(dir / "missing.jsonl"), ErrorCode::IoFailure);
}

TEST(Replay, EveryPrefixSatisfiesInvariants) {
  Platform p = simulated(2, 4);
  const auto& log = p.log();
  State s;
  for (const auto& e : log) {
    apply(s, e);
    const auto v = invariant_violations(s);
    ASSERT_TRUE(v.empty()) << "seq " << e.seq << ": " << v.front();
  }
  EXPECT_EQ(s, p.state());
}

TEST(Config, DefaultsFileAndEnvironment) {
  TempDir dir;
  ::unsetenv("MESHAT_HOST");
  ::unsetenv("MESHAT_PORT");
  ::unsetenv("MESHAT_STORAGE");
  ::unsetenv("MESHAT_QUESTIONNAIRE");
  auto c = load_config(std::nullopt);
  EXPECT_EQ(c.host, "127.0.0.1");
  EXPECT_EQ(c.port, 8080);

  spit(dir / "c.json", R"({"port": 9000, "storage": "x.jsonl", "session_ttl_seconds": 60})");
  c = load_config(dir / "c.json");
  EXPECT_EQ(c.port, 9000);
  EXPECT_EQ(c.storage, fs::path("x.jsonl"));
  EXPECT_EQ(c.session_ttl_seconds, 60);

  ::setenv("MESHAT_PORT", "9100", 1);
  ::setenv("MESHAT_HOST", "0.0.0.0", 1);
  c = load_config(dir / "c.json");
  EXPECT_EQ(c.port, 9100);
  EXPECT_EQ(c.host, "0.0.0.0");
  ::setenv("MESHAT_PORT", "seventy", 1);
  EXPECT_ERROR(load_config(std::nullopt), ErrorCode::InvalidConfig);
  ::unsetenv("MESHAT_PORT");
  ::unsetenv("MESHAT_HOST");

  spit(dir / "bad.json", R"({"prot": 1})");
  EXPECT_ERROR(load_config(dir / "bad.json"), ErrorCode::InvalidConfig);
  spit(dir / "range.json", R"({"port": 70000})");
  EXPECT_ERROR(load_config(dir / "range.json"), ErrorCode::InvalidConfig);
  EXPECT_ERROR(load_config(dir / "absent.json"), ErrorCode::InvalidConfig);
}

TEST(Config, QuestionnaireFile) {
  const auto q = indicators::Questionnaire::from_json_text(
      R"({"Cognition":["a"],"Metacognition":["b"],"Motivation":["c"],"Behaviour":["d"]})");
  EXPECT_TRUE(q.contains(Dimension::Motivation, "c"));
  EXPECT_ERROR(indicators::Questionnaire::from_json_text(R"({"Cognition":["a"]})"),
               ErrorCode::InvalidConfig);
}
