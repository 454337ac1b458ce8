#include <gtest/gtest.h>

#include "meshat/indicators.hpp"
#include "meshat/service/seed.hpp"
#include "meshat/service/simulator.hpp"
#include "meshat/sharing.hpp"
#include "oracle/compare.hpp"
#include "support.hpp"

using namespace meshat;
using namespace meshat::indicators;
using meshat::testing::SeededCourse;

namespace {

const IsoWeek kWeek = *IsoWeek::parse("2025-W45");  // 2025-11-03 .. 2025-11-09

std::vector<SelfReportItem> items(std::initializer_list<std::pair<Dimension, int>> xs) {
  const auto q = Questionnaire::defaults();
  std::map<Dimension, std::size_t> used;
  std::vector<SelfReportItem> out;
  for (auto [d, v] : xs) {
    const auto& prompts = q.prompts.at(d);
    out.push_back({d, prompts[used[d]++ % prompts.size()], v});
  }
  return out;
}

}  // namespace

TEST(FrameOfMind, GroupMean) {
  SeededCourse c(2, 3);
  const auto& g = c.groups[0];
  for (auto m : g.members) record_frame_of_mind(c.p, m, m, kWeek, 3);
  EXPECT_DOUBLE_EQ(*compute_project_dashboard(c.p.log(), g.id, kWeek).frame_of_mind, 3.0);

  const auto& h = c.groups[1];
  record_frame_of_mind(c.p, h.members[0], h.members[0], kWeek, 1);
  record_frame_of_mind(c.p, h.members[1], h.members[1], kWeek, 5);
  EXPECT_DOUBLE_EQ(*compute_project_dashboard(c.p.log(), h.id, kWeek).frame_of_mind, 3.0);

  EXPECT_ERROR(record_frame_of_mind(c.p, g.leader, g.leader, kWeek, 6), ErrorCode::OutOfRange);
  EXPECT_ERROR(record_frame_of_mind(c.p, g.leader, g.members[1], kWeek, 3), ErrorCode::Forbidden);
}

TEST(FrameOfMind, LatestEntryPerMemberWins) {
  SeededCourse c(1, 2);
  const auto& g = c.groups[0];
  record_frame_of_mind(c.p, g.leader, g.leader, kWeek, 1);
  record_frame_of_mind(c.p, g.leader, g.leader, kWeek, 4);
  EXPECT_DOUBLE_EQ(*compute_project_dashboard(c.p.log(), g.id, kWeek).frame_of_mind, 4.0);
}

TEST(ProjectDashboard, EmptyLogIsZero) {
  // The seed plans deliverables, so start from a bare group instead.
  Platform p(service::stepping_clock(service::setup_epoch()));
  core::create_course(p, "PM", service::paper_calendar());
  std::set<ActorId> members;
  for (int i = 0; i < 3; ++i) members.insert(core::register_actor(p, "S", Role::Student));
  const ActorId t1 = core::register_actor(p, "T1", Role::TechnicalTutor);
  const ActorId t2 = core::register_actor(p, "T2", Role::ManagementTutor);
  const GroupId g = core::create_group(p, {"G", members, *members.begin(), t1, t2, "x"}).id;

  const auto d = compute_project_dashboard(p.log(), g, kWeek);
  EXPECT_FALSE(d.frame_of_mind);
  EXPECT_EQ(d.working_time.period_total, 0.0);
  EXPECT_EQ(d.working_time.cumulative_total, 0.0);
  EXPECT_EQ(d.working_time.members.size(), 3u);
  EXPECT_TRUE(d.deliverables.empty());
  EXPECT_EQ(d.total_delay_days, 0);
  EXPECT_ERROR(compute_project_dashboard(p.log(), GroupId{42}, kWeek), ErrorCode::UnknownGroup);

  // With nothing recorded every teamwork ratio is vacuous except TO.
  const auto tw = compute_teamwork_indicators(p.log(), g, kWeek);
  for (const Ratio* r : {&tw.activity_score, &tw.tl, &tw.mo, &tw.fe, &tw.ba, &tw.co}) {
    EXPECT_DOUBLE_EQ(r->value, 1.0);
    EXPECT_TRUE(r->no_data);
  }
  EXPECT_DOUBLE_EQ(tw.to.value, 0.0);
}

TEST(ProjectDashboard, SubmissionDelay) {
  SeededCourse c(1, 3);
  const auto& g = c.groups[0];
  const auto id = core::create_deliverable(c.p, g.tech_tutor, g.id, "Plan", make_date(2026, 3, 1)).id;
  c.at(make_timestamp(2026, 3, 4, 10));
  core::submit_deliverable(c.p, g.leader, id);
  const auto week = IsoWeek::of(make_date(2026, 3, 4));
  const auto d = compute_project_dashboard(c.p.log(), g.id, week);
  auto it = std::find_if(d.deliverables.begin(), d.deliverables.end(),
                         [&](const DeliverableStatus& x) { return x.id == id; });
  ASSERT_NE(it, d.deliverables.end());
  EXPECT_EQ(it->delay_days, 3);
  EXPECT_EQ(it->state, DeliverableState::Submitted);
}

TEST(ProjectDashboard, PendingDelayRunsToToday) {
  SeededCourse c(1, 3);
  const auto& g = c.groups[0];
  const auto id =
      core::create_deliverable(c.p, g.tech_tutor, g.id, "Plan", make_date(2025, 11, 5)).id;
  auto delay = [&](std::optional<Date> today) {
    for (const auto& x : compute_project_dashboard(c.p.log(), g.id, kWeek, today).deliverables)
      if (x.id == id) return x.delay_days;
    return std::int64_t{-1};
  };
  EXPECT_EQ(delay(make_date(2025, 11, 12)), 7);
  EXPECT_EQ(delay(std::nullopt), 4);
}

TEST(ProjectDashboard, WorkingTimeByEntryDate) {
  SeededCourse c(1, 2);
  const auto& g = c.groups[0];
  core::record_time_entry(c.p, g.leader, g.leader, make_date(2025, 11, 1), 2);
  core::record_time_entry(c.p, g.leader, g.leader, make_date(2025, 11, 4), 3.5);
  core::record_time_entry(c.p, g.members[1], g.members[1], make_date(2025, 11, 9), 1);
  core::record_time_entry(c.p, g.members[1], g.members[1], make_date(2025, 11, 10), 8);
  const auto d = compute_project_dashboard(c.p.log(), g.id, kWeek);
  EXPECT_DOUBLE_EQ(d.working_time.period_total, 4.5);
  EXPECT_DOUBLE_EQ(d.working_time.cumulative_total, 6.5);
}

TEST(SelfReport, DimensionMeans) {
  SeededCourse c(1, 2);
  const ActorId s = c.groups[0].members[1];
  record_self_report(c.p, s, s, kWeek,
                     items({{Dimension::Cognition, 5}, {Dimension::Metacognition, 5},
                            {Dimension::Motivation, 5}, {Dimension::Behaviour, 5}}));
  auto prof = compute_metacognitive_profile(c.p.log(), s);
  for (auto d : kAllDimensions) EXPECT_DOUBLE_EQ(prof.periods.at(kWeek).at(d), 5.0);
  EXPECT_TRUE(prof.trend.empty());

  const IsoWeek next = kWeek.next();
  record_self_report(c.p, s, s, next, items({{Dimension::Cognition, 2}, {Dimension::Cognition, 4}}));
  prof = compute_metacognitive_profile(c.p.log(), s);
  EXPECT_DOUBLE_EQ(prof.periods.at(next).at(Dimension::Cognition), 3.0);
  EXPECT_FALSE(prof.periods.at(next).contains(Dimension::Motivation));
  EXPECT_DOUBLE_EQ(prof.trend.at(Dimension::Cognition), -2.0);
  EXPECT_EQ(prof.trend.size(), 1u);
}

TEST(SelfReport, TrendOverTwoPeriods) {
  SeededCourse c(1, 2);
  const ActorId s = c.groups[0].leader;
  record_self_report(c.p, s, s, kWeek, items({{Dimension::Motivation, 3}}));
  record_self_report(c.p, s, s, kWeek.next(), items({{Dimension::Motivation, 4}}));
  EXPECT_DOUBLE_EQ(compute_metacognitive_profile(c.p.log(), s).trend.at(Dimension::Motivation), 1.0);
}

TEST(SelfReport, Validation) {
  SeededCourse c(1, 2);
  const ActorId s = c.groups[0].leader;
  EXPECT_ERROR(record_self_report(c.p, s, s, kWeek, {}), ErrorCode::InvalidItem);
  EXPECT_ERROR(record_self_report(c.p, s, s, kWeek, {{Dimension::Cognition, "made up", 3}}),
               ErrorCode::InvalidItem);
  EXPECT_ERROR(record_self_report(c.p, s, s, kWeek, items({{Dimension::Cognition, 0}})),
               ErrorCode::OutOfRange);
  EXPECT_ERROR(compute_metacognitive_profile(c.p.log(), c.groups[0].tech_tutor),
               ErrorCode::UnknownActor);
}

TEST(Teamwork, TeamOrientation) {
  SeededCourse c(1, 8);
  const auto& g = c.groups[0];
  c.at(kWeek.begin() + std::chrono::hours(9));
  for (int i = 0; i < 4; ++i)
    core::record_time_entry(c.p, g.members[i], g.members[i], make_date(2025, 11, 3), 1);
  const auto tw = compute_teamwork_indicators(c.p.log(), g.id, kWeek);
  EXPECT_DOUBLE_EQ(tw.to.value, 0.5);
}

TEST(Teamwork, CoordinationAndBalance) {
  SeededCourse c(1, 3);
  const auto& g = c.groups[0];
  const ActorId a = g.members[1], b = g.members[2];
  c.at(kWeek.begin() + std::chrono::hours(9));
  const TaskId t1 = core::add_task(c.p, a, g.id, {"one", a, {}, {}, {}, TaskStatus::Active}).id;
  const TaskId t2 = core::add_task(c.p, a, g.id, {"two", a, {t1}, {}, {}, TaskStatus::Planned}).id;
  const TaskId t3 = core::add_task(c.p, a, g.id, {"three", b, {t1}, {}, {}, TaskStatus::Planned}).id;
  core::TaskChanges start;
  start.status = TaskStatus::Active;
  core::update_task(c.p, a, g.id, t2, start);  // t1 not done yet
  core::TaskChanges finish;
  finish.status = TaskStatus::Done;
  core::update_task(c.p, a, g.id, t1, finish);
  core::update_task(c.p, b, g.id, t3, start);  // t1 done
  core::TaskChanges move;
  move.assignee = b;
  core::update_task(c.p, a, g.id, t1, move);

  const auto tw = compute_teamwork_indicators(c.p.log(), g.id, kWeek);
  EXPECT_EQ(tw.co.numerator, 1u);
  EXPECT_EQ(tw.co.denominator, 2u);
  EXPECT_EQ(tw.ba.numerator, 1u);
  EXPECT_EQ(tw.ba.denominator, 1u);
  EXPECT_EQ(tw.tl.denominator, 3u);
  EXPECT_EQ(tw.mo.numerator, 3u);
}

TEST(Evaluation, AdjustmentBounds) {
  SeededCourse c(1, 3);
  const auto& g = c.groups[0];
  evaluate_group(c.p, g.tech_tutor, g.id, 14);
  auto ev = evaluate_student(c.p, g.mgmt_tutor, g.members[1], 2.0);
  EXPECT_DOUBLE_EQ(*ev.individual_grade(g.members[1]), 16.0);
  EXPECT_ERROR(evaluate_student(c.p, g.tech_tutor, g.members[1], 2.5),
               ErrorCode::AdjustmentOutOfRange);
  EXPECT_ERROR(evaluate_student(c.p, g.tech_tutor, g.members[1], 2.001),
               ErrorCode::AdjustmentOutOfRange);
  evaluate_group(c.p, g.tech_tutor, g.id, 19);
  EXPECT_DOUBLE_EQ(*c.s().evaluations.at(g.id).individual_grade(g.members[1]), 20.0);
  evaluate_group(c.p, g.tech_tutor, g.id, 1);
  evaluate_student(c.p, g.tech_tutor, g.members[2], -2.0);
  EXPECT_DOUBLE_EQ(*c.s().evaluations.at(g.id).individual_grade(g.members[2]), 0.0);
  EXPECT_ERROR(evaluate_group(c.p, g.tech_tutor, g.id, 20.5), ErrorCode::OutOfRange);
  EXPECT_ERROR(evaluate_group(c.p, g.leader, g.id, 10), ErrorCode::Forbidden);
}

TEST(LearningView, TutorSeesExactlyTheirGroups) {
  SeededCourse c(3, 3);
  const auto& g = c.groups[1];
  sharing::write_student_post(c.p, g.leader, g.leader, "week one");
  const auto view = compute_learning_view(c.p, g.tech_tutor, kWeek);
  ASSERT_EQ(view.groups.size(), 1u);
  EXPECT_EQ(view.groups[0].group, g.id);
  EXPECT_EQ(view.groups[0].students.size(), 3u);
  EXPECT_EQ(view.groups[0].recent_posts.size(), 1u);
  EXPECT_EQ(view.groups[0].teamwork, compute_teamwork_indicators(c.p.log(), g.id, kWeek));
  EXPECT_EQ(view.groups[0].dashboard, compute_project_dashboard(c.p.log(), g.id, kWeek));
  EXPECT_EQ(view.seq, c.p.last_seq());
  EXPECT_ERROR(compute_learning_view(c.p, c.tech_manager, kWeek), ErrorCode::Forbidden);
  EXPECT_ERROR(compute_learning_view(c.p, g.leader, kWeek), ErrorCode::Forbidden);
}

TEST(IndicatorOracle, SimulatedHistoriesAgree) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    Platform p;
    service::SimulationConfig cfg;
    cfg.seed = seed;
    cfg.groups = 2 + seed % 2;
    cfg.members_per_group = 3 + seed % 4;
    cfg.weeks = 10;
    cfg.tasks_per_group = 3;
    cfg.task_reassign_prob = 0.3;
    cfg.close_course = seed % 2 == 0;
    const auto res = service::simulate(p, cfg);
    const auto report = oracle::compare_history(p.state(), p.log(), res.first_week, res.last_week);
    EXPECT_GT(report.checks, 100u);
    for (const auto& m : report.mismatches) ADD_FAILURE() << "seed " << seed << ": " << m;
  }
}
