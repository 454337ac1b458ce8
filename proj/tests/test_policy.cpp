#include <gtest/gtest.h>

#include <set>

#include "meshat/policy.hpp"
#include "meshat/sharing.hpp"
#include "oracle/policy_oracle.hpp"
#include "support.hpp"

using namespace meshat;
using namespace meshat::policy;
using meshat::testing::SeededCourse;

namespace {

// Counts disagreements between the engine and the hand-written table over
// every (actor, action, resource) of the course.
std::size_t disagreements(const State& s) {
  std::size_t bad = 0;
  for (const auto& r : all_resources(s))
    for (const auto& [aid, a] : s.actors)
      for (auto act : kAllActions) {
        const auto got = authorize(s, aid, act, r);
        const auto want = oracle::expected_decision(s, aid, act, r);
        if (got.allow != want.allow || got.rule != want.rule) {
          ++bad;
          ADD_FAILURE() << aid.str() << " " << to_string(a.role) << " " << to_string(act) << " "
                        << r.str() << ": got " << got.rule_id() << "/" << got.allow << " want "
                        << rule_id(want.rule) << "/" << want.allow;
        }
      }
  return bad;
}

ContractAnswers answers() { return {"a", "b", "c", "d", "e", "f"}; }

}  // namespace

TEST(Policy, MatchesTruthTableInEveryCourseState) {
  SeededCourse c(3, 4, false);
  EXPECT_EQ(disagreements(c.s()), 0u);
  core::advance_course(c.p, c.director);
  EXPECT_EQ(disagreements(c.s()), 0u);
  sharing::init_learning_contract(c.p, c.groups[0].leader, c.groups[0].leader, answers());
  sharing::init_learning_contract(c.p, c.groups[0].tech_tutor, c.groups[0].tech_tutor, answers());
  EXPECT_EQ(disagreements(c.s()), 0u);
  c.close();
  EXPECT_EQ(disagreements(c.s()), 0u);
}

TEST(Policy, SpecExamples) {
  SeededCourse c;
  const auto& g = c.groups[0];
  const ActorId member = g.members[1];
  auto d = authorize(c.s(), g.leader, Action::Read,
                     Resource::actor_scoped(ResourceClass::StudentMetacogDashboard, member));
  EXPECT_FALSE(d.allow);
  EXPECT_EQ(d.rule_id(), "R5");

  d = authorize(c.s(), member, Action::Write,
                Resource::actor_scoped(ResourceClass::StudentMetacogDashboard, member));
  EXPECT_TRUE(d.allow);
  EXPECT_EQ(d.rule_id(), "R2");

  d = authorize(c.s(), g.leader, Action::Write,
                Resource::group_scoped(ResourceClass::GroupDashboard, g.id));
  EXPECT_TRUE(d.allow);
  EXPECT_EQ(d.rule_id(), "R3");

  d = authorize(c.s(), member, Action::Write, Resource::course_wide(ResourceClass::ForumDiscussion));
  EXPECT_FALSE(d.allow);
  EXPECT_EQ(d.rule_id(), "R6");
}

TEST(Policy, EveryAllowComesFromExactlyOneRule) {
  SeededCourse c(2, 4);
  c.close();
  for (const auto& row : decision_table(c.s())) {
    std::size_t granting = 0;
    for (int r = 1; r <= 8; ++r) granting += rule_grants(static_cast<Rule>(r), row.key) ? 1 : 0;
    if (row.decision.allow) {
      EXPECT_EQ(granting, 1u) << to_string(row.key.relationship) << " " << to_string(row.key.cls);
      EXPECT_TRUE(rule_grants(row.decision.rule, row.key));
    }
  }
}

TEST(Policy, DisablingAGrantingRuleShrinksTheAllowSet) {
  SeededCourse c(2, 4);
  const auto rows = decision_table(c.s());
  auto allowed = [&](DisabledRules off) {
    std::set<DecisionKey> out;
    for (const auto& row : rows)
      if (decide(row.key, off).allow) out.insert(row.key);
    return out;
  };
  const auto full = allowed({});
  std::set<Rule> granting;
  for (const auto& row : rows)
    if (row.decision.allow) granting.insert(row.decision.rule);
  EXPECT_GE(granting.size(), 5u);
  for (Rule r : granting) {
    DisabledRules off;
    off.set(static_cast<std::size_t>(r));
    const auto fewer = allowed(off);
    EXPECT_LT(fewer.size(), full.size()) << rule_id(r);
    for (const auto& k : fewer) EXPECT_TRUE(full.contains(k)) << rule_id(r);
  }
}

TEST(Policy, TutorsAreSymmetricAndBlindOutsideTheirGroups) {
  SeededCourse c(2, 4);
  const auto& s = c.s();
  for (const auto& g : c.groups) {
    const auto& other = c.groups[0].id == g.id ? c.groups[1] : c.groups[0];
    for (auto cls : kAllClasses) {
      for (auto act : kAllActions) {
        if (cls == ResourceClass::ForumDiscussion || cls == ResourceClass::Taxonomy ||
            cls == ResourceClass::LearningContract || cls == ResourceClass::TutorView)
          continue;
        const bool group_cls = cls == ResourceClass::GroupDashboard ||
                               cls == ResourceClass::GroupBlog ||
                               cls == ResourceClass::GroupBlogDraft || cls == ResourceClass::Task ||
                               cls == ResourceClass::Deliverable || cls == ResourceClass::Evaluation;
        const Resource mine = group_cls ? Resource::group_scoped(cls, g.id)
                                        : Resource::actor_scoped(cls, g.members[1]);
        const Resource theirs = group_cls ? Resource::group_scoped(cls, other.id)
                                          : Resource::actor_scoped(cls, other.members[1]);
        EXPECT_EQ(authorize(s, g.tech_tutor, act, mine).allow,
                  authorize(s, g.mgmt_tutor, act, mine).allow);
        EXPECT_FALSE(authorize(s, g.tech_tutor, act, theirs).allow) << to_string(cls);
        if (act == Action::Read) EXPECT_TRUE(authorize(s, g.tech_tutor, act, mine).allow);
      }
    }
  }
}

TEST(Policy, LeaderNeverSeesMemberMetacog) {
  SeededCourse c(3, 5);
  for (const auto& g : c.groups)
    for (std::size_t i = 1; i < g.members.size(); ++i)
      for (auto act : kAllActions) {
        const auto d = authorize(
            c.s(), g.leader, act,
            Resource::actor_scoped(ResourceClass::StudentMetacogDashboard, g.members[i]));
        EXPECT_FALSE(d.allow);
        EXPECT_EQ(d.rule, Rule::R5);
      }
}

TEST(Policy, RequireCarriesRuleId) {
  SeededCourse c;
  try {
    require(c.s(), c.groups[0].members[1], Action::Read, Resource::course_wide(ResourceClass::Taxonomy));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Forbidden);
    EXPECT_EQ(e.rule_id(), "R6");
  }
  EXPECT_ERROR(authorize(c.s(), ActorId{9999}, Action::Read,
                         Resource::course_wide(ResourceClass::Taxonomy)),
               ErrorCode::UnknownActor);
  EXPECT_ERROR(authorize(c.s(), c.director, Action::Read,
                         Resource::group_scoped(ResourceClass::Task, GroupId{99})),
               ErrorCode::UnknownResource);
}

TEST(Policy, DecisionTableIsDeterministicAndComplete) {
  SeededCourse a(2, 4), b(2, 4);
  const auto ta = decision_table(a.s());
  const auto tb = decision_table(b.s());
  EXPECT_EQ(decision_table_csv(ta), decision_table_csv(tb));
  const std::string csv = decision_table_csv(ta);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "relationship,role,action,resource_class,allow,rule_id");
  for (const auto& row : ta) EXPECT_EQ(row.decision.rule_id().substr(0, 1), "R");
}
