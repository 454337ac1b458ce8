#include <gtest/gtest.h>

#include "meshat/sharing.hpp"
#include "oracle/forum_workload.hpp"
#include "support.hpp"

using namespace meshat;
using namespace meshat::sharing;
using meshat::testing::SeededCourse;

namespace {

ContractAnswers answers(const std::string& tag = "x") {
  ContractAnswers a;
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = tag + std::to_string(i);
  return a;
}

SubjectId child(const Forum& f, TaxonomyRoot root, std::string_view label) {
  return *f.find_child(f.root_subject(root), label);
}

}  // namespace

TEST(Blogs, StudentPosts) {
  SeededCourse c;
  const auto& g = c.groups[0];
  const ActorId s = g.members[1];
  EXPECT_EQ(write_student_post(c.p, s, s, "hello").status, PostStatus::Published);
  EXPECT_ERROR(write_student_post(c.p, g.members[2], s, "intrude"), ErrorCode::Forbidden);
  EXPECT_ERROR(write_student_post(c.p, s, s, ""), ErrorCode::BadRequest);
  EXPECT_EQ(read_blog(c.s(), g.tech_tutor, BlogOwner{s}).size(), 1u);
  EXPECT_EQ(read_blog(c.s(), g.leader, BlogOwner{s}).size(), 1u);
  EXPECT_ERROR(read_blog(c.s(), c.groups[1].leader, BlogOwner{s}), ErrorCode::Forbidden);
}

TEST(Blogs, GroupPostsNeedTheLeader) {
  SeededCourse c;
  const auto& g = c.groups[0];
  const auto& draft = propose_group_post(c.p, g.members[1], g.id, "our progress");
  const PostId id = draft.id;
  EXPECT_EQ(draft.status, PostStatus::Draft);
  EXPECT_ERROR(confirm_group_post(c.p, g.members[2], id), ErrorCode::Forbidden);
  EXPECT_ERROR(confirm_group_post(c.p, g.tech_tutor, id), ErrorCode::Forbidden);

  // Tutors see drafts of their group; outsiders see nothing.
  EXPECT_EQ(read_blog(c.s(), g.tech_tutor, BlogOwner{g.id}).size(), 1u);
  EXPECT_ERROR(read_blog(c.s(), c.groups[1].tech_tutor, BlogOwner{g.id}), ErrorCode::Forbidden);

  const auto& pub = confirm_group_post(c.p, g.leader, id);
  EXPECT_EQ(pub.status, PostStatus::Published);
  EXPECT_EQ(pub.published_by, g.leader);
  EXPECT_ERROR(confirm_group_post(c.p, g.leader, id), ErrorCode::AlreadyPublished);
  EXPECT_ERROR(confirm_group_post(c.p, g.leader, PostId{77}), ErrorCode::UnknownPost);
}

TEST(Forum, DiscussionsAreForTutors) {
  SeededCourse c;
  const Forum& f = c.s().forum;
  const SubjectId evaluator = child(f, TaxonomyRoot::RolesAndTasks, "Evaluator");
  const auto& tutor = c.groups[0].tech_tutor;
  EXPECT_ERROR(create_discussion(c.p, c.groups[0].leader, "t", "b", {evaluator}),
               ErrorCode::Forbidden);
  EXPECT_ERROR(create_discussion(c.p, tutor, "t", "b", {}), ErrorCode::EmptyTags);
  EXPECT_ERROR(create_discussion(c.p, tutor, "t", "b", {SubjectId{999}}), ErrorCode::UnknownTag);
  const DiscussionId id = create_discussion(c.p, tutor, "Grading", "How?", {evaluator}).id;
  reply(c.p, c.groups[1].mgmt_tutor, id, "Like this");
  EXPECT_EQ(c.s().forum.discussion(id)->messages.size(), 2u);
  EXPECT_ERROR(reply(c.p, c.teacher, id, "me too"), ErrorCode::Forbidden);
  EXPECT_EQ(search_discussions(c.s(), c.teacher, {evaluator}).size(), 1u);
  EXPECT_ERROR(search_discussions(c.s(), c.groups[0].leader, {evaluator}), ErrorCode::Forbidden);
}

TEST(Forum, ProposedSubjectsAreTaggable) {
  SeededCourse c;
  const auto& tutor = c.groups[0].tech_tutor;
  const SubjectId cal = c.s().forum.root_subject(TaxonomyRoot::ProjectCalendar);
  const auto& sub = propose_subject(c.p, tutor, cal, "Phase 3 mid-review");
  const SubjectId id = sub.id;
  EXPECT_EQ(sub.status, SubjectStatus::Proposed);
  EXPECT_EQ(sub.root, TaxonomyRoot::ProjectCalendar);
  EXPECT_ERROR(propose_subject(c.p, tutor, cal, "Phase 3 mid-review"), ErrorCode::DuplicateLabel);
  EXPECT_ERROR(propose_subject(c.p, tutor, SubjectId{999}, "x"), ErrorCode::UnknownParent);
  create_discussion(c.p, tutor, "t", "b", {id});
  EXPECT_ERROR(rename_subject(c.p, tutor, id, "y"), ErrorCode::Forbidden);
  EXPECT_EQ(rename_subject(c.p, c.director, id, "Mid-review").label, "Mid-review");
}

TEST(Forum, SearchFollowsDescendantsAndRanks) {
  SeededCourse c;
  const auto& tutor = c.groups[0].tech_tutor;
  const Forum& f = c.s().forum;
  EXPECT_TRUE(search_discussions(c.s(), tutor, {f.root_subject(TaxonomyRoot::RolesAndTasks)}).empty());
  const SubjectId roles = f.root_subject(TaxonomyRoot::RolesAndTasks);
  const SubjectId evaluator = child(f, TaxonomyRoot::RolesAndTasks, "Evaluator");
  const SubjectId closure = child(f, TaxonomyRoot::ProjectCalendar, "Closure");
  const DiscussionId d1 = create_discussion(c.p, tutor, "one", "b", {roles}).id;
  const DiscussionId d2 = create_discussion(c.p, tutor, "two", "b", {evaluator}).id;
  const DiscussionId d3 = create_discussion(c.p, tutor, "three", "b", {evaluator, closure}).id;
  EXPECT_EQ(search_discussions(c.s(), tutor, {roles}), (std::vector{d3, d2, d1}));
  EXPECT_EQ(search_discussions(c.s(), tutor, {roles, closure}), (std::vector{d3, d2, d1}));
  reply(c.p, tutor, d1, "bump");
  EXPECT_EQ(search_discussions(c.s(), tutor, {roles}), (std::vector{d1, d3, d2}));
}

TEST(Forum, MergeRetagsDiscussions) {
  SeededCourse c;
  const auto& tutor = c.groups[0].tech_tutor;
  const SubjectId roles = c.s().forum.root_subject(TaxonomyRoot::RolesAndTasks);
  const SubjectId a = propose_subject(c.p, tutor, roles, "Grading").id;
  const SubjectId b = propose_subject(c.p, tutor, roles, "Marking").id;
  const DiscussionId d = create_discussion(c.p, tutor, "t", "b", {b}).id;
  EXPECT_ERROR(merge_subjects(c.p, c.director, roles, a), ErrorCode::InvalidMerge);
  merge_subjects(c.p, c.director, b, a);
  EXPECT_EQ(c.s().forum.subject(b), nullptr);
  EXPECT_EQ(c.s().forum.discussion(d)->tags, (std::set{a}));
}

TEST(Forum, RandomCurationKeepsThreeRootedForest) {
  SeededCourse c;
  const auto st = oracle::churn_taxonomy(c.p, c.groups[0].tech_tutor, c.director, 500, 7);
  EXPECT_GT(st.proposals, 100u);
  EXPECT_GT(st.merges, 20u);
  EXPECT_EQ(oracle::taxonomy_defect(c.s().forum), "");
  EXPECT_EQ(c.s().forum.structure_violation(), std::nullopt);
}

TEST(Forum, SearchMatchesOracleOnRandomCorpora) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SeededCourse c;
    oracle::churn_taxonomy(c.p, c.groups[0].tech_tutor, c.director, 60, seed);
    std::vector<ActorId> tutors;
    for (const auto& g : c.groups) tutors.insert(tutors.end(), {g.tech_tutor, g.mgmt_tutor});
    oracle::build_corpus(c.p, tutors, 50, seed,
                         [&](std::uint64_t s) { c.clock->advance(std::chrono::seconds(s)); });
    EXPECT_EQ(oracle::search_disagreements(c.p, c.director, 200, seed), 0u) << "seed " << seed;
  }
}

TEST(Contracts, LockedWhileTheCourseRuns) {
  SeededCourse c(1, 3, false);
  const ActorId s = c.groups[0].members[1];
  EXPECT_EQ(init_learning_contract(c.p, s, s, answers()).status, ContractStatus::Active);
  EXPECT_ERROR(init_learning_contract(c.p, s, s, answers("y")), ErrorCode::ContractLocked);
  EXPECT_ERROR(revise_learning_contract(c.p, s, s, answers("y"), {}), ErrorCode::ContractLocked);
  core::advance_course(c.p, c.director);
  EXPECT_ERROR(revise_learning_contract(c.p, s, s, answers("y"), {}), ErrorCode::ContractLocked);
  EXPECT_ERROR(init_learning_contract(c.p, c.groups[0].leader, s, answers()), ErrorCode::ContractLocked);
  ContractAnswers blank = answers();
  blank[3].clear();
  EXPECT_ERROR(init_learning_contract(c.p, c.groups[0].leader, c.groups[0].leader, blank),
               ErrorCode::InvalidAnswers);
  EXPECT_ERROR(init_learning_contract(c.p, s, c.groups[0].leader, answers()), ErrorCode::Forbidden);
}

TEST(Contracts, RevisionAfterClosure) {
  SeededCourse c(1, 3);
  const ActorId s = c.groups[0].members[1];
  init_learning_contract(c.p, s, s, answers());
  write_student_post(c.p, s, s, "what I learned");
  const Seq post = c.p.last_seq();
  core::record_time_entry(c.p, s, s, make_date(2025, 11, 3), 1);
  const Seq time_seq = c.p.last_seq();
  c.close();

  EXPECT_ERROR(revise_learning_contract(c.p, s, s, answers("y"), {time_seq}),
               ErrorCode::UnknownEventSeq);
  EXPECT_ERROR(revise_learning_contract(c.p, s, s, answers("y"), {c.p.last_seq() + 5}),
               ErrorCode::UnknownEventSeq);
  EXPECT_ERROR(revise_learning_contract(c.p, c.groups[0].leader, s, answers("y"), {post}),
               ErrorCode::Forbidden);
  EXPECT_ERROR(revise_learning_contract(c.p, c.groups[0].leader, c.groups[0].leader, answers(), {}),
               ErrorCode::UnknownContract);
  const auto& rev = revise_learning_contract(c.p, s, s, answers("y"), {post});
  EXPECT_EQ(rev.status, ContractStatus::Revised);
  EXPECT_EQ(rev.answers, answers());
  ASSERT_TRUE(rev.revision);
  EXPECT_EQ(rev.revision->answers, answers("y"));
  EXPECT_EQ(rev.revision->linked_events, (std::vector<Seq>{post}));
  EXPECT_ERROR(init_learning_contract(c.p, s, s, answers()), ErrorCode::AlreadyExists);

  EXPECT_EQ(read_contract(c.s(), c.groups[0].tech_tutor, s)->owner_id, s);
  EXPECT_EQ(read_contract(c.s(), s, c.groups[0].leader), nullptr);
}
