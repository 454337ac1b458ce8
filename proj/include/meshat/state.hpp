#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "meshat/events.hpp"
#include "meshat/forum.hpp"
#include "meshat/types.hpp"

namespace meshat {

// Materialized view of the event log. Only `apply` mutates it, so replaying
// a log from scratch reproduces the state exactly.
struct State {
  std::optional<Course> course;
  std::map<ActorId, Actor> actors;
  std::map<GroupId, ProjectGroup> groups;
  std::map<TaskId, Task> tasks;
  std::map<DeliverableId, Deliverable> deliverables;
  std::map<GroupId, std::vector<SkillItem>> skills;
  std::map<BlogOwner, Blog> blogs;
  std::map<PostId, BlogPost> posts;
  Forum forum = Forum::seeded();
  std::map<ActorId, LearningContract> contracts;
  std::map<std::pair<ActorId, IsoWeek>, int> frames_of_mind;
  std::map<std::pair<ActorId, IsoWeek>, std::vector<SelfReportItem>> self_reports;
  std::map<GroupId, GroupEvaluation> evaluations;
  Seq last_seq{0};

  std::uint64_t next_actor{1};
  std::uint64_t next_group{1};
  std::uint64_t next_task{1};
  std::uint64_t next_deliverable{1};
  std::uint64_t next_post{1};

  const Actor* actor(ActorId id) const;
  const ProjectGroup* group(GroupId id) const;
  const Task* task(TaskId id) const;
  const Deliverable* deliverable(DeliverableId id) const;
  const BlogPost* post(PostId id) const;

  // Group an actor belongs to, as member or tutor.
  std::optional<GroupId> group_of(ActorId id) const;
  std::size_t student_count() const;

  friend bool operator==(const State&, const State&) = default;
};

void apply(State& state, const Event& event);
State replay(std::span<const Event> log);

// Domain invariants that must hold after any prefix of any valid log. Returns
// one message per violation.
std::vector<std::string> invariant_violations(const State& state);

}  // namespace meshat
