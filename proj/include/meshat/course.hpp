#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "meshat/platform.hpp"
#include "meshat/types.hpp"

// Course lifecycle, roster, tasks, deliverables and raw activity entry.
namespace meshat::core {

// Throws Error(InvalidCalendar) unless there are exactly four windows in
// phase order, each with start < end, and strictly after the previous one.
void validate_calendar(const std::vector<PhaseWindow>& calendar);

const Course& create_course(Platform& p, std::string name, std::vector<PhaseWindow> calendar);

// Roster management is only possible while the course is in Setup.
ActorId register_actor(Platform& p, std::string name, Role role);

struct GroupSpec {
  std::string name;
  std::set<ActorId> members;  // must contain the leader
  ActorId leader;
  ActorId technical_tutor;
  ActorId management_tutor;
  std::string subject;
};

const ProjectGroup& create_group(Platform& p, const GroupSpec& spec);

// Director only: Setup -> Running -> Closed.
const Course& advance_course(Platform& p, ActorId actor);

struct TaskFields {
  std::string title;
  std::optional<ActorId> assignee;
  std::set<TaskId> dependencies;
  Date planned_start{};
  Date planned_end{};
  TaskStatus status{TaskStatus::Planned};
};

struct TaskChanges {
  std::optional<std::string> title;
  std::optional<ActorId> assignee;
  std::optional<std::set<TaskId>> dependencies;
  std::optional<TaskStatus> status;
  std::optional<Date> planned_start;
  std::optional<Date> planned_end;
};

const Task& add_task(Platform& p, ActorId actor, GroupId group, const TaskFields& fields);
const Task& update_task(Platform& p, ActorId actor, GroupId group, TaskId task,
                        const TaskChanges& changes);

// `actor` is the caller; only the student may enter their own time.
const Event& record_time_entry(Platform& p, ActorId actor, ActorId student, Date date,
                               double hours);

const Deliverable& create_deliverable(Platform& p, ActorId tutor, GroupId group,
                                      std::string title, Date due);
const Deliverable& submit_deliverable(Platform& p, ActorId member, DeliverableId id);
const Deliverable& accept_deliverable(Platform& p, ActorId tutor, DeliverableId id);
const Deliverable& comment_deliverable(Platform& p, ActorId actor, DeliverableId id,
                                       std::string body);

// Leader-maintained skills checklist shown on the group dashboard.
void set_skill(Platform& p, ActorId leader, GroupId group, std::string skill, bool done);

// Throws Error(NoCourse / CourseNotRunning).
const Course& require_course(const State& s);
void require_running(const State& s);

}  // namespace meshat::core
