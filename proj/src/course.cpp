#include "meshat/course.hpp"

#include <cmath>
#include <deque>

#include "meshat/error.hpp"
#include "meshat/policy.hpp"

namespace meshat::core {

using policy::Action;
using policy::Resource;
using policy::ResourceClass;

const Course& require_course(const State& s) {
  if (!s.course) throw Error(ErrorCode::NoCourse, "no course has been created");
  return *s.course;
}

void require_running(const State& s) {
  if (require_course(s).status != CourseStatus::Running)
    throw Error(ErrorCode::CourseNotRunning, "the course is not running");
}

namespace {

void require_status(const State& s, std::initializer_list<CourseStatus> allowed) {
  const auto status = require_course(s).status;
  for (auto a : allowed)
    if (a == status) return;
  throw Error(ErrorCode::CourseNotRunning,
              "operation not available while the course is " + std::string(to_string(status)));
}

void require_setup(const State& s) {
  if (require_course(s).status != CourseStatus::Setup)
    throw Error(ErrorCode::RosterLocked, "the roster is fixed once the course has started");
}

const ProjectGroup& require_group(const State& s, GroupId g) {
  const auto* group = s.group(g);
  if (!group) throw Error(ErrorCode::UnknownGroup, "unknown group " + g.str());
  return *group;
}

const Deliverable& require_deliverable(const State& s, DeliverableId id) {
  const auto* d = s.deliverable(id);
  if (!d) throw Error(ErrorCode::UnknownDeliverable, "unknown deliverable " + id.str());
  return *d;
}

void forbid(const std::string& why, policy::Rule rule) {
  throw Error(ErrorCode::Forbidden, why, policy::rule_id(rule));
}

void check_assignee(const ProjectGroup& g, std::optional<ActorId> assignee) {
  if (assignee && !g.has_member(*assignee))
    throw Error(ErrorCode::BadRequest, "assignee " + assignee->str() + " is not a group member");
}

// Would giving `task` the dependency set `deps` close a cycle?
bool creates_cycle(const State& s, TaskId task, const std::set<TaskId>& deps) {
  std::set<TaskId> seen;
  std::deque<TaskId> pending(deps.begin(), deps.end());
  while (!pending.empty()) {
    const TaskId cur = pending.front();
    pending.pop_front();
    if (cur == task) return true;
    if (!seen.insert(cur).second) continue;
    if (const auto* t = s.task(cur))
      for (auto d : t->dependency_ids) pending.push_back(d);
  }
  return false;
}

void check_dependencies(const State& s, GroupId group, TaskId task, const std::set<TaskId>& deps) {
  if (deps.contains(task)) throw Error(ErrorCode::CycleDetected, task.str() + " depends on itself");
  for (auto d : deps) {
    const auto* t = s.task(d);
    if (!t || t->group_id != group)
      throw Error(ErrorCode::UnknownTask, "unknown dependency " + d.str());
  }
  if (creates_cycle(s, task, deps))
    throw Error(ErrorCode::CycleDetected, "dependencies of " + task.str() + " would form a cycle");
}

}  // namespace

void validate_calendar(const std::vector<PhaseWindow>& calendar) {
  if (calendar.size() != 4)
    throw Error(ErrorCode::InvalidCalendar, "a course has exactly four phases");
  for (std::size_t i = 0; i < calendar.size(); ++i) {
    const auto& w = calendar[i];
    if (w.phase != static_cast<Phase>(i))
      throw Error(ErrorCode::InvalidCalendar, "phases must be listed in order");
    if (!(w.start < w.end))
      throw Error(ErrorCode::InvalidCalendar,
                  std::string(to_string(w.phase)) + " must start before it ends");
    if (i > 0 && !(calendar[i - 1].end < w.start))
      throw Error(ErrorCode::InvalidCalendar,
                  std::string(to_string(w.phase)) + " overlaps the previous phase");
  }
}

const Course& create_course(Platform& p, std::string name, std::vector<PhaseWindow> calendar) {
  if (p.state().course) throw Error(ErrorCode::CourseExists, "a course already exists");
  validate_calendar(calendar);
  p.append(ActorId{}, payload::CourseCreated{std::move(name), std::move(calendar)});
  return *p.state().course;
}

ActorId register_actor(Platform& p, std::string name, Role role) {
  require_setup(p.state());
  if (name.empty()) throw Error(ErrorCode::BadRequest, "actor name is empty");
  if (role == Role::ProjectLeader)
    throw Error(ErrorCode::IncompatibleRole, "leaders are designated at group creation");
  const ActorId id{p.state().next_actor};
  p.append(ActorId{}, payload::ActorRegistered{id, std::move(name), role});
  return id;
}

const ProjectGroup& create_group(Platform& p, const GroupSpec& spec) {
  const State& s = p.state();
  require_setup(s);
  if (!spec.members.contains(spec.leader))
    throw Error(ErrorCode::LeaderNotMember, "the leader must be a member of the group");
  if (spec.technical_tutor == spec.management_tutor)
    throw Error(ErrorCode::DuplicateTutor, "the two tutors must be distinct actors");
  if (spec.members.contains(spec.technical_tutor) || spec.members.contains(spec.management_tutor))
    throw Error(ErrorCode::TutorIsMember, "a tutor cannot be a member of the group");
  if (spec.members.size() < 2)
    throw Error(ErrorCode::InvalidGroup, "a group needs at least two members");

  auto require_actor = [&](ActorId id) -> const Actor& {
    const auto* a = s.actor(id);
    if (!a) throw Error(ErrorCode::UnknownActor, "unknown actor " + id.str());
    if (a->group_id)
      throw Error(ErrorCode::AlreadyGrouped, id.str() + " already belongs to a group");
    return *a;
  };
  for (auto m : spec.members)
    if (require_actor(m).role != Role::Student)
      throw Error(ErrorCode::IncompatibleRole, m.str() + " is not a student");
  if (require_actor(spec.technical_tutor).role != Role::TechnicalTutor)
    throw Error(ErrorCode::IncompatibleRole, spec.technical_tutor.str() + " is not a technical tutor");
  if (require_actor(spec.management_tutor).role != Role::ManagementTutor)
    throw Error(ErrorCode::IncompatibleRole,
                spec.management_tutor.str() + " is not a management tutor");
  if (spec.name.empty()) throw Error(ErrorCode::BadRequest, "group name is empty");
  s.forum.check_propose(s.forum.root_subject(TaxonomyRoot::GroupProgress), spec.name);

  const GroupId id{s.next_group};
  p.append(ActorId{},
           payload::GroupCreated{id, spec.name, spec.members, spec.leader, spec.technical_tutor,
                                 spec.management_tutor, spec.subject, s.forum.next_subject_id()});
  return *p.state().group(id);
}

const Course& advance_course(Platform& p, ActorId actor) {
  const State& s = p.state();
  const Course& course = require_course(s);
  const auto* a = s.actor(actor);
  if (!a) throw Error(ErrorCode::UnknownActor, "unknown actor " + actor.str());
  if (a->role != Role::Director) forbid("only the director advances the course", policy::Rule::R8);
  if (course.status == CourseStatus::Closed)
    throw Error(ErrorCode::AlreadyClosed, "the course is already closed");
  if (course.status == CourseStatus::Setup) {
    for (const auto& [id, other] : s.actors)
      if (is_group_scoped(other.role) && !other.group_id)
        throw Error(ErrorCode::InvalidRoster, id.str() + " has not been assigned to a group");
  }
  const auto next =
      course.status == CourseStatus::Setup ? CourseStatus::Running : CourseStatus::Closed;
  p.append(actor, payload::CourseAdvanced{next});
  return *p.state().course;
}

const Task& add_task(Platform& p, ActorId actor, GroupId group, const TaskFields& fields) {
  const State& s = p.state();
  require_status(s, {CourseStatus::Setup, CourseStatus::Running});
  const ProjectGroup& g = require_group(s, group);
  policy::require(s, actor, Action::Write, Resource::group_scoped(ResourceClass::Task, group));
  const TaskId id{s.next_task};
  check_dependencies(s, group, id, fields.dependencies);
  if (fields.title.empty()) throw Error(ErrorCode::BadRequest, "task title is empty");
  if (fields.planned_end < fields.planned_start)
    throw Error(ErrorCode::OutOfRange, "planned end precedes planned start");
  check_assignee(g, fields.assignee);

  payload::TaskUpdate u;
  u.task = id;
  u.group = group;
  u.created = true;
  u.title = fields.title;
  u.assignee = fields.assignee;
  u.dependencies = fields.dependencies;
  u.status = fields.status;
  u.planned_start = fields.planned_start;
  u.planned_end = fields.planned_end;
  p.append(actor, std::move(u));
  return *p.state().task(id);
}

const Task& update_task(Platform& p, ActorId actor, GroupId group, TaskId task,
                        const TaskChanges& changes) {
  const State& s = p.state();
  require_status(s, {CourseStatus::Setup, CourseStatus::Running});
  const ProjectGroup& g = require_group(s, group);
  policy::require(s, actor, Action::Write, Resource::group_scoped(ResourceClass::Task, group));
  const Task* t = s.task(task);
  if (!t || t->group_id != group) throw Error(ErrorCode::UnknownTask, "unknown task " + task.str());
  if (changes.dependencies) check_dependencies(s, group, task, *changes.dependencies);
  if (changes.title && changes.title->empty())
    throw Error(ErrorCode::BadRequest, "task title is empty");
  if (changes.status && *changes.status < t->status)
    throw Error(ErrorCode::InvalidTransition,
                std::string("task cannot go from ") + std::string(to_string(t->status)) +
                    " back to " + std::string(to_string(*changes.status)));
  const Date start = changes.planned_start.value_or(t->planned_start);
  const Date end = changes.planned_end.value_or(t->planned_end);
  if (end < start) throw Error(ErrorCode::OutOfRange, "planned end precedes planned start");
  check_assignee(g, changes.assignee);

  payload::TaskUpdate u;
  u.task = task;
  u.group = group;
  u.title = changes.title;
  u.assignee = changes.assignee;
  u.dependencies = changes.dependencies;
  u.status = changes.status;
  u.planned_start = changes.planned_start;
  u.planned_end = changes.planned_end;
  p.append(actor, std::move(u));
  return *p.state().task(task);
}

const Event& record_time_entry(Platform& p, ActorId actor, ActorId student, Date date,
                               double hours) {
  const State& s = p.state();
  require_running(s);
  policy::require(s, actor, Action::Write,
                  Resource::actor_scoped(ResourceClass::TimeEntryStream, student));
  if (!s.group_of(student)) forbid(student.str() + " does not belong to a group", policy::Rule::R8);
  if (!(hours >= 0.0 && hours <= 24.0))
    throw Error(ErrorCode::OutOfRange, "hours must lie in [0, 24]");
  return p.append(actor, payload::TimeEntry{student, date, hours});
}

const Deliverable& create_deliverable(Platform& p, ActorId tutor, GroupId group,
                                      std::string title, Date due) {
  const State& s = p.state();
  require_status(s, {CourseStatus::Setup, CourseStatus::Running});
  const ProjectGroup& g = require_group(s, group);
  policy::require(s, tutor, Action::Write,
                  Resource::group_scoped(ResourceClass::Deliverable, group));
  if (!g.has_tutor(tutor)) forbid("only the group's tutors define deliverables", policy::Rule::R4);
  if (title.empty()) throw Error(ErrorCode::BadRequest, "deliverable title is empty");
  const DeliverableId id{s.next_deliverable};
  p.append(tutor, payload::DeliverableCreated{id, group, std::move(title), due});
  return *p.state().deliverable(id);
}

const Deliverable& submit_deliverable(Platform& p, ActorId member, DeliverableId id) {
  const State& s = p.state();
  require_running(s);
  const Deliverable& d = require_deliverable(s, id);
  policy::require(s, member, Action::Write,
                  Resource::group_scoped(ResourceClass::Deliverable, d.group_id));
  if (!require_group(s, d.group_id).has_member(member))
    forbid("only group members submit deliverables", policy::Rule::R1);
  if (d.submitted_at) throw Error(ErrorCode::AlreadySubmitted, id.str() + " was already submitted");
  p.append(member, payload::DeliverableSubmit{id});
  return *p.state().deliverable(id);
}

const Deliverable& accept_deliverable(Platform& p, ActorId tutor, DeliverableId id) {
  const State& s = p.state();
  require_running(s);
  const Deliverable& d = require_deliverable(s, id);
  policy::require(s, tutor, Action::Write,
                  Resource::group_scoped(ResourceClass::Deliverable, d.group_id));
  if (!require_group(s, d.group_id).has_tutor(tutor))
    forbid("only the group's tutors accept deliverables", policy::Rule::R4);
  if (!d.submitted_at) throw Error(ErrorCode::NotSubmitted, id.str() + " has not been submitted");
  if (d.accepted_at) throw Error(ErrorCode::AlreadyAccepted, id.str() + " was already accepted");
  p.append(tutor, payload::DeliverableAccept{id});
  return *p.state().deliverable(id);
}

const Deliverable& comment_deliverable(Platform& p, ActorId actor, DeliverableId id,
                                       std::string body) {
  const State& s = p.state();
  require_running(s);
  const Deliverable& d = require_deliverable(s, id);
  policy::require(s, actor, Action::Write,
                  Resource::group_scoped(ResourceClass::Deliverable, d.group_id));
  const ProjectGroup& g = require_group(s, d.group_id);
  if (!g.has_tutor(actor) && g.leader_id != actor)
    forbid("only tutors and the leader comment deliverables", policy::Rule::R4);
  p.append(actor, payload::DeliverableComment{id, std::move(body)});
  return *p.state().deliverable(id);
}

void set_skill(Platform& p, ActorId leader, GroupId group, std::string skill, bool done) {
  const State& s = p.state();
  require_status(s, {CourseStatus::Setup, CourseStatus::Running});
  require_group(s, group);
  policy::require(s, leader, Action::Write,
                  Resource::group_scoped(ResourceClass::GroupDashboard, group));
  if (skill.empty()) throw Error(ErrorCode::BadRequest, "skill text is empty");
  p.append(leader, payload::SkillUpdate{group, std::move(skill), done});
}

}  // namespace meshat::core
