#include "meshat/state.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace meshat {

namespace {

template <typename Map, typename Key>
auto find_ptr(const Map& m, const Key& k) -> const typename Map::mapped_type* {
  auto it = m.find(k);
  return it == m.end() ? nullptr : &it->second;
}

struct Applier {
  State& s;
  const Event& e;

  void operator()(const payload::CourseCreated& p) {
    s.course = Course{"c1", p.name, p.calendar, CourseStatus::Setup, e.timestamp};
  }

  void operator()(const payload::CourseAdvanced& p) { s.course->status = p.to; }

  void operator()(const payload::ActorRegistered& p) {
    s.actors[p.id] = Actor{p.id, p.name, p.role, std::nullopt};
    s.next_actor = std::max(s.next_actor, p.id.value + 1);
    if (is_student(p.role)) s.blogs[BlogOwner{p.id}] = Blog{BlogOwner{p.id}, {}};
  }

  void operator()(const payload::GroupCreated& p) {
    s.groups[p.id] = ProjectGroup{p.id,     p.name,           p.members, p.leader,
                                  p.technical_tutor, p.management_tutor, p.subject};
    s.next_group = std::max(s.next_group, p.id.value + 1);
    for (auto m : p.members) s.actors.at(m).group_id = p.id;
    s.actors.at(p.leader).role = Role::ProjectLeader;
    s.actors.at(p.technical_tutor).group_id = p.id;
    s.actors.at(p.management_tutor).group_id = p.id;
    s.blogs[BlogOwner{p.id}] = Blog{BlogOwner{p.id}, {}};
    s.forum.add_subject(p.progress_subject, s.forum.root_subject(TaxonomyRoot::GroupProgress),
                        p.name, SubjectStatus::Seed);
  }

  void operator()(const payload::TaskUpdate& p) {
    const Date today = date_of(e.timestamp);
    if (p.created) {
      Task t;
      t.id = p.task;
      t.group_id = p.group;
      s.tasks[p.task] = std::move(t);
      s.next_task = std::max(s.next_task, p.task.value + 1);
    }
    Task& t = s.tasks.at(p.task);
    if (p.title) t.title = *p.title;
    if (p.planned_start) t.planned_start = *p.planned_start;
    if (p.planned_end) t.planned_end = *p.planned_end;
    if (p.dependencies) t.dependency_ids = *p.dependencies;
    if (p.assignee) {
      if (!t.original_assignee_id) t.original_assignee_id = *p.assignee;
      t.assignee_id = *p.assignee;
    }
    const TaskStatus status = p.status.value_or(t.status);
    if (p.created || status != t.status) {
      t.status = status;
      t.status_history.push_back(StatusChange{e.timestamp, status});
      if (status != TaskStatus::Planned && !t.actual_start) t.actual_start = today;
      if (status == TaskStatus::Done) t.actual_end = today;
    }
  }

  void operator()(const payload::TimeEntry&) {}

  void operator()(const payload::FrameOfMind& p) {
    s.frames_of_mind[{p.student, p.period}] = p.score;
  }

  void operator()(const payload::DeliverableCreated& p) {
    s.deliverables[p.id] = Deliverable{p.id, p.group, p.title, p.due, {}, {}, {}, 0};
    s.next_deliverable = std::max(s.next_deliverable, p.id.value + 1);
  }

  void operator()(const payload::DeliverableSubmit& p) {
    s.deliverables.at(p.id).submitted_at = e.timestamp;
  }

  void operator()(const payload::DeliverableAccept& p) {
    auto& d = s.deliverables.at(p.id);
    d.accepted_at = e.timestamp;
    d.accepted_by = e.actor_id;
  }

  void operator()(const payload::DeliverableComment& p) { ++s.deliverables.at(p.id).comment_count; }

  void operator()(const payload::SkillUpdate& p) {
    auto& items = s.skills[p.group];
    auto it = std::find_if(items.begin(), items.end(),
                           [&](const SkillItem& i) { return i.text == p.skill; });
    if (it == items.end())
      items.push_back(SkillItem{p.skill, p.done});
    else
      it->done = p.done;
  }

  void operator()(const payload::BlogPost& p) {
    s.posts[p.id] = BlogPost{p.id, p.blog, e.actor_id, p.body, e.timestamp, p.status, {}};
    s.blogs.at(p.blog).posts.push_back(p.id);
    s.next_post = std::max(s.next_post, p.id.value + 1);
  }

  void operator()(const payload::BlogConfirm& p) {
    auto& post = s.posts.at(p.id);
    post.status = PostStatus::Published;
    post.published_by = e.actor_id;
  }

  void operator()(const payload::ForumMessage& p) {
    ForumMessage msg{e.actor_id, p.body, e.timestamp, e.seq};
    if (p.opens)
      s.forum.open(p.discussion, p.title, e.actor_id, p.tags, std::move(msg));
    else
      s.forum.reply(p.discussion, std::move(msg));
  }

  void operator()(const payload::TaxonomyUpdate& p) {
    switch (p.op) {
      case payload::TaxonomyOp::Propose:
        s.forum.add_subject(p.subject, *p.parent, p.label, SubjectStatus::Proposed);
        break;
      case payload::TaxonomyOp::Rename:
        s.forum.rename(p.subject, p.label);
        break;
      case payload::TaxonomyOp::Merge:
        s.forum.merge(p.subject, *p.target);
        break;
    }
  }

  void operator()(const payload::SelfReport& p) { s.self_reports[{p.student, p.period}] = p.items; }

  void operator()(const payload::Evaluation& p) {
    auto& ev = s.evaluations[p.group];
    ev.group_id = p.group;
    if (p.student)
      ev.adjustments[*p.student] = p.value;
    else
      ev.group_grade = p.value;
  }

  void operator()(const payload::ContractUpdate& p) {
    if (!p.revision) {
      s.contracts[p.owner] = LearningContract{p.owner, p.answers, ContractStatus::Active, {}};
      return;
    }
    auto& c = s.contracts.at(p.owner);
    c.status = ContractStatus::Revised;
    c.revision = ContractRevision{p.answers, p.linked_events, e.timestamp};
  }
};

}  // namespace

const Actor* State::actor(ActorId id) const { return find_ptr(actors, id); }
const ProjectGroup* State::group(GroupId id) const { return find_ptr(groups, id); }
const Task* State::task(TaskId id) const { return find_ptr(tasks, id); }
const Deliverable* State::deliverable(DeliverableId id) const { return find_ptr(deliverables, id); }
const BlogPost* State::post(PostId id) const { return find_ptr(posts, id); }

std::optional<GroupId> State::group_of(ActorId id) const {
  const auto* a = actor(id);
  return a ? a->group_id : std::nullopt;
}

std::size_t State::student_count() const {
  return static_cast<std::size_t>(std::count_if(
      actors.begin(), actors.end(), [](const auto& kv) { return is_student(kv.second.role); }));
}

void apply(State& state, const Event& event) {
  std::visit(Applier{state, event}, event.payload);
  state.last_seq = event.seq;
}

State replay(std::span<const Event> log) {
  State s;
  for (const auto& e : log) apply(s, e);
  return s;
}

namespace {

bool has_cycle(const State& s, GroupId group) {
  // Iterative three-colour DFS over the group's dependency graph.
  std::map<TaskId, int> colour;
  for (const auto& [id, t] : s.tasks) {
    if (t.group_id != group || colour[id] != 0) continue;
    std::vector<std::pair<TaskId, bool>> stack{{id, false}};
    while (!stack.empty()) {
      auto [cur, leaving] = stack.back();
      stack.pop_back();
      if (leaving) {
        colour[cur] = 2;
        continue;
      }
      if (colour[cur] == 2) continue;
      colour[cur] = 1;
      stack.push_back({cur, true});
      const Task* t2 = s.task(cur);
      if (!t2) continue;
      for (auto dep : t2->dependency_ids) {
        if (colour[dep] == 1) return true;
        if (colour[dep] == 0) stack.push_back({dep, false});
      }
    }
  }
  return false;
}

}  // namespace

std::vector<std::string> invariant_violations(const State& s) {
  std::vector<std::string> out;
  auto fail = [&](std::string msg) { out.push_back(std::move(msg)); };

  if (s.course) {
    const auto& cal = s.course->calendar;
    if (cal.size() != 4) fail("course calendar must have four phases");
    for (std::size_t i = 0; i < cal.size(); ++i) {
      if (cal[i].phase != static_cast<Phase>(i)) fail("phase order mismatch");
      if (!(cal[i].start < cal[i].end)) fail("phase window must have start < end");
      if (i > 0 && !(cal[i - 1].end < cal[i].start)) fail("phase windows overlap");
    }
  }

  const bool roster_fixed = s.course && s.course->status != CourseStatus::Setup;
  for (const auto& [id, a] : s.actors) {
    if (!is_group_scoped(a.role) && a.group_id) fail(id.str() + " must not belong to a group");
    if (roster_fixed && is_group_scoped(a.role) && !a.group_id)
      fail(id.str() + " must belong to a group");
    if (a.group_id && !s.group(*a.group_id)) fail(id.str() + " references an unknown group");
  }

  for (const auto& [gid, g] : s.groups) {
    if (!g.member_ids.contains(g.leader_id)) fail(gid.str() + ": leader is not a member");
    if (g.member_ids.size() < 2) fail(gid.str() + ": fewer than two members");
    if (g.technical_tutor_id == g.management_tutor_id) fail(gid.str() + ": tutors not distinct");
    if (g.has_member(g.technical_tutor_id) || g.has_member(g.management_tutor_id))
      fail(gid.str() + ": a tutor is a member");
    for (auto m : g.member_ids) {
      const auto* a = s.actor(m);
      if (!a || !is_student(a->role) || a->group_id != gid)
        fail(gid.str() + ": inconsistent member " + m.str());
    }
    if (const auto* l = s.actor(g.leader_id); !l || l->role != Role::ProjectLeader)
      fail(gid.str() + ": leader lacks the ProjectLeader role");
    if (has_cycle(s, gid)) fail(gid.str() + ": task dependency cycle");
  }

  for (const auto& [tid, t] : s.tasks) {
    if (t.actual_start && t.actual_end && *t.actual_end < *t.actual_start)
      fail(tid.str() + ": actual_end before actual_start");
    for (auto dep : t.dependency_ids) {
      const auto* d = s.task(dep);
      if (!d || d->group_id != t.group_id) fail(tid.str() + ": dependency outside its group");
    }
    if (t.status_history.empty() || t.status_history.back().status != t.status)
      fail(tid.str() + ": status history disagrees with status");
  }

  for (const auto& [did, d] : s.deliverables) {
    if (d.accepted_at && (!d.submitted_at || *d.accepted_at < *d.submitted_at))
      fail(did.str() + ": accepted without prior submission");
  }

  if (s.blogs.size() != s.student_count() + s.groups.size())
    fail("blog count differs from students + groups");
  for (const auto& [pid, p] : s.posts) {
    if (const auto* gid = std::get_if<GroupId>(&p.blog)) {
      const auto* g = s.group(*gid);
      if (p.status == PostStatus::Published && (!g || p.published_by != g->leader_id))
        fail(pid.str() + ": group post published by someone other than the leader");
    } else {
      const auto owner = std::get<ActorId>(p.blog);
      if (p.author_id != owner || p.status != PostStatus::Published)
        fail(pid.str() + ": student post must be an owner-authored published post");
    }
  }

  if (auto v = s.forum.structure_violation()) fail("forum: " + *v);
  for (const auto& [did, d] : s.forum.discussions()) {
    for (const auto& m : d.messages) {
      const auto* a = s.actor(m.author_id);
      if (!a || is_student(a->role)) fail(did.str() + ": message by a non tutor-side actor");
    }
  }

  const bool closed = s.course && s.course->status == CourseStatus::Closed;
  for (const auto& [owner, c] : s.contracts) {
    if (!closed && c.status != ContractStatus::Active)
      fail(owner.str() + ": contract revised before course closure");
  }

  for (const auto& [gid, ev] : s.evaluations) {
    if (ev.group_grade && (*ev.group_grade < 0.0 || *ev.group_grade > kMaxGrade))
      fail(gid.str() + ": group grade out of range");
    for (const auto& [student, adj] : ev.adjustments)
      if (std::fabs(adj) > kMaxAdjustment) fail(student.str() + ": adjustment exceeds bound");
  }

  for (const auto& [key, score] : s.frames_of_mind)
    if (score < 1 || score > 5) fail(key.first.str() + ": frame of mind out of range");
  for (const auto& [key, items] : s.self_reports)
    for (const auto& it : items)
      if (it.response < 1 || it.response > 5) fail(key.first.str() + ": response out of range");

  return out;
}

}  // namespace meshat
