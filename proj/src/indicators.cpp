#include "meshat/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "meshat/course.hpp"
#include "meshat/error.hpp"
#include "meshat/policy.hpp"

namespace meshat::indicators {

using policy::Action;
using policy::Resource;
using policy::ResourceClass;

// Questionnaire -------------------------------------------------------------

Questionnaire Questionnaire::defaults() {
  Questionnaire q;
  q.prompts[Dimension::Cognition] = {"Activating prior knowledge", "Planning",
                                     "Creating sub-goals", "Learning strategies"};
  q.prompts[Dimension::Metacognition] = {"Feeling of knowing", "Judgment of learning",
                                         "Content evaluation"};
  q.prompts[Dimension::Motivation] = {"Self-efficacy", "Task value", "Interest", "Effort"};
  q.prompts[Dimension::Behaviour] = {"Engaging in help-seeking behaviour",
                                     "Modifying learning conditions",
                                     "Handling task difficulties and demands"};
  return q;
}

Questionnaire Questionnaire::from_json_text(std::string_view text) {
  auto j = nlohmann::json::parse(text.begin(), text.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw Error(ErrorCode::InvalidConfig, "questionnaire must be a JSON object");
  Questionnaire q;
  for (auto d : kAllDimensions) {
    const std::string key(to_string(d));
    if (!j.contains(key) || !j[key].is_array() || j[key].empty())
      throw Error(ErrorCode::InvalidConfig, "questionnaire needs prompts for " + key);
    for (const auto& prompt : j[key]) {
      if (!prompt.is_string() || prompt.get<std::string>().empty())
        throw Error(ErrorCode::InvalidConfig, "prompts must be non-empty texts");
      q.prompts[d].push_back(prompt.get<std::string>());
    }
  }
  if (j.size() != kAllDimensions.size())
    throw Error(ErrorCode::InvalidConfig, "questionnaire dimensions are fixed");
  return q;
}

bool Questionnaire::contains(Dimension d, std::string_view prompt) const {
  auto it = prompts.find(d);
  return it != prompts.end() &&
         std::find(it->second.begin(), it->second.end(), prompt) != it->second.end();
}

// Recording -----------------------------------------------------------------

namespace {

const Actor& require_student(const State& s, ActorId student) {
  const auto* a = s.actor(student);
  if (!a || !is_student(a->role))
    throw Error(ErrorCode::UnknownActor, "unknown student " + student.str());
  return *a;
}

}  // namespace

const Event& record_frame_of_mind(Platform& p, ActorId actor, ActorId student, IsoWeek period,
                                  int score) {
  const State& s = p.state();
  core::require_running(s);
  require_student(s, student);
  policy::require(s, actor, Action::Write,
                  Resource::actor_scoped(ResourceClass::StudentMetacogDashboard, student));
  if (score < 1 || score > 5) throw Error(ErrorCode::OutOfRange, "frame of mind must be 1..5");
  return p.append(actor, payload::FrameOfMind{student, period, score});
}

const Event& record_self_report(Platform& p, ActorId actor, ActorId student, IsoWeek period,
                                std::vector<SelfReportItem> items,
                                const Questionnaire& questionnaire) {
  const State& s = p.state();
  core::require_running(s);
  require_student(s, student);
  policy::require(s, actor, Action::Write,
                  Resource::actor_scoped(ResourceClass::StudentMetacogDashboard, student));
  if (items.empty()) throw Error(ErrorCode::InvalidItem, "a self-report needs at least one item");
  for (const auto& it : items) {
    if (it.response < 1 || it.response > 5)
      throw Error(ErrorCode::OutOfRange, "responses must be 1..5");
    if (!questionnaire.contains(it.dimension, it.prompt))
      throw Error(ErrorCode::InvalidItem, "prompt '" + it.prompt + "' is not in the questionnaire");
  }
  return p.append(actor, payload::SelfReport{student, period, std::move(items)});
}

namespace {

void require_evaluation_window(const State& s) {
  const auto status = core::require_course(s).status;
  if (status == CourseStatus::Setup)
    throw Error(ErrorCode::CourseNotRunning, "evaluations start once the course runs");
}

}  // namespace

const GroupEvaluation& evaluate_group(Platform& p, ActorId tutor, GroupId group, double grade) {
  const State& s = p.state();
  require_evaluation_window(s);
  if (!s.group(group)) throw Error(ErrorCode::UnknownGroup, "unknown group " + group.str());
  policy::require(s, tutor, Action::Write,
                  Resource::group_scoped(ResourceClass::Evaluation, group));
  if (!(grade >= 0.0 && grade <= kMaxGrade))
    throw Error(ErrorCode::OutOfRange, "group grade must lie in [0, 20]");
  p.append(tutor, payload::Evaluation{group, std::nullopt, grade});
  return p.state().evaluations.at(group);
}

const GroupEvaluation& evaluate_student(Platform& p, ActorId tutor, ActorId student,
                                        double adjustment) {
  const State& s = p.state();
  require_evaluation_window(s);
  const Actor& a = require_student(s, student);
  if (!a.group_id) throw Error(ErrorCode::UnknownGroup, student.str() + " has no group");
  policy::require(s, tutor, Action::Write,
                  Resource::group_scoped(ResourceClass::Evaluation, *a.group_id));
  if (!(std::fabs(adjustment) <= kMaxAdjustment))
    throw Error(ErrorCode::AdjustmentOutOfRange, "adjustments lie within [-2, +2]");
  p.append(tutor, payload::Evaluation{*a.group_id, student, adjustment});
  return p.state().evaluations.at(*a.group_id);
}

// Shared log folds ----------------------------------------------------------

std::string_view to_string(DeliverableState s) {
  switch (s) {
    case DeliverableState::Pending: return "Pending";
    case DeliverableState::Submitted: return "Submitted";
    case DeliverableState::Accepted: return "Accepted";
  }
  return "?";
}

Ratio Ratio::of(std::size_t num, std::size_t den) {
  if (den == 0) return Ratio{1.0, true, num, den};
  const double v = static_cast<double>(num) / static_cast<double>(den);
  return Ratio{std::min(1.0, v), false, num, den};
}

namespace {

struct Roster {
  std::string name;
  std::set<ActorId> members;
};

Roster find_roster(std::span<const Event> log, GroupId group) {
  for (const auto& e : log)
    if (const auto* g = e.as<payload::GroupCreated>(); g && g->id == group)
      return Roster{g->name, g->members};
  throw Error(ErrorCode::UnknownGroup, "unknown group " + group.str());
}

struct DeliverableTrack {
  std::string title;
  Date due{};
  std::optional<Timestamp> submitted;
  std::optional<Timestamp> accepted;
};

struct TaskTrack {
  TaskStatus status{TaskStatus::Planned};
  std::optional<ActorId> assignee;
  std::set<TaskId> deps;
  bool reassigned{false};
  bool started{false};
  bool started_with_deps{false};
  bool deps_done_at_start{false};
  bool active_in_period{false};
  bool changed_in_period{false};
};

// Folds one group's tasks and deliverables.
struct GroupFold {
  GroupId group;
  std::map<TaskId, TaskTrack> tasks;
  std::map<DeliverableId, DeliverableTrack> deliverables;
  std::map<std::string, bool> skills_index;
  std::vector<SkillItem> skills;
  std::size_t submissions_in_period{0};
  std::size_t comments_in_period{0};

  void apply(const Event& e, bool in_period) {
    if (const auto* t = e.as<payload::TaskUpdate>(); t && t->group == group) {
      apply_task(*t, in_period);
    } else if (const auto* d = e.as<payload::DeliverableCreated>(); d && d->group == group) {
      deliverables[d->id] = DeliverableTrack{d->title, d->due, {}, {}};
    } else if (const auto* sub = e.as<payload::DeliverableSubmit>()) {
      if (auto it = deliverables.find(sub->id); it != deliverables.end()) {
        it->second.submitted = e.timestamp;
        if (in_period) ++submissions_in_period;
      }
    } else if (const auto* acc = e.as<payload::DeliverableAccept>()) {
      if (auto it = deliverables.find(acc->id); it != deliverables.end())
        it->second.accepted = e.timestamp;
    } else if (const auto* c = e.as<payload::DeliverableComment>()) {
      if (in_period && deliverables.contains(c->id)) ++comments_in_period;
    } else if (const auto* sk = e.as<payload::SkillUpdate>(); sk && sk->group == group) {
      auto it = std::find_if(skills.begin(), skills.end(),
                             [&](const SkillItem& i) { return i.text == sk->skill; });
      if (it == skills.end())
        skills.push_back(SkillItem{sk->skill, sk->done});
      else
        it->done = sk->done;
    }
  }

  void apply_task(const payload::TaskUpdate& u, bool in_period) {
    const bool all_deps_done_before = [&] {
      const auto& deps = u.dependencies ? *u.dependencies : tasks[u.task].deps;
      return std::all_of(deps.begin(), deps.end(), [&](TaskId d) {
        auto it = tasks.find(d);
        return it != tasks.end() && it->second.status == TaskStatus::Done;
      });
    }();
    TaskTrack& t = tasks[u.task];
    const TaskStatus before = t.status;
    if (u.dependencies) t.deps = *u.dependencies;
    if (u.assignee) {
      if (t.assignee && *t.assignee != *u.assignee) t.reassigned = true;
      t.assignee = *u.assignee;
    }
    const TaskStatus after = u.status.value_or(before);
    const bool changed = u.created || after != before;
    t.status = after;
    if (changed && in_period) {
      t.changed_in_period = true;
      if (after == TaskStatus::Active) t.active_in_period = true;
    }
    const bool starts = (u.created || before == TaskStatus::Planned) && after != TaskStatus::Planned;
    if (starts && !t.started) {
      t.started = true;
      t.started_with_deps = !t.deps.empty();
      t.deps_done_at_start = all_deps_done_before;
    }
  }

  // Called once between the pre-period and in-period passes.
  void enter_period() {
    for (auto& [id, t] : tasks)
      if (t.status == TaskStatus::Active) t.active_in_period = true;
  }
};

// Applies events before the period, then events inside it.
GroupFold fold_group(std::span<const Event> log, GroupId group, IsoWeek period) {
  GroupFold fold{group, {}, {}, {}, {}, 0, 0};
  const Timestamp begin = period.begin();
  const Timestamp end = period.end();
  for (const auto& e : log)
    if (e.timestamp < begin) fold.apply(e, false);
  fold.enter_period();
  for (const auto& e : log)
    if (e.timestamp >= begin && e.timestamp < end) fold.apply(e, true);
  return fold;
}

std::int64_t days_between(Date from, Date to) { return (to - from).count(); }

}  // namespace

ProjectDashboard compute_project_dashboard(std::span<const Event> log, GroupId group,
                                           IsoWeek period, std::optional<Date> today) {
  const Roster roster = find_roster(log, group);
  ProjectDashboard out;
  out.group = group;
  out.period = period;
  out.today = today.value_or(period.last_day());

  // Frame of mind: latest entry per member for the period.
  std::map<ActorId, int> frames;
  std::map<ActorId, MemberTime> time;
  for (auto m : roster.members) time[m] = MemberTime{m, 0.0, 0.0};
  for (const auto& e : log) {
    if (const auto* f = e.as<payload::FrameOfMind>()) {
      if (f->period == period && roster.members.contains(f->student)) frames[f->student] = f->score;
    } else if (const auto* t = e.as<payload::TimeEntry>()) {
      auto it = time.find(t->student);
      if (it == time.end()) continue;
      if (t->date <= period.last_day()) it->second.cumulative_hours += t->hours;
      if (period.contains(t->date)) it->second.period_hours += t->hours;
    }
  }
  if (!frames.empty()) {
    double sum = 0.0;
    for (const auto& [m, score] : frames) sum += score;
    out.frame_of_mind = sum / static_cast<double>(frames.size());
  }
  for (const auto& [m, mt] : time) {
    out.working_time.members.push_back(mt);
    out.working_time.period_total += mt.period_hours;
    out.working_time.cumulative_total += mt.cumulative_hours;
  }

  const GroupFold fold = fold_group(log, group, period);
  out.skills = fold.skills;
  for (const auto& [id, t] : fold.tasks) {
    switch (t.status) {
      case TaskStatus::Planned: ++out.tasks.planned; break;
      case TaskStatus::Active: ++out.tasks.active; break;
      case TaskStatus::Done: ++out.tasks.done; break;
    }
  }
  for (const auto& [id, d] : fold.deliverables) {
    DeliverableStatus st{id, d.title, d.due, DeliverableState::Pending, 0};
    if (d.accepted)
      st.state = DeliverableState::Accepted;
    else if (d.submitted)
      st.state = DeliverableState::Submitted;
    const Date reference = d.submitted ? date_of(*d.submitted) : out.today;
    st.delay_days = std::max<std::int64_t>(0, days_between(d.due, reference));
    out.total_delay_days += st.delay_days;
    out.deliverables.push_back(std::move(st));
  }
  return out;
}

TeamworkIndicators compute_teamwork_indicators(std::span<const Event> log, GroupId group,
                                               IsoWeek period) {
  const Roster roster = find_roster(log, group);
  TeamworkIndicators out;
  out.group = group;
  out.period = period;

  std::set<ActorId> active_members;
  for (const auto& e : log)
    if (period.contains(e.timestamp) && roster.members.contains(e.actor_id))
      active_members.insert(e.actor_id);
  out.to = Ratio::of(active_members.size(), roster.members.size());

  const GroupFold fold = fold_group(log, group, period);

  std::size_t due = 0, accepted = 0;
  for (const auto& [id, d] : fold.deliverables) {
    if (d.due > period.last_day()) continue;
    ++due;
    if (d.accepted) ++accepted;
  }
  out.activity_score = Ratio::of(accepted, due);

  std::size_t active = 0, assigned = 0, monitored = 0;
  std::size_t reassigned = 0, reassigned_done = 0;
  std::size_t with_deps = 0, coordinated = 0;
  for (const auto& [id, t] : fold.tasks) {
    if (t.active_in_period) {
      ++active;
      if (t.assignee) ++assigned;
      if (t.changed_in_period) ++monitored;
    }
    if (t.reassigned) {
      ++reassigned;
      if (t.status == TaskStatus::Done) ++reassigned_done;
    }
    if (t.started && t.started_with_deps) {
      ++with_deps;
      if (t.deps_done_at_start) ++coordinated;
    }
  }
  out.tl = Ratio::of(assigned, active);
  out.mo = Ratio::of(monitored, active);
  out.fe = Ratio::of(fold.comments_in_period, fold.submissions_in_period);
  out.ba = Ratio::of(reassigned_done, reassigned);
  out.co = Ratio::of(coordinated, with_deps);
  return out;
}

MetacognitiveProfile compute_metacognitive_profile(std::span<const Event> log, ActorId student) {
  bool known = false;
  std::map<IsoWeek, const std::vector<SelfReportItem>*> latest;
  for (const auto& e : log) {
    if (const auto* a = e.as<payload::ActorRegistered>(); a && a->id == student)
      known = is_student(a->role);
    else if (const auto* r = e.as<payload::SelfReport>(); r && r->student == student)
      latest[r->period] = &r->items;
  }
  if (!known) throw Error(ErrorCode::UnknownActor, "unknown student " + student.str());

  MetacognitiveProfile out;
  out.student = student;
  for (const auto& [period, items] : latest) {
    std::map<Dimension, std::pair<double, int>> acc;
    for (const auto& it : *items) {
      auto& [sum, n] = acc[it.dimension];
      sum += it.response;
      ++n;
    }
    DimensionScores scores;
    for (const auto& [d, sn] : acc) scores[d] = sn.first / sn.second;
    out.periods[period] = std::move(scores);
  }
  if (!out.periods.empty()) {
    const auto& [last_period, last_scores] = *out.periods.rbegin();
    auto prev = out.periods.find(last_period.previous());
    if (prev != out.periods.end()) {
      for (const auto& [d, score] : last_scores)
        if (auto it = prev->second.find(d); it != prev->second.end())
          out.trend[d] = score - it->second;
    }
  }
  return out;
}

LearningMonitoringView compute_learning_view(const Platform& p, ActorId tutor, IsoWeek period) {
  const State& s = p.state();
  const auto* a = s.actor(tutor);
  if (!a) throw Error(ErrorCode::UnknownActor, "unknown actor " + tutor.str());
  policy::require(s, tutor, Action::Read, Resource::actor_scoped(ResourceClass::TutorView, tutor));

  LearningMonitoringView view;
  view.tutor = tutor;
  view.period = period;
  view.seq = p.last_seq();
  const auto log = p.log_prefix(view.seq);
  for (const auto& [gid, g] : s.groups) {
    if (!g.has_tutor(tutor)) continue;
    GroupPanel panel;
    panel.group = gid;
    panel.name = g.name;
    panel.teamwork = compute_teamwork_indicators(log, gid, period);
    panel.dashboard = compute_project_dashboard(log, gid, period);
    for (auto m : g.member_ids) {
      const auto profile = compute_metacognitive_profile(log, m);
      StudentSummary summary{m, {}, {}, profile.trend};
      if (!profile.periods.empty()) {
        summary.latest_period = profile.periods.rbegin()->first;
        summary.latest = profile.periods.rbegin()->second;
      }
      panel.students.push_back(std::move(summary));
    }
    std::vector<const BlogPost*> posts;
    for (const auto& [pid, post] : s.posts) {
      if (post.status != PostStatus::Published) continue;
      const bool ours = std::visit(
          [&](const auto& owner) {
            if constexpr (std::is_same_v<std::decay_t<decltype(owner)>, GroupId>)
              return owner == gid;
            else
              return g.has_member(owner);
          },
          post.blog);
      if (ours) posts.push_back(&post);
    }
    std::sort(posts.begin(), posts.end(), [](const BlogPost* x, const BlogPost* y) {
      if (x->created_at != y->created_at) return x->created_at > y->created_at;
      return x->id > y->id;
    });
    if (posts.size() > kRecentPosts) posts.resize(kRecentPosts);
    for (const auto* post : posts)
      panel.recent_posts.push_back(BlogHeadline{post->id, post->blog, post->author_id,
                                                post->created_at, post->body.substr(0, 80)});
    view.groups.push_back(std::move(panel));
  }
  return view;
}

}  // namespace meshat::indicators
