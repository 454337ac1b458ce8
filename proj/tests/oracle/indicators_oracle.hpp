#pragma once

// Brute-force recomputation of the dashboards straight from raw events. Each
// quantity is derived by its own scan of the log, without shared folds.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "meshat/events.hpp"
#include "meshat/indicators.hpp"

namespace meshat::oracle {

struct OracleRatio {
  std::size_t num{0};
  std::size_t den{0};
  double value() const { return den == 0 ? 1.0 : std::min(1.0, double(num) / double(den)); }
};

struct OracleTeamwork {
  OracleRatio activity, to, tl, mo, fe, ba, co;
};

struct OracleDashboard {
  std::optional<double> frame_of_mind;
  std::map<std::string, bool> skills;
  std::vector<std::string> skill_order;
  std::map<ActorId, double> period_hours, cumulative_hours;
  double period_total{0}, cumulative_total{0};
  std::size_t planned{0}, active{0}, done{0};
  std::map<DeliverableId, std::pair<indicators::DeliverableState, std::int64_t>> deliverables;
  std::int64_t total_delay{0};
};

inline std::set<ActorId> roster(std::span<const Event> log, GroupId g) {
  for (const auto& e : log)
    if (auto* c = e.as<payload::GroupCreated>(); c && c->id == g) return c->members;
  return {};
}

// Status of a task just before event index `upto` (exclusive), over events
// stamped before `end`.
inline std::optional<TaskStatus> status_before(std::span<const Event> log, TaskId t,
                                               std::size_t upto) {
  std::optional<TaskStatus> s;
  for (std::size_t i = 0; i < upto && i < log.size(); ++i)
    if (auto* u = log[i].as<payload::TaskUpdate>(); u && u->task == t) {
      if (u->created) s = TaskStatus::Planned;
      if (u->status) s = *u->status;
    }
  return s;
}

// Index one past the last event stamped before `end`.
inline std::size_t cutoff(std::span<const Event> log, Timestamp end) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < log.size(); ++i)
    if (log[i].timestamp < end) n = i + 1;
  return n;
}

inline std::set<TaskId> group_tasks(std::span<const Event> log, GroupId g, std::size_t upto) {
  std::set<TaskId> out;
  for (std::size_t i = 0; i < upto; ++i)
    if (auto* u = log[i].as<payload::TaskUpdate>(); u && u->group == g) out.insert(u->task);
  return out;
}

inline OracleTeamwork teamwork(std::span<const Event> log, GroupId g, IsoWeek week) {
  OracleTeamwork out;
  const auto members = roster(log, g);
  const Timestamp begin = week.begin(), end = week.end();
  const std::size_t end_idx = cutoff(log, end);
  const std::size_t begin_idx = cutoff(log, begin);

  std::set<ActorId> seen;
  for (const auto& e : log)
    if (e.timestamp >= begin && e.timestamp < end && members.count(e.actor_id))
      seen.insert(e.actor_id);
  out.to = {seen.size(), members.size()};

  // Deliverables of the group created before the end of the period.
  std::set<DeliverableId> mine;
  std::map<DeliverableId, Date> due;
  for (std::size_t i = 0; i < end_idx; ++i)
    if (auto* d = log[i].as<payload::DeliverableCreated>(); d && d->group == g) {
      mine.insert(d->id);
      due[d->id] = d->due;
    }
  for (auto id : mine) {
    if (due[id] > week.last_day()) continue;
    ++out.activity.den;
    bool accepted = false;
    for (std::size_t i = 0; i < end_idx; ++i)
      if (auto* a = log[i].as<payload::DeliverableAccept>(); a && a->id == id) accepted = true;
    if (accepted) ++out.activity.num;
  }
  for (std::size_t i = begin_idx; i < end_idx; ++i) {
    if (log[i].timestamp < begin) continue;
    if (auto* s = log[i].as<payload::DeliverableSubmit>(); s && mine.count(s->id)) ++out.fe.den;
    if (auto* c = log[i].as<payload::DeliverableComment>(); c && mine.count(c->id)) ++out.fe.num;
  }

  for (TaskId t : group_tasks(log, g, end_idx)) {
    // Active in period: Active when the period opens or made Active inside it.
    bool active = status_before(log, t, begin_idx) == TaskStatus::Active;
    bool changed = false;
    for (std::size_t i = 0; i < end_idx; ++i) {
      auto* u = log[i].as<payload::TaskUpdate>();
      if (!u || u->task != t || log[i].timestamp < begin) continue;
      const auto prev = status_before(log, t, i);
      const auto next = u->status ? *u->status : (u->created ? TaskStatus::Planned : *prev);
      if (u->created || !prev || *prev != next) {
        changed = true;
        if (next == TaskStatus::Active) active = true;
      }
    }
    std::vector<ActorId> assignees;
    for (std::size_t i = 0; i < end_idx; ++i)
      if (auto* u = log[i].as<payload::TaskUpdate>(); u && u->task == t && u->assignee)
        assignees.push_back(*u->assignee);
    if (active) {
      ++out.tl.den;
      ++out.mo.den;
      if (!assignees.empty()) ++out.tl.num;
      if (changed) ++out.mo.num;
    }
    bool reassigned = false;
    for (std::size_t k = 1; k < assignees.size(); ++k)
      if (assignees[k] != assignees[k - 1]) reassigned = true;
    if (reassigned) {
      ++out.ba.den;
      if (status_before(log, t, end_idx) == TaskStatus::Done) ++out.ba.num;
    }
    // Coordination: look at the event that first moves the task off Planned.
    for (std::size_t i = 0; i < end_idx; ++i) {
      auto* u = log[i].as<payload::TaskUpdate>();
      if (!u || u->task != t) continue;
      const auto prev = u->created ? std::optional<TaskStatus>(TaskStatus::Planned)
                                   : status_before(log, t, i);
      const auto next = u->status ? *u->status : *prev;
      if (!(prev == TaskStatus::Planned && next != TaskStatus::Planned)) continue;
      std::set<TaskId> deps;
      for (std::size_t j = 0; j <= i; ++j)
        if (auto* v = log[j].as<payload::TaskUpdate>(); v && v->task == t && v->dependencies)
          deps = *v->dependencies;
      if (!deps.empty()) {
        ++out.co.den;
        bool all_done = true;
        for (TaskId d : deps)
          if (status_before(log, d, i) != TaskStatus::Done) all_done = false;
        if (all_done) ++out.co.num;
      }
      break;
    }
  }
  return out;
}

inline OracleDashboard dashboard(std::span<const Event> log, GroupId g, IsoWeek week,
                                 Date today) {
  OracleDashboard out;
  const auto members = roster(log, g);
  const std::size_t end_idx = cutoff(log, week.end());

  std::map<ActorId, int> fom;
  for (const auto& e : log)
    if (auto* f = e.as<payload::FrameOfMind>(); f && f->period == week && members.count(f->student))
      fom[f->student] = f->score;
  if (!fom.empty()) {
    double sum = 0;
    for (auto& [m, s] : fom) sum += s;
    out.frame_of_mind = sum / double(fom.size());
  }

  for (auto m : members) {
    out.period_hours[m] = 0;
    out.cumulative_hours[m] = 0;
  }
  for (const auto& e : log)
    if (auto* t = e.as<payload::TimeEntry>(); t && members.count(t->student)) {
      if (t->date >= week.first_day() && t->date <= week.last_day())
        out.period_hours[t->student] += t->hours;
      if (t->date <= week.last_day()) out.cumulative_hours[t->student] += t->hours;
    }
  for (auto m : members) {
    out.period_total += out.period_hours[m];
    out.cumulative_total += out.cumulative_hours[m];
  }

  for (std::size_t i = 0; i < end_idx; ++i)
    if (auto* s = log[i].as<payload::SkillUpdate>(); s && s->group == g) {
      if (!out.skills.count(s->skill)) out.skill_order.push_back(s->skill);
      out.skills[s->skill] = s->done;
    }

  for (TaskId t : group_tasks(log, g, end_idx)) {
    switch (*status_before(log, t, end_idx)) {
      case TaskStatus::Planned: ++out.planned; break;
      case TaskStatus::Active: ++out.active; break;
      case TaskStatus::Done: ++out.done; break;
    }
  }

  for (std::size_t i = 0; i < end_idx; ++i) {
    auto* d = log[i].as<payload::DeliverableCreated>();
    if (!d || d->group != g) continue;
    std::optional<Timestamp> submitted;
    bool accepted = false;
    for (std::size_t j = 0; j < end_idx; ++j) {
      if (auto* s = log[j].as<payload::DeliverableSubmit>(); s && s->id == d->id)
        submitted = log[j].timestamp;
      if (auto* a = log[j].as<payload::DeliverableAccept>(); a && a->id == d->id) accepted = true;
    }
    const auto state = accepted    ? indicators::DeliverableState::Accepted
                       : submitted ? indicators::DeliverableState::Submitted
                                   : indicators::DeliverableState::Pending;
    const Date ref = submitted ? std::chrono::floor<std::chrono::days>(*submitted) : today;
    const std::int64_t delay = std::max<std::int64_t>(0, (ref - d->due).count());
    out.deliverables[d->id] = {state, delay};
    out.total_delay += delay;
  }
  return out;
}

using OracleScores = std::map<Dimension, double>;

struct OracleProfile {
  std::map<IsoWeek, OracleScores> periods;
  OracleScores trend;
};

inline OracleProfile metacog(std::span<const Event> log, ActorId student) {
  OracleProfile out;
  std::map<IsoWeek, std::size_t> last_index;
  for (std::size_t i = 0; i < log.size(); ++i)
    if (auto* r = log[i].as<payload::SelfReport>(); r && r->student == student)
      last_index[r->period] = i;
  for (const auto& [week, idx] : last_index) {
    const auto& items = log[idx].as<payload::SelfReport>()->items;
    for (auto dim : kAllDimensions) {
      double sum = 0;
      int n = 0;
      for (const auto& it : items)
        if (it.dimension == dim) {
          sum += it.response;
          ++n;
        }
      if (n > 0) out.periods[week][dim] = sum / n;
    }
  }
  if (!out.periods.empty()) {
    const IsoWeek last = out.periods.rbegin()->first;
    const IsoWeek before = IsoWeek::of(last.first_day() - std::chrono::days{1});
    if (out.periods.count(before))
      for (auto& [dim, v] : out.periods[last])
        if (out.periods[before].count(dim)) out.trend[dim] = v - out.periods[before][dim];
  }
  return out;
}

}  // namespace meshat::oracle
