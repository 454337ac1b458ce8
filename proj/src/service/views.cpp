#include "meshat/service/views.hpp"

namespace meshat::service {

namespace {

template <typename IdT>
Json opt(const std::optional<IdT>& v) {
  return v ? Json(v->str()) : Json(nullptr);
}

Json opt_date(const std::optional<Date>& d) { return d ? Json(format_date(*d)) : Json(nullptr); }
Json opt_time(const std::optional<Timestamp>& t) {
  return t ? Json(format_timestamp(*t)) : Json(nullptr);
}

template <typename IdT>
Json ids(const std::set<IdT>& s) {
  Json arr = Json::array();
  for (const auto& i : s) arr.push_back(i.str());
  return arr;
}

Json scores(const indicators::DimensionScores& s) {
  Json j = Json::object();
  for (const auto& [dim, v] : s) j[std::string(to_string(dim))] = v;
  return j;
}

Json answers(const ContractAnswers& a) {
  Json arr = Json::array();
  for (std::size_t i = 0; i < a.size(); ++i)
    arr.push_back(Json{{"question", kContractQuestions[i]}, {"answer", a[i]}});
  return arr;
}

}  // namespace

Json to_json(const Course& c) {
  Json cal = Json::array();
  for (const auto& w : c.calendar)
    cal.push_back(Json{{"phase", to_string(w.phase)},
                       {"start", format_date(w.start)},
                       {"end", format_date(w.end)}});
  return Json{{"id", c.id},
              {"name", c.name},
              {"status", to_string(c.status)},
              {"calendar", cal},
              {"created_at", format_timestamp(c.created_at)}};
}

Json to_json(const Actor& a) {
  return Json{{"id", a.id.str()}, {"name", a.name}, {"role", to_string(a.role)},
              {"group", opt(a.group_id)}};
}

Json to_json(const ProjectGroup& g) {
  return Json{{"id", g.id.str()},
              {"name", g.name},
              {"subject", g.subject},
              {"leader", g.leader_id.str()},
              {"members", ids(g.member_ids)},
              {"technical_tutor", g.technical_tutor_id.str()},
              {"management_tutor", g.management_tutor_id.str()}};
}

Json to_json(const Task& t) {
  Json history = Json::array();
  for (const auto& h : t.status_history)
    history.push_back(Json{{"at", format_timestamp(h.at)}, {"status", to_string(h.status)}});
  return Json{{"id", t.id.str()},
              {"group", t.group_id.str()},
              {"title", t.title},
              {"assignee", opt(t.assignee_id)},
              {"original_assignee", opt(t.original_assignee_id)},
              {"dependencies", ids(t.dependency_ids)},
              {"status", to_string(t.status)},
              {"planned_start", format_date(t.planned_start)},
              {"planned_end", format_date(t.planned_end)},
              {"actual_start", opt_date(t.actual_start)},
              {"actual_end", opt_date(t.actual_end)},
              {"history", history}};
}

Json to_json(const Deliverable& d) {
  return Json{{"id", d.id.str()},
              {"group", d.group_id.str()},
              {"title", d.title},
              {"due", format_date(d.due)},
              {"submitted_at", opt_time(d.submitted_at)},
              {"accepted_at", opt_time(d.accepted_at)},
              {"accepted_by", opt(d.accepted_by)},
              {"comments", d.comment_count}};
}

Json to_json(const BlogPost& p) {
  return Json{{"id", p.id.str()},
              {"blog", blog_owner_str(p.blog)},
              {"author", p.author_id.str()},
              {"body", p.body},
              {"created_at", format_timestamp(p.created_at)},
              {"status", to_string(p.status)},
              {"published_by", opt(p.published_by)}};
}

Json to_json(const Discussion& d) {
  Json messages = Json::array();
  for (const auto& m : d.messages)
    messages.push_back(Json{{"author", m.author_id.str()},
                            {"body", m.body},
                            {"at", format_timestamp(m.at)},
                            {"seq", m.seq}});
  return Json{{"id", d.id.str()},
              {"title", d.title},
              {"opener", d.opener_id.str()},
              {"tags", ids(d.tags)},
              {"last_activity", format_timestamp(d.last_activity())},
              {"messages", messages}};
}

Json to_json(const TaxonomySubject& s) {
  return Json{{"id", s.id.str()},
              {"label", s.label},
              {"parent", opt(s.parent_id)},
              {"root", to_string(s.root)},
              {"status", to_string(s.status)}};
}

Json to_json(const LearningContract& c) {
  Json j{{"owner", c.owner_id.str()},
         {"status", to_string(c.status)},
         {"answers", answers(c.answers)},
         {"revision", nullptr}};
  if (c.revision) {
    Json links = Json::array();
    for (auto seq : c.revision->linked_events) links.push_back(seq);
    j["revision"] = Json{{"answers", answers(c.revision->answers)},
                         {"linked_events", links},
                         {"revised_at", format_timestamp(c.revision->revised_at)}};
  }
  return j;
}

Json to_json(const GroupEvaluation& e) {
  Json adj = Json::object();
  Json grades = Json::object();
  for (const auto& [student, a] : e.adjustments) {
    adj[student.str()] = a;
    if (auto g = e.individual_grade(student)) grades[student.str()] = *g;
  }
  return Json{{"group", e.group_id.str()},
              {"group_grade", e.group_grade ? Json(*e.group_grade) : Json(nullptr)},
              {"adjustments", adj},
              {"individual_grades", grades}};
}

Json to_json(const indicators::Ratio& r) {
  return Json{{"value", r.value},
              {"no_data", r.no_data},
              {"numerator", r.numerator},
              {"denominator", r.denominator}};
}

Json to_json(const indicators::ProjectDashboard& d) {
  Json skills = Json::array();
  for (const auto& s : d.skills) skills.push_back(Json{{"text", s.text}, {"done", s.done}});
  Json members = Json::array();
  for (const auto& m : d.working_time.members)
    members.push_back(Json{{"student", m.student.str()},
                           {"period_hours", m.period_hours},
                           {"cumulative_hours", m.cumulative_hours}});
  Json deliverables = Json::array();
  for (const auto& x : d.deliverables)
    deliverables.push_back(Json{{"id", x.id.str()},
                                {"title", x.title},
                                {"due", format_date(x.due)},
                                {"state", indicators::to_string(x.state)},
                                {"delay_days", x.delay_days}});
  return Json{
      {"group", d.group.str()},
      {"period", d.period.str()},
      {"today", format_date(d.today)},
      {"frame_of_mind", d.frame_of_mind ? Json(*d.frame_of_mind) : Json(nullptr)},
      {"skills", skills},
      {"working_time",
       Json{{"members", members},
            {"period_total", d.working_time.period_total},
            {"cumulative_total", d.working_time.cumulative_total}}},
      {"tasks",
       Json{{"planned", d.tasks.planned}, {"active", d.tasks.active}, {"done", d.tasks.done}}},
      {"deliverables", deliverables},
      {"total_delay_days", d.total_delay_days}};
}

Json to_json(const indicators::TeamworkIndicators& t) {
  return Json{{"group", t.group.str()},
              {"period", t.period.str()},
              {"activity_score", to_json(t.activity_score)},
              {"to", to_json(t.to)},
              {"tl", to_json(t.tl)},
              {"mo", to_json(t.mo)},
              {"fe", to_json(t.fe)},
              {"ba", to_json(t.ba)},
              {"co", to_json(t.co)}};
}

Json to_json(const indicators::MetacognitiveProfile& m) {
  Json periods = Json::object();
  for (const auto& [week, s] : m.periods) periods[week.str()] = scores(s);
  return Json{{"student", m.student.str()}, {"periods", periods}, {"trend", scores(m.trend)}};
}

Json to_json(const indicators::LearningMonitoringView& v) {
  Json groups = Json::array();
  for (const auto& g : v.groups) {
    Json students = Json::array();
    for (const auto& s : g.students)
      students.push_back(Json{{"student", s.student.str()},
                              {"latest_period", s.latest_period ? Json(s.latest_period->str())
                                                                : Json(nullptr)},
                              {"latest", scores(s.latest)},
                              {"trend", scores(s.trend)}});
    Json posts = Json::array();
    for (const auto& p : g.recent_posts)
      posts.push_back(Json{{"post", p.post.str()},
                           {"blog", blog_owner_str(p.blog)},
                           {"author", p.author.str()},
                           {"created_at", format_timestamp(p.created_at)},
                           {"headline", p.headline}});
    groups.push_back(Json{{"group", g.group.str()},
                          {"name", g.name},
                          {"teamwork", to_json(g.teamwork)},
                          {"dashboard", to_json(g.dashboard)},
                          {"students", students},
                          {"recent_posts", posts}});
  }
  return Json{{"tutor", v.tutor.str()}, {"period", v.period.str()}, {"seq", v.seq},
              {"groups", groups}};
}

Json to_json(const policy::DecisionRow& row) {
  return Json{{"relationship", policy::to_string(row.key.relationship)},
              {"role", to_string(row.key.role)},
              {"action", policy::to_string(row.key.action)},
              {"resource_class", policy::to_string(row.key.cls)},
              {"allow", row.decision.allow},
              {"rule_id", row.decision.rule_id()},
              {"explanation", row.decision.explanation}};
}

}  // namespace meshat::service
