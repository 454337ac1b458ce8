#include "meshat/codec.hpp"

#include "meshat/error.hpp"

namespace meshat {

namespace {

[[noreturn]] void mismatch(const std::string& what) {
  throw Error(ErrorCode::SchemaMismatch, what);
}

const Json& req(const Json& j, const char* key) {
  if (!j.is_object()) mismatch("expected an object");
  auto it = j.find(key);
  if (it == j.end()) mismatch(std::string("missing field '") + key + "'");
  return *it;
}

std::string str(const Json& j, const char* key) {
  const Json& v = req(j, key);
  if (!v.is_string()) mismatch(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

template <typename IdT>
IdT id(const Json& v) {
  if (!v.is_string()) mismatch("identifier must be a string");
  auto parsed = IdT::parse(v.get<std::string>());
  if (!parsed) mismatch("malformed identifier '" + v.get<std::string>() + "'");
  return *parsed;
}

template <typename IdT>
IdT id(const Json& j, const char* key) {
  return id<IdT>(req(j, key));
}

template <typename IdT>
std::optional<IdT> opt_id(const Json& j, const char* key) {
  const Json& v = req(j, key);
  if (v.is_null()) return std::nullopt;
  return id<IdT>(v);
}

template <typename IdT>
Json opt(const std::optional<IdT>& v) {
  return v ? Json(v->str()) : Json(nullptr);
}

template <typename IdT>
Json id_list(const std::set<IdT>& ids) {
  Json arr = Json::array();
  for (const auto& i : ids) arr.push_back(i.str());
  return arr;
}

template <typename IdT>
std::set<IdT> id_set(const Json& v) {
  if (!v.is_array()) mismatch("expected an array of identifiers");
  std::set<IdT> out;
  for (const auto& e : v) out.insert(id<IdT>(e));
  return out;
}

double number(const Json& j, const char* key) {
  const Json& v = req(j, key);
  if (!v.is_number()) mismatch(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::int64_t integer(const Json& j, const char* key) {
  const Json& v = req(j, key);
  if (!v.is_number_integer()) mismatch(std::string("field '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

bool boolean(const Json& j, const char* key) {
  const Json& v = req(j, key);
  if (!v.is_boolean()) mismatch(std::string("field '") + key + "' must be a boolean");
  return v.get<bool>();
}

Date date(const Json& v) {
  if (!v.is_string()) mismatch("date must be a string");
  auto d = parse_date(v.get<std::string>());
  if (!d) mismatch("malformed date '" + v.get<std::string>() + "'");
  return *d;
}

Timestamp timestamp(const Json& v) {
  if (!v.is_string()) mismatch("timestamp must be a string");
  auto t = parse_timestamp(v.get<std::string>());
  if (!t) mismatch("malformed timestamp '" + v.get<std::string>() + "'");
  return *t;
}

IsoWeek week(const Json& v) {
  if (!v.is_string()) mismatch("period must be a string");
  auto w = IsoWeek::parse(v.get<std::string>());
  if (!w) mismatch("malformed period '" + v.get<std::string>() + "'");
  return *w;
}

template <typename E, typename Parse>
E enum_field(const Json& j, const char* key, Parse parse) {
  auto v = parse(str(j, key));
  if (!v) mismatch(std::string("unknown value for '") + key + "'");
  return *v;
}

Json opt_date(const std::optional<Date>& d) { return d ? Json(format_date(*d)) : Json(nullptr); }

std::optional<Date> opt_date(const Json& j, const char* key) {
  const Json& v = req(j, key);
  if (v.is_null()) return std::nullopt;
  return date(v);
}

constexpr std::array<std::string_view, 19> kKindNames{
    "TimeEntry",       "FrameOfMind",        "TaskUpdate",     "DeliverableSubmit",
    "DeliverableAccept", "DeliverableComment", "BlogPost",     "ForumMessage",
    "SelfReport",      "Evaluation",         "ContractUpdate", "CourseCreated",
    "CourseAdvanced",  "ActorRegistered",    "GroupCreated",   "DeliverableCreated",
    "SkillUpdate",     "BlogConfirm",        "TaxonomyUpdate",
};

static_assert(kKindNames.size() == std::variant_size_v<Payload>);

std::string_view to_string(payload::TaxonomyOp op) {
  switch (op) {
    case payload::TaxonomyOp::Propose: return "Propose";
    case payload::TaxonomyOp::Rename: return "Rename";
    case payload::TaxonomyOp::Merge: return "Merge";
  }
  return "?";
}

std::optional<payload::TaxonomyOp> parse_taxonomy_op(std::string_view s) {
  for (auto op : {payload::TaxonomyOp::Propose, payload::TaxonomyOp::Rename,
                  payload::TaxonomyOp::Merge})
    if (to_string(op) == s) return op;
  return std::nullopt;
}

// Payload encoders ----------------------------------------------------------

struct Encoder {
  Json operator()(const payload::CourseCreated& p) const {
    Json cal = Json::array();
    for (const auto& w : p.calendar)
      cal.push_back(Json{{"phase", to_string(w.phase)},
                         {"start", format_date(w.start)},
                         {"end", format_date(w.end)}});
    return Json{{"name", p.name}, {"calendar", cal}};
  }
  Json operator()(const payload::CourseAdvanced& p) const {
    return Json{{"to", to_string(p.to)}};
  }
  Json operator()(const payload::ActorRegistered& p) const {
    return Json{{"id", p.id.str()}, {"name", p.name}, {"role", to_string(p.role)}};
  }
  Json operator()(const payload::GroupCreated& p) const {
    return Json{{"id", p.id.str()},
                {"name", p.name},
                {"members", id_list(p.members)},
                {"leader", p.leader.str()},
                {"technical_tutor", p.technical_tutor.str()},
                {"management_tutor", p.management_tutor.str()},
                {"subject", p.subject},
                {"progress_subject", p.progress_subject.str()}};
  }
  Json operator()(const payload::TaskUpdate& p) const {
    return Json{{"task", p.task.str()},
                {"group", p.group.str()},
                {"created", p.created},
                {"title", p.title ? Json(*p.title) : Json(nullptr)},
                {"assignee", opt(p.assignee)},
                {"dependencies", p.dependencies ? id_list(*p.dependencies) : Json(nullptr)},
                {"status", p.status ? Json(to_string(*p.status)) : Json(nullptr)},
                {"planned_start", opt_date(p.planned_start)},
                {"planned_end", opt_date(p.planned_end)}};
  }
  Json operator()(const payload::TimeEntry& p) const {
    return Json{{"student", p.student.str()}, {"date", format_date(p.date)}, {"hours", p.hours}};
  }
  Json operator()(const payload::FrameOfMind& p) const {
    return Json{{"student", p.student.str()}, {"period", p.period.str()}, {"score", p.score}};
  }
  Json operator()(const payload::DeliverableCreated& p) const {
    return Json{{"id", p.id.str()},
                {"group", p.group.str()},
                {"title", p.title},
                {"due", format_date(p.due)}};
  }
  Json operator()(const payload::DeliverableSubmit& p) const { return Json{{"id", p.id.str()}}; }
  Json operator()(const payload::DeliverableAccept& p) const { return Json{{"id", p.id.str()}}; }
  Json operator()(const payload::DeliverableComment& p) const {
    return Json{{"id", p.id.str()}, {"body", p.body}};
  }
  Json operator()(const payload::SkillUpdate& p) const {
    return Json{{"group", p.group.str()}, {"skill", p.skill}, {"done", p.done}};
  }
  Json operator()(const payload::BlogPost& p) const {
    return Json{{"id", p.id.str()},
                {"blog", blog_owner_str(p.blog)},
                {"body", p.body},
                {"status", to_string(p.status)}};
  }
  Json operator()(const payload::BlogConfirm& p) const { return Json{{"id", p.id.str()}}; }
  Json operator()(const payload::ForumMessage& p) const {
    return Json{{"discussion", p.discussion.str()},
                {"opens", p.opens},
                {"title", p.title},
                {"tags", id_list(p.tags)},
                {"body", p.body}};
  }
  Json operator()(const payload::TaxonomyUpdate& p) const {
    return Json{{"op", to_string(p.op)},
                {"subject", p.subject.str()},
                {"parent", opt(p.parent)},
                {"label", p.label},
                {"target", opt(p.target)}};
  }
  Json operator()(const payload::SelfReport& p) const {
    Json items = Json::array();
    for (const auto& it : p.items)
      items.push_back(Json{{"dimension", to_string(it.dimension)},
                           {"prompt", it.prompt},
                           {"response", it.response}});
    return Json{{"student", p.student.str()}, {"period", p.period.str()}, {"items", items}};
  }
  Json operator()(const payload::Evaluation& p) const {
    return Json{{"group", p.group.str()}, {"student", opt(p.student)}, {"value", p.value}};
  }
  Json operator()(const payload::ContractUpdate& p) const {
    Json answers = Json::array();
    for (const auto& a : p.answers) answers.push_back(a);
    return Json{{"owner", p.owner.str()},
                {"revision", p.revision},
                {"answers", answers},
                {"linked_events", p.linked_events}};
  }
};

}  // namespace

std::string_view to_string(EventKind k) { return kKindNames[static_cast<std::size_t>(k)]; }

std::optional<EventKind> parse_event_kind(std::string_view s) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i)
    if (kKindNames[i] == s) return static_cast<EventKind>(i);
  return std::nullopt;
}

Json encode_payload(const Payload& p) { return std::visit(Encoder{}, p); }

Payload decode_payload(EventKind kind, const Json& j) {
  switch (kind) {
    case EventKind::CourseCreated: {
      payload::CourseCreated p;
      p.name = str(j, "name");
      const Json& cal = req(j, "calendar");
      if (!cal.is_array()) mismatch("calendar must be an array");
      for (const auto& w : cal)
        p.calendar.push_back(PhaseWindow{enum_field<Phase>(w, "phase", parse_phase),
                                         date(req(w, "start")), date(req(w, "end"))});
      return p;
    }
    case EventKind::CourseAdvanced:
      return payload::CourseAdvanced{enum_field<CourseStatus>(j, "to", parse_course_status)};
    case EventKind::ActorRegistered:
      return payload::ActorRegistered{id<ActorId>(j, "id"), str(j, "name"),
                                      enum_field<Role>(j, "role", parse_role)};
    case EventKind::GroupCreated:
      return payload::GroupCreated{id<GroupId>(j, "id"),
                                   str(j, "name"),
                                   id_set<ActorId>(req(j, "members")),
                                   id<ActorId>(j, "leader"),
                                   id<ActorId>(j, "technical_tutor"),
                                   id<ActorId>(j, "management_tutor"),
                                   str(j, "subject"),
                                   id<SubjectId>(j, "progress_subject")};
    case EventKind::TaskUpdate: {
      payload::TaskUpdate p;
      p.task = id<TaskId>(j, "task");
      p.group = id<GroupId>(j, "group");
      p.created = boolean(j, "created");
      if (const Json& t = req(j, "title"); !t.is_null()) p.title = str(j, "title");
      p.assignee = opt_id<ActorId>(j, "assignee");
      if (const Json& d = req(j, "dependencies"); !d.is_null()) p.dependencies = id_set<TaskId>(d);
      if (const Json& s = req(j, "status"); !s.is_null())
        p.status = enum_field<TaskStatus>(j, "status", parse_task_status);
      p.planned_start = opt_date(j, "planned_start");
      p.planned_end = opt_date(j, "planned_end");
      return p;
    }
    case EventKind::TimeEntry:
      return payload::TimeEntry{id<ActorId>(j, "student"), date(req(j, "date")),
                                number(j, "hours")};
    case EventKind::FrameOfMind:
      return payload::FrameOfMind{id<ActorId>(j, "student"), week(req(j, "period")),
                                  static_cast<int>(integer(j, "score"))};
    case EventKind::DeliverableCreated:
      return payload::DeliverableCreated{id<DeliverableId>(j, "id"), id<GroupId>(j, "group"),
                                         str(j, "title"), date(req(j, "due"))};
    case EventKind::DeliverableSubmit:
      return payload::DeliverableSubmit{id<DeliverableId>(j, "id")};
    case EventKind::DeliverableAccept:
      return payload::DeliverableAccept{id<DeliverableId>(j, "id")};
    case EventKind::DeliverableComment:
      return payload::DeliverableComment{id<DeliverableId>(j, "id"), str(j, "body")};
    case EventKind::SkillUpdate:
      return payload::SkillUpdate{id<GroupId>(j, "group"), str(j, "skill"), boolean(j, "done")};
    case EventKind::BlogPost: {
      auto owner = parse_blog_owner(str(j, "blog"));
      if (!owner) mismatch("malformed blog owner");
      return payload::BlogPost{id<PostId>(j, "id"), *owner, str(j, "body"),
                               enum_field<PostStatus>(j, "status", parse_post_status)};
    }
    case EventKind::BlogConfirm:
      return payload::BlogConfirm{id<PostId>(j, "id")};
    case EventKind::ForumMessage:
      return payload::ForumMessage{id<DiscussionId>(j, "discussion"), boolean(j, "opens"),
                                   str(j, "title"), id_set<SubjectId>(req(j, "tags")),
                                   str(j, "body")};
    case EventKind::TaxonomyUpdate:
      return payload::TaxonomyUpdate{
          enum_field<payload::TaxonomyOp>(j, "op", parse_taxonomy_op), id<SubjectId>(j, "subject"),
          opt_id<SubjectId>(j, "parent"), str(j, "label"), opt_id<SubjectId>(j, "target")};
    case EventKind::SelfReport: {
      payload::SelfReport p{id<ActorId>(j, "student"), week(req(j, "period")), {}};
      const Json& items = req(j, "items");
      if (!items.is_array()) mismatch("items must be an array");
      for (const auto& it : items)
        p.items.push_back(SelfReportItem{enum_field<Dimension>(it, "dimension", parse_dimension),
                                         str(it, "prompt"),
                                         static_cast<int>(integer(it, "response"))});
      return p;
    }
    case EventKind::Evaluation:
      return payload::Evaluation{id<GroupId>(j, "group"), opt_id<ActorId>(j, "student"),
                                 number(j, "value")};
    case EventKind::ContractUpdate: {
      payload::ContractUpdate p;
      p.owner = id<ActorId>(j, "owner");
      p.revision = boolean(j, "revision");
      const Json& answers = req(j, "answers");
      if (!answers.is_array() || answers.size() != p.answers.size())
        mismatch("answers must be an array of six texts");
      for (std::size_t i = 0; i < p.answers.size(); ++i) {
        if (!answers[i].is_string()) mismatch("answers must be texts");
        p.answers[i] = answers[i].get<std::string>();
      }
      const Json& links = req(j, "linked_events");
      if (!links.is_array()) mismatch("linked_events must be an array");
      for (const auto& l : links) {
        if (!l.is_number_unsigned()) mismatch("linked_events must hold sequence numbers");
        p.linked_events.push_back(l.get<Seq>());
      }
      return p;
    }
  }
  mismatch("unknown event kind");
}

Json encode_event(const Event& e) {
  return Json{{"seq", e.seq},
              {"timestamp", format_timestamp(e.timestamp)},
              {"actor_id", e.actor_id.valid() ? Json(e.actor_id.str()) : Json(nullptr)},
              {"kind", to_string(e.kind())},
              {"payload", encode_payload(e.payload)}};
}

Event decode_event(const Json& j) {
  Event e;
  const Json& seq = req(j, "seq");
  if (!seq.is_number_unsigned()) mismatch("seq must be a positive integer");
  e.seq = seq.get<Seq>();
  e.timestamp = timestamp(req(j, "timestamp"));
  if (auto a = opt_id<ActorId>(j, "actor_id")) e.actor_id = *a;
  auto kind = parse_event_kind(str(j, "kind"));
  if (!kind) mismatch("unknown event kind '" + str(j, "kind") + "'");
  e.payload = decode_payload(*kind, req(j, "payload"));
  return e;
}

std::string event_to_line(const Event& e) { return encode_event(e).dump(); }

Event event_from_line(std::string_view line) {
  Json j = Json::parse(line.begin(), line.end(), nullptr, false);
  if (j.is_discarded()) mismatch("record is not valid JSON");
  return decode_event(j);
}

Json encode_forum(const Forum& forum) {
  Json taxonomy = Json::array();
  for (const auto& [id, s] : forum.subjects())
    taxonomy.push_back(Json{{"id", id.str()},
                            {"parent", opt(s.parent_id)},
                            {"label", s.label},
                            {"root", to_string(s.root)},
                            {"status", to_string(s.status)}});
  Json discussions = Json::array();
  for (const auto& [id, d] : forum.discussions()) {
    Json messages = Json::array();
    for (const auto& m : d.messages)
      messages.push_back(Json{{"author", m.author_id.str()},
                              {"body", m.body},
                              {"timestamp", format_timestamp(m.at)},
                              {"seq", m.seq}});
    discussions.push_back(Json{{"id", id.str()},
                               {"title", d.title},
                               {"opener", d.opener_id.str()},
                               {"tags", id_list(d.tags)},
                               {"messages", messages}});
  }
  return Json{{"taxonomy", taxonomy}, {"discussions", discussions}};
}

Forum decode_forum(const Json& j) {
  std::vector<TaxonomySubject> subjects;
  const Json& taxonomy = req(j, "taxonomy");
  if (!taxonomy.is_array()) mismatch("taxonomy must be an array");
  for (const auto& s : taxonomy)
    subjects.push_back(TaxonomySubject{
        id<SubjectId>(s, "id"), str(s, "label"), opt_id<SubjectId>(s, "parent"),
        enum_field<TaxonomyRoot>(s, "root", parse_taxonomy_root),
        enum_field<SubjectStatus>(s, "status", parse_subject_status)});
  std::vector<Discussion> discussions;
  const Json& ds = req(j, "discussions");
  if (!ds.is_array()) mismatch("discussions must be an array");
  for (const auto& d : ds) {
    Discussion disc{id<DiscussionId>(d, "id"), str(d, "title"), id<ActorId>(d, "opener"),
                    id_set<SubjectId>(req(d, "tags")), {}};
    const Json& messages = req(d, "messages");
    if (!messages.is_array()) mismatch("messages must be an array");
    for (const auto& m : messages) {
      const Json& seq = req(m, "seq");
      if (!seq.is_number_unsigned()) mismatch("message seq must be unsigned");
      disc.messages.push_back(ForumMessage{id<ActorId>(m, "author"), str(m, "body"),
                                           timestamp(req(m, "timestamp")), seq.get<Seq>()});
    }
    discussions.push_back(std::move(disc));
  }
  Forum f = Forum::from_parts(std::move(subjects), std::move(discussions));
  if (auto violation = f.structure_violation()) mismatch("invalid forum: " + *violation);
  return f;
}

}  // namespace meshat
