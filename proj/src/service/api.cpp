#include "meshat/service/api.hpp"

#include <cstdio>

#include "meshat/course.hpp"
#include "meshat/service/views.hpp"
#include "meshat/sharing.hpp"

namespace meshat::service {

using policy::Action;
using policy::Resource;
using policy::ResourceClass;

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::Unauthenticated: return 401;
    case ErrorCode::Forbidden: return 403;
    case ErrorCode::NoCourse:
    case ErrorCode::UnknownActor:
    case ErrorCode::UnknownGroup:
    case ErrorCode::UnknownTask:
    case ErrorCode::UnknownDeliverable:
    case ErrorCode::UnknownResource:
    case ErrorCode::UnknownPost:
    case ErrorCode::UnknownDiscussion:
    case ErrorCode::UnknownTag:
    case ErrorCode::UnknownParent:
    case ErrorCode::UnknownContract:
    case ErrorCode::UnknownEventSeq: return 404;
    case ErrorCode::CourseExists:
    case ErrorCode::AlreadyClosed:
    case ErrorCode::CourseNotRunning:
    case ErrorCode::RosterLocked:
    case ErrorCode::AlreadyGrouped:
    case ErrorCode::CycleDetected:
    case ErrorCode::InvalidTransition:
    case ErrorCode::NotSubmitted:
    case ErrorCode::AlreadySubmitted:
    case ErrorCode::AlreadyAccepted:
    case ErrorCode::AlreadyPublished:
    case ErrorCode::DuplicateLabel:
    case ErrorCode::InvalidMerge:
    case ErrorCode::ContractLocked:
    case ErrorCode::AlreadyExists:
    case ErrorCode::StoreNotEmpty: return 409;
    case ErrorCode::IoFailure:
    case ErrorCode::CorruptStore:
    case ErrorCode::BindFailure: return 500;
    default: return 400;
  }
}

Response error_response(const Error& e) {
  Json body{{"code", to_string(e.code())}};
  if (e.rule_id()) body["rule_id"] = *e.rule_id();
  body["message"] = e.what();
  return Response{http_status(e.code()), std::move(body)};
}

using Params = std::map<std::string, std::string>;

struct Api::Context {
  Api& api;
  const Request& req;
  Params params;
  ActorId actor;
  Json body;

  Platform& p() { return api.p_; }
  const State& s() { return api.p_.state(); }
};

struct Api::Route {
  std::string method;
  std::vector<std::string> pattern;
  std::function<std::optional<Guard>(const State&, const Params&, ActorId)> guard;
  std::function<Json(Context&)> handler;
  bool authenticated{true};
};

namespace {

[[noreturn]] void bad_request(const std::string& what) {
  throw Error(ErrorCode::BadRequest, what);
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= path.size()) {
    auto slash = path.find('/', pos);
    if (slash == std::string_view::npos) slash = path.size();
    if (slash > pos) out.emplace_back(path.substr(pos, slash - pos));
    pos = slash + 1;
  }
  return out;
}

std::vector<std::string> split_pattern(std::string_view pattern) { return split_path(pattern); }

std::optional<Params> match(const std::vector<std::string>& pattern,
                            const std::vector<std::string>& segments) {
  if (pattern.size() != segments.size()) return std::nullopt;
  Params params;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const auto& p = pattern[i];
    if (p.size() > 2 && p.front() == '{' && p.back() == '}')
      params[p.substr(1, p.size() - 2)] = segments[i];
    else if (p != segments[i])
      return std::nullopt;
  }
  return params;
}

template <typename IdT>
IdT path_id(const Params& params, const char* key, ErrorCode unknown) {
  const auto& text = params.at(key);
  auto id = IdT::parse(text);
  if (!id) throw Error(unknown, "no such identifier '" + text + "'");
  return *id;
}

GroupId group_param(const Params& p) { return path_id<GroupId>(p, "g", ErrorCode::UnknownGroup); }
ActorId actor_param(const Params& p, const char* key = "s") {
  return path_id<ActorId>(p, key, ErrorCode::UnknownActor);
}

BlogOwner blog_param(const Params& p) {
  if (auto it = p.find("owner"); it != p.end()) {
    if (auto owner = parse_blog_owner(it->second)) return *owner;
    throw Error(ErrorCode::UnknownResource, "no blog '" + it->second + "'");
  }
  const auto& kind = p.at("kind");
  if (kind == "student") return actor_param(p, "id");
  if (kind == "group") return path_id<GroupId>(p, "id", ErrorCode::UnknownGroup);
  throw Error(ErrorCode::UnknownResource, "blogs are 'student' or 'group', not '" + kind + "'");
}

Resource blog_resource(const BlogOwner& owner) {
  if (const auto* g = std::get_if<GroupId>(&owner))
    return Resource::group_scoped(ResourceClass::GroupBlog, *g);
  return Resource::actor_scoped(ResourceClass::StudentBlog, std::get<ActorId>(owner));
}

// Body field access --------------------------------------------------------

const Json& field(const Json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || it->is_null()) bad_request(std::string("missing field '") + key + "'");
  return *it;
}

bool has(const Json& body, const char* key) {
  auto it = body.find(key);
  return it != body.end() && !it->is_null();
}

std::string text_field(const Json& body, const char* key) {
  const Json& v = field(body, key);
  if (!v.is_string()) bad_request(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

double number_field(const Json& body, const char* key) {
  const Json& v = field(body, key);
  if (!v.is_number()) bad_request(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

int int_field(const Json& body, const char* key) {
  const Json& v = field(body, key);
  if (!v.is_number_integer()) bad_request(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

bool bool_field(const Json& body, const char* key) {
  const Json& v = field(body, key);
  if (!v.is_boolean()) bad_request(std::string("field '") + key + "' must be a boolean");
  return v.get<bool>();
}

template <typename IdT>
IdT id_field(const Json& body, const char* key) {
  auto parsed = IdT::parse(text_field(body, key));
  if (!parsed) bad_request(std::string("field '") + key + "' is not a valid identifier");
  return *parsed;
}

template <typename IdT>
std::set<IdT> id_set_field(const Json& body, const char* key) {
  const Json& v = field(body, key);
  if (!v.is_array()) bad_request(std::string("field '") + key + "' must be an array");
  std::set<IdT> out;
  for (const auto& e : v) {
    auto parsed = e.is_string() ? IdT::parse(e.get<std::string>()) : std::nullopt;
    if (!parsed) bad_request(std::string("field '") + key + "' holds an invalid identifier");
    out.insert(*parsed);
  }
  return out;
}

Date date_field(const Json& body, const char* key) {
  auto d = parse_date(text_field(body, key));
  if (!d) bad_request(std::string("field '") + key + "' must be a YYYY-MM-DD date");
  return *d;
}

IsoWeek week_text(const std::string& text) {
  auto w = IsoWeek::parse(text);
  if (!w) bad_request("'" + text + "' is not an ISO week such as 2025-W45");
  return *w;
}

ContractAnswers answers_field(const Json& body) {
  const Json& v = field(body, "answers");
  if (!v.is_array() || v.size() != kContractQuestions.size())
    throw Error(ErrorCode::InvalidAnswers, "answers must be an array of six strings");
  ContractAnswers out;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!v[i].is_string()) throw Error(ErrorCode::InvalidAnswers, "answers must be strings");
    out[i] = v[i].get<std::string>();
  }
  return out;
}

std::optional<std::string> query(const Request& r, const char* key) {
  auto it = r.query.find(key);
  if (it == r.query.end() || it->second.empty()) return std::nullopt;
  return it->second;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    if (comma > pos) out.push_back(text.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return out;
}

Guard guard_of(Action a, Resource r) { return Guard{a, std::move(r)}; }

}  // namespace

Api::Api(Platform& p, indicators::Questionnaire questionnaire, std::chrono::seconds session_ttl,
         WallClock wall)
    : p_(p),
      questionnaire_(std::move(questionnaire)),
      ttl_(session_ttl),
      wall_(wall ? std::move(wall) : WallClock([] {
        return std::chrono::time_point_cast<std::chrono::seconds>(
            std::chrono::system_clock::now());
      })),
      token_rng_(std::random_device{}()) {
  auto route = [this](std::string method, std::string_view pattern, auto guard, auto handler) {
    routes_.push_back(Route{std::move(method), split_pattern(pattern), guard, handler, true});
  };
  const auto none = [](const State&, const Params&, ActorId) -> std::optional<Guard> {
    return std::nullopt;
  };
  auto group_guard = [](Action a, ResourceClass c) {
    return [a, c](const State&, const Params& p, ActorId) -> std::optional<Guard> {
      return guard_of(a, Resource::group_scoped(c, group_param(p)));
    };
  };
  auto student_guard = [](Action a, ResourceClass c, const char* key) {
    return [a, c, key](const State&, const Params& p, ActorId) -> std::optional<Guard> {
      return guard_of(a, Resource::actor_scoped(c, actor_param(p, key)));
    };
  };
  auto course_guard = [](Action a, ResourceClass c) {
    return [a, c](const State&, const Params&, ActorId) -> std::optional<Guard> {
      return guard_of(a, Resource::course_wide(c));
    };
  };
  auto blog_guard = [](Action a) {
    return [a](const State&, const Params& p, ActorId) -> std::optional<Guard> {
      return guard_of(a, blog_resource(blog_param(p)));
    };
  };

  // Course -------------------------------------------------------------------

  routes_.push_back(Route{"GET", split_pattern("/api/health"), none,
                          [](Context&) { return Json{{"status", "ok"}}; }, false});

  route("GET", "/api/course", none, [](Context& c) {
    Json actors = Json::array();
    for (const auto& [id, a] : c.s().actors) actors.push_back(to_json(a));
    Json groups = Json::array();
    for (const auto& [id, g] : c.s().groups) groups.push_back(to_json(g));
    return Json{{"course", to_json(core::require_course(c.s()))},
                {"actors", actors},
                {"groups", groups}};
  });

  route("POST", "/api/course/advance", none,
        [](Context& c) { return to_json(core::advance_course(c.p(), c.actor)); });

  // Groups -------------------------------------------------------------------

  route("GET", "/api/groups/{g}/dashboard",
        group_guard(Action::Read, ResourceClass::GroupDashboard), [](Context& c) {
          std::optional<Date> today;
          if (auto t = query(c.req, "today")) {
            today = parse_date(*t);
            if (!today) bad_request("'today' must be a YYYY-MM-DD date");
          }
          auto period = query(c.req, "period");
          const IsoWeek week = period ? week_text(*period) : IsoWeek::of(c.p().now());
          return to_json(
              indicators::compute_project_dashboard(c.p().log(), group_param(c.params), week, today));
        });

  route("POST", "/api/groups/{g}/dashboard",
        group_guard(Action::Write, ResourceClass::GroupDashboard), [](Context& c) {
          const GroupId g = group_param(c.params);
          core::set_skill(c.p(), c.actor, g, text_field(c.body, "skill"),
                          bool_field(c.body, "done"));
          Json skills = Json::array();
          for (const auto& s : c.s().skills.at(g))
            skills.push_back(Json{{"text", s.text}, {"done", s.done}});
          return Json{{"skills", skills}};
        });

  route("GET", "/api/groups/{g}/tasks", group_guard(Action::Read, ResourceClass::Task),
        [](Context& c) {
          const GroupId g = group_param(c.params);
          Json out = Json::array();
          for (const auto& [id, t] : c.s().tasks)
            if (t.group_id == g) out.push_back(to_json(t));
          return out;
        });

  route("POST", "/api/groups/{g}/tasks", group_guard(Action::Write, ResourceClass::Task),
        [](Context& c) {
          const GroupId g = group_param(c.params);
          const Json& b = c.body;
          auto status = [&]() -> std::optional<TaskStatus> {
            if (!has(b, "status")) return std::nullopt;
            auto s = parse_task_status(text_field(b, "status"));
            if (!s) bad_request("unknown task status");
            return s;
          };
          if (has(b, "id")) {
            core::TaskChanges ch;
            if (has(b, "title")) ch.title = text_field(b, "title");
            if (has(b, "assignee")) ch.assignee = id_field<ActorId>(b, "assignee");
            if (has(b, "dependencies")) ch.dependencies = id_set_field<TaskId>(b, "dependencies");
            ch.status = status();
            if (has(b, "planned_start")) ch.planned_start = date_field(b, "planned_start");
            if (has(b, "planned_end")) ch.planned_end = date_field(b, "planned_end");
            return to_json(core::update_task(c.p(), c.actor, g, id_field<TaskId>(b, "id"), ch));
          }
          core::TaskFields f;
          f.title = text_field(b, "title");
          if (has(b, "assignee")) f.assignee = id_field<ActorId>(b, "assignee");
          if (has(b, "dependencies")) f.dependencies = id_set_field<TaskId>(b, "dependencies");
          f.planned_start = date_field(b, "planned_start");
          f.planned_end = date_field(b, "planned_end");
          if (auto s = status()) f.status = *s;
          return to_json(core::add_task(c.p(), c.actor, g, f));
        });

  route("GET", "/api/groups/{g}/deliverables",
        group_guard(Action::Read, ResourceClass::Deliverable), [](Context& c) {
          const GroupId g = group_param(c.params);
          Json out = Json::array();
          for (const auto& [id, d] : c.s().deliverables)
            if (d.group_id == g) out.push_back(to_json(d));
          return out;
        });

  route("POST", "/api/groups/{g}/deliverables",
        group_guard(Action::Write, ResourceClass::Deliverable), [](Context& c) {
          return to_json(core::create_deliverable(c.p(), c.actor, group_param(c.params),
                                                  text_field(c.body, "title"),
                                                  date_field(c.body, "due")));
        });

  auto deliverable_of = [](Context& c) {
    const GroupId g = group_param(c.params);
    const auto id = path_id<DeliverableId>(c.params, "d", ErrorCode::UnknownDeliverable);
    const Deliverable* d = c.s().deliverable(id);
    if (!d || d->group_id != g)
      throw Error(ErrorCode::UnknownDeliverable, "no deliverable " + id.str() + " in " + g.str());
    return id;
  };
  route("POST", "/api/groups/{g}/deliverables/{d}/submit",
        group_guard(Action::Write, ResourceClass::Deliverable), [deliverable_of](Context& c) {
          return to_json(core::submit_deliverable(c.p(), c.actor, deliverable_of(c)));
        });
  route("POST", "/api/groups/{g}/deliverables/{d}/accept",
        group_guard(Action::Write, ResourceClass::Deliverable), [deliverable_of](Context& c) {
          return to_json(core::accept_deliverable(c.p(), c.actor, deliverable_of(c)));
        });
  route("POST", "/api/groups/{g}/deliverables/{d}/comment",
        group_guard(Action::Write, ResourceClass::Deliverable), [deliverable_of](Context& c) {
          return to_json(core::comment_deliverable(c.p(), c.actor, deliverable_of(c),
                                                   text_field(c.body, "body")));
        });

  // Students -----------------------------------------------------------------

  route("POST", "/api/students/{s}/time",
        student_guard(Action::Write, ResourceClass::TimeEntryStream, "s"), [](Context& c) {
          return encode_event(core::record_time_entry(c.p(), c.actor, actor_param(c.params),
                                                      date_field(c.body, "date"),
                                                      number_field(c.body, "hours")));
        });

  route("POST", "/api/students/{s}/frame-of-mind",
        student_guard(Action::Write, ResourceClass::StudentMetacogDashboard, "s"),
        [](Context& c) {
          return encode_event(indicators::record_frame_of_mind(
              c.p(), c.actor, actor_param(c.params), week_text(text_field(c.body, "period")),
              int_field(c.body, "score")));
        });

  route("GET", "/api/students/{s}/metacog",
        student_guard(Action::Read, ResourceClass::StudentMetacogDashboard, "s"),
        [](Context& c) {
          Json j = to_json(
              indicators::compute_metacognitive_profile(c.p().log(), actor_param(c.params)));
          Json prompts = Json::object();
          for (const auto& [dim, list] : c.api.questionnaire_.prompts)
            prompts[std::string(to_string(dim))] = list;
          j["questionnaire"] = prompts;
          return j;
        });

  route("POST", "/api/students/{s}/metacog",
        student_guard(Action::Write, ResourceClass::StudentMetacogDashboard, "s"),
        [](Context& c) {
          const Json& items = field(c.body, "items");
          if (!items.is_array()) bad_request("field 'items' must be an array");
          std::vector<SelfReportItem> parsed;
          for (const auto& it : items) {
            if (!it.is_object()) bad_request("each item must be an object");
            auto dim = parse_dimension(text_field(it, "dimension"));
            if (!dim) throw Error(ErrorCode::InvalidItem, "unknown dimension");
            parsed.push_back({*dim, text_field(it, "prompt"), int_field(it, "response")});
          }
          return encode_event(indicators::record_self_report(
              c.p(), c.actor, actor_param(c.params), week_text(text_field(c.body, "period")),
              std::move(parsed), c.api.questionnaire_));
        });

  // Tutor --------------------------------------------------------------------

  route("GET", "/api/tutor/view",
        [](const State&, const Params&, ActorId actor) -> std::optional<Guard> {
          return guard_of(Action::Read, Resource::actor_scoped(ResourceClass::TutorView, actor));
        },
        [](Context& c) {
          auto period = query(c.req, "period");
          const IsoWeek week = period ? week_text(*period) : IsoWeek::of(c.p().now());
          return to_json(indicators::compute_learning_view(c.p(), c.actor, week));
        });

  // Blogs --------------------------------------------------------------------

  auto read_posts = [](Context& c) {
    Json out = Json::array();
    for (const auto& post : sharing::read_blog(c.s(), c.actor, blog_param(c.params)))
      out.push_back(to_json(post));
    return out;
  };
  auto write_post = [](Context& c) {
    const BlogOwner owner = blog_param(c.params);
    std::string body = text_field(c.body, "body");
    if (const auto* g = std::get_if<GroupId>(&owner))
      return to_json(sharing::propose_group_post(c.p(), c.actor, *g, std::move(body)));
    return to_json(
        sharing::write_student_post(c.p(), c.actor, std::get<ActorId>(owner), std::move(body)));
  };
  route("GET", "/api/blogs/{owner}/posts", blog_guard(Action::Read), read_posts);
  route("GET", "/api/blogs/{kind}/{id}/posts", blog_guard(Action::Read), read_posts);
  route("POST", "/api/blogs/{owner}/posts", blog_guard(Action::Write), write_post);
  route("POST", "/api/blogs/{kind}/{id}/posts", blog_guard(Action::Write), write_post);

  route("POST", "/api/blogs/group/{g}/posts/{p}/confirm",
        group_guard(Action::Write, ResourceClass::GroupBlogDraft), [](Context& c) {
          const GroupId g = group_param(c.params);
          const auto id = path_id<PostId>(c.params, "p", ErrorCode::UnknownPost);
          const BlogPost* post = c.s().post(id);
          if (!post || post->blog != BlogOwner{g})
            throw Error(ErrorCode::UnknownPost, "no post " + id.str() + " on " + g.str());
          return to_json(sharing::confirm_group_post(c.p(), c.actor, id));
        });

  // Forum --------------------------------------------------------------------

  route("GET", "/api/forum/discussions",
        course_guard(Action::Read, ResourceClass::ForumDiscussion), [](Context& c) {
          Json out = Json::array();
          for (const auto& [id, d] : c.s().forum.discussions()) out.push_back(to_json(d));
          return out;
        });

  route("POST", "/api/forum/discussions",
        course_guard(Action::Write, ResourceClass::ForumDiscussion), [](Context& c) {
          return to_json(sharing::create_discussion(
              c.p(), c.actor, text_field(c.body, "title"), text_field(c.body, "body"),
              id_set_field<SubjectId>(c.body, "tags")));
        });

  route("GET", "/api/forum/discussions/{d}",
        course_guard(Action::Read, ResourceClass::ForumDiscussion), [](Context& c) {
          const auto id = path_id<DiscussionId>(c.params, "d", ErrorCode::UnknownDiscussion);
          const Discussion* d = c.s().forum.discussion(id);
          if (!d) throw Error(ErrorCode::UnknownDiscussion, "unknown discussion " + id.str());
          return to_json(*d);
        });

  route("POST", "/api/forum/discussions/{d}/reply",
        course_guard(Action::Write, ResourceClass::ForumDiscussion), [](Context& c) {
          return to_json(sharing::reply(
              c.p(), c.actor, path_id<DiscussionId>(c.params, "d", ErrorCode::UnknownDiscussion),
              text_field(c.body, "body")));
        });

  route("GET", "/api/forum/taxonomy", course_guard(Action::Read, ResourceClass::Taxonomy),
        [](Context& c) {
          Json out = Json::array();
          for (const auto& [id, s] : c.s().forum.subjects()) out.push_back(to_json(s));
          return out;
        });

  route("POST", "/api/forum/taxonomy", course_guard(Action::Write, ResourceClass::Taxonomy),
        [](Context& c) -> Json {
          const Json& b = c.body;
          const auto op = text_field(b, "op");
          if (op == "propose")
            return to_json(sharing::propose_subject(c.p(), c.actor, id_field<SubjectId>(b, "parent"),
                                                    text_field(b, "label")));
          if (op == "rename")
            return to_json(sharing::rename_subject(c.p(), c.actor, id_field<SubjectId>(b, "subject"),
                                                   text_field(b, "label")));
          if (op == "merge") {
            const auto target = id_field<SubjectId>(b, "target");
            sharing::merge_subjects(c.p(), c.actor, id_field<SubjectId>(b, "subject"), target);
            return to_json(*c.s().forum.subject(target));
          }
          bad_request("op must be 'propose', 'rename' or 'merge'");
        });

  route("GET", "/api/forum/search", course_guard(Action::Read, ResourceClass::ForumDiscussion),
        [](Context& c) {
          std::set<SubjectId> tags;
          for (const auto& t : split_list(query(c.req, "tags").value_or(""))) {
            auto id = SubjectId::parse(t);
            if (!id) throw Error(ErrorCode::UnknownTag, "unknown tag '" + t + "'");
            tags.insert(*id);
          }
          Json out = Json::array();
          for (auto id : sharing::search_discussions(c.s(), c.actor, tags))
            out.push_back(to_json(*c.s().forum.discussion(id)));
          return out;
        });

  // Contracts ----------------------------------------------------------------

  route("GET", "/api/contracts/{a}",
        student_guard(Action::Read, ResourceClass::LearningContract, "a"), [](Context& c) {
          const LearningContract* k = sharing::read_contract(c.s(), c.actor, actor_param(c.params, "a"));
          Json questions = Json::array();
          for (auto q : kContractQuestions) questions.push_back(q);
          return Json{{"questions", questions}, {"contract", k ? to_json(*k) : Json(nullptr)}};
        });

  route("POST", "/api/contracts/{a}",
        student_guard(Action::Write, ResourceClass::LearningContract, "a"), [](Context& c) {
          return to_json(sharing::init_learning_contract(c.p(), c.actor, actor_param(c.params, "a"),
                                                         answers_field(c.body)));
        });

  route("POST", "/api/contracts/{a}/revise",
        student_guard(Action::Write, ResourceClass::LearningContract, "a"), [](Context& c) {
          std::vector<Seq> links;
          if (has(c.body, "linked_events")) {
            const Json& v = c.body["linked_events"];
            if (!v.is_array()) bad_request("field 'linked_events' must be an array");
            for (const auto& e : v) {
              if (!e.is_number_unsigned()) bad_request("linked events are seq numbers");
              links.push_back(e.get<Seq>());
            }
          }
          return to_json(sharing::revise_learning_contract(
              c.p(), c.actor, actor_param(c.params, "a"), answers_field(c.body), std::move(links)));
        });

  // Evaluations --------------------------------------------------------------

  route("GET", "/api/evaluations/group/{g}", group_guard(Action::Read, ResourceClass::Evaluation),
        [](Context& c) {
          const GroupId g = group_param(c.params);
          auto it = c.s().evaluations.find(g);
          return it == c.s().evaluations.end() ? to_json(GroupEvaluation{g, std::nullopt, {}})
                                               : to_json(it->second);
        });

  route("POST", "/api/evaluations/group/{g}", group_guard(Action::Write, ResourceClass::Evaluation),
        [](Context& c) {
          return to_json(indicators::evaluate_group(c.p(), c.actor, group_param(c.params),
                                                    number_field(c.body, "grade")));
        });

  route("POST", "/api/evaluations/student/{s}",
        [](const State& s, const Params& p, ActorId) -> std::optional<Guard> {
          const ActorId student = actor_param(p);
          const Actor* a = s.actor(student);
          if (!a || !a->group_id)
            throw Error(ErrorCode::UnknownActor, student.str() + " is not a grouped student");
          return guard_of(Action::Write,
                          Resource::group_scoped(ResourceClass::Evaluation, *a->group_id));
        },
        [](Context& c) {
          return to_json(indicators::evaluate_student(c.p(), c.actor, actor_param(c.params),
                                                      number_field(c.body, "adjustment")));
        });

  // Policy -------------------------------------------------------------------

  route("GET", "/api/decision-table", none, [](Context& c) -> Json {
    const auto rows = policy::decision_table(c.s());
    if (query(c.req, "format") == "csv") return Json(policy::decision_table_csv(rows));
    Json out = Json::array();
    for (const auto& row : rows) out.push_back(to_json(row));
    return out;
  });

  route("GET", "/api/capabilities", none, [](Context& c) {
    Json out = Json::array();
    for (const auto& r : policy::all_resources(c.s()))
      for (auto a : policy::kAllActions) {
        const auto d = policy::authorize(c.s(), c.actor, a, r);
        out.push_back(Json{{"resource", r.str()},
                           {"action", policy::to_string(a)},
                           {"allow", d.allow},
                           {"rule_id", d.rule_id()}});
      }
    return out;
  });
}

Api::~Api() = default;

ApiSession Api::open_session(ActorId actor) {
  if (!p_.state().actor(actor)) throw Error(ErrorCode::UnknownActor, "unknown actor " + actor.str());
  std::lock_guard lock(sessions_mutex_);
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx",
                static_cast<unsigned long long>(token_rng_()),
                static_cast<unsigned long long>(token_rng_()));
  ApiSession s{buf, actor, wall_() + ttl_};
  sessions_[s.token] = s;
  return s;
}

std::optional<ActorId> Api::authenticate(const std::string& token) {
  std::lock_guard lock(sessions_mutex_);
  auto it = sessions_.find(token);
  if (it == sessions_.end()) return std::nullopt;
  if (wall_() >= it->second.expires_at) {
    sessions_.erase(it);
    return std::nullopt;
  }
  return it->second.actor_id;
}

Response Api::session(const Request& r) {
  Json body = r.body.empty() ? Json::object() : Json::parse(r.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) bad_request("body must be a JSON object");
  const ApiSession s = open_session(id_field<ActorId>(body, "actor_id"));
  const Actor& a = *p_.state().actor(s.actor_id);
  return Response{200, Json{{"seq", p_.last_seq()},
                            {"data",
                             {{"token", s.token},
                              {"actor_id", s.actor_id.str()},
                              {"role", to_string(a.role)},
                              {"expires_at", format_timestamp(s.expires_at)}}}}};
}

std::optional<Guard> Api::guard(const Request& r, ActorId actor) const {
  const auto segments = split_path(r.path);
  for (const auto& route : routes_) {
    if (route.method != r.method) continue;
    auto params = match(route.pattern, segments);
    if (!params) continue;
    return route.guard(p_.state(), *params, actor);
  }
  return std::nullopt;
}

Response Api::handle(const Request& r) {
  try {
    if (r.method == "POST" && r.path == "/api/session") return session(r);
    const auto segments = split_path(r.path);
    for (const auto& route : routes_) {
      if (route.method != r.method) continue;
      auto params = match(route.pattern, segments);
      if (!params) continue;

      Context c{*this, r, std::move(*params), ActorId{}, Json::object()};
      if (route.authenticated) {
        auto actor = authenticate(r.token);
        if (!actor) throw Error(ErrorCode::Unauthenticated, "missing or expired session token");
        c.actor = *actor;
      }
      if (!r.body.empty()) {
        c.body = Json::parse(r.body, nullptr, false);
        if (c.body.is_discarded() || !c.body.is_object()) bad_request("body must be a JSON object");
      }
      if (route.method == "GET") {
        if (auto g = route.guard(p_.state(), c.params, c.actor))
          policy::require(p_.state(), c.actor, g->action, g->resource);
      }
      Json data = route.handler(c);
      if (data.is_string() && r.query.contains("format")) {
        Response out{200, {}, "text/csv", data.get<std::string>()};
        return out;
      }
      return Response{200, Json{{"seq", p_.last_seq()}, {"data", std::move(data)}}};
    }
    throw Error(ErrorCode::UnknownResource, "no route for " + r.method + " " + r.path);
  } catch (const Error& e) {
    return error_response(e);
  } catch (const std::exception& e) {
    return Response{500, Json{{"code", "Internal"}, {"message", e.what()}}};
  }
}

}  // namespace meshat::service
