#include "meshat/policy.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "meshat/error.hpp"

namespace meshat::policy {

using RC = ResourceClass;
using Rel = Relationship;

std::string_view to_string(Action a) { return a == Action::Read ? "Read" : "Write"; }

std::string_view to_string(ResourceClass c) {
  switch (c) {
    case RC::GroupDashboard: return "GroupDashboard";
    case RC::StudentMetacogDashboard: return "StudentMetacogDashboard";
    case RC::StudentBlog: return "StudentBlog";
    case RC::GroupBlog: return "GroupBlog";
    case RC::GroupBlogDraft: return "GroupBlogDraft";
    case RC::TutorView: return "TutorView";
    case RC::ForumDiscussion: return "ForumDiscussion";
    case RC::Taxonomy: return "Taxonomy";
    case RC::LearningContract: return "LearningContract";
    case RC::Task: return "Task";
    case RC::Deliverable: return "Deliverable";
    case RC::TimeEntryStream: return "TimeEntryStream";
    case RC::Evaluation: return "Evaluation";
  }
  return "?";
}

std::string_view to_string(Relationship r) {
  switch (r) {
    case Rel::Self: return "self";
    case Rel::Leader: return "leader";
    case Rel::Member: return "member";
    case Rel::Tutor: return "tutor";
    case Rel::Outsider: return "outsider";
    case Rel::Staff: return "staff";
    case Rel::Course: return "course";
    case Rel::Other: return "other";
    case Rel::ContractNew: return "owner-no-contract";
    case Rel::ContractNewClosed: return "owner-no-contract-closed";
    case Rel::ContractLocked: return "owner-contract-open";
    case Rel::ContractClosed: return "owner-contract-closed";
  }
  return "?";
}

std::string rule_id(Rule r) { return "R" + std::to_string(static_cast<int>(r)); }

std::string Resource::str() const {
  std::string s(to_string(cls));
  std::visit(
      [&](const auto& id) {
        if constexpr (!std::is_same_v<std::decay_t<decltype(id)>, std::monostate>)
          s += "(" + id.str() + ")";
      },
      scope);
  return s;
}

namespace {

bool in(RC c, std::initializer_list<RC> set) {
  return std::find(set.begin(), set.end(), c) != set.end();
}

bool is_staff(Role r) { return is_manager(r) || r == Role::Teacher || r == Role::Director; }

bool is_student_scoped(RC c) {
  return in(c, {RC::StudentMetacogDashboard, RC::StudentBlog, RC::TimeEntryStream});
}

bool is_group_scoped(RC c) {
  return in(c, {RC::GroupDashboard, RC::GroupBlog, RC::GroupBlogDraft, RC::Task, RC::Deliverable,
                RC::Evaluation});
}

using Verdict = std::optional<PolicyDecision>;

Verdict allow(Rule r, std::string why) { return PolicyDecision{true, r, std::move(why)}; }
Verdict deny(Rule r, std::string why) { return PolicyDecision{false, r, std::move(why)}; }

// R1: owners access what they own. Group members share the group's
// dashboard, tasks, deliverables, blog and each other's working time and
// published posts; a tutor owns and updates its own dashboard.
Verdict r1_owner(const DecisionKey& k) {
  if (k.relationship == Rel::Self && k.cls == RC::TutorView && is_tutor(k.role))
    return allow(Rule::R1, "tutors update their own dashboard");
  if (k.relationship == Rel::Leader || k.relationship == Rel::Member) {
    if (k.action == Action::Read &&
        in(k.cls, {RC::GroupDashboard, RC::GroupBlog, RC::GroupBlogDraft, RC::Task,
                   RC::Deliverable, RC::TimeEntryStream, RC::StudentBlog}))
      return allow(Rule::R1, "group members share the group's interfaces");
    if (k.action == Action::Write && in(k.cls, {RC::Task, RC::Deliverable, RC::GroupBlog}))
      return allow(Rule::R1, "group members maintain their group's work items");
  }
  return std::nullopt;
}

// R2: students read and write their own blog and individual dashboard.
Verdict r2_student_self(const DecisionKey& k) {
  if (k.relationship == Rel::Self && is_student_scoped(k.cls))
    return allow(Rule::R2, "students modify their blog and their individual dashboard");
  return std::nullopt;
}

// R3: the group dashboard and group-blog publication are the leader's.
Verdict r3_leader(const DecisionKey& k) {
  if (k.action != Action::Write || !in(k.cls, {RC::GroupDashboard, RC::GroupBlogDraft}))
    return std::nullopt;
  if (k.relationship == Rel::Leader)
    return allow(Rule::R3, "the project leader updates the group dashboard and publications");
  return deny(Rule::R3, "only the project leader updates the group dashboard and publications");
}

// R4: tutors see every interface of their groups and those groups'
// students; director and managers read group dashboards for coordination.
Verdict r4_tutor(const DecisionKey& k) {
  if (k.relationship == Rel::Tutor) {
    if (k.action == Action::Read &&
        in(k.cls, {RC::GroupDashboard, RC::StudentMetacogDashboard, RC::StudentBlog,
                   RC::GroupBlog, RC::GroupBlogDraft, RC::Task, RC::Deliverable,
                   RC::TimeEntryStream, RC::Evaluation}))
      return allow(Rule::R4, "tutors access their groups' and students' interfaces");
    if (k.action == Action::Write && in(k.cls, {RC::Task, RC::Deliverable, RC::Evaluation}))
      return allow(Rule::R4, "tutors follow up tasks, deliverables and evaluations");
  }
  if (k.relationship == Rel::Staff && k.action == Action::Read &&
      (is_manager(k.role) || k.role == Role::Director) &&
      in(k.cls, {RC::GroupDashboard, RC::Task, RC::Deliverable, RC::TimeEntryStream}))
    return allow(Rule::R4, "coordinators read group dashboards");
  return std::nullopt;
}

// R5: leaders never see their members' individual dashboards.
Verdict r5_leader_metacog(const DecisionKey& k) {
  if (k.cls == RC::StudentMetacogDashboard && k.relationship == Rel::Leader)
    return deny(Rule::R5, "project leaders have no access to members' individual dashboards");
  return std::nullopt;
}

// R6: the forum belongs to the tutor-side community of practice.
Verdict r6_forum(const DecisionKey& k) {
  if (!in(k.cls, {RC::ForumDiscussion, RC::Taxonomy})) return std::nullopt;
  if (is_student(k.role)) return deny(Rule::R6, "the forum is reserved to the tutor community");
  if (k.role == Role::Teacher) {
    if (k.action == Action::Read) return allow(Rule::R6, "the teacher follows the forum");
    return deny(Rule::R6, "the teacher has read-only forum access");
  }
  return allow(Rule::R6, "tutor-side roles take part in the community of practice");
}

// R7: contracts are readable by everyone; only the owner writes, creating
// it before closure and revising it after.
Verdict r7_contract(const DecisionKey& k) {
  if (k.cls != RC::LearningContract) return std::nullopt;
  if (k.action == Action::Read) return allow(Rule::R7, "learning contracts are course-public");
  switch (k.relationship) {
    case Rel::ContractNew: return allow(Rule::R7, "the owner writes a contract at course start");
    case Rel::ContractClosed: return allow(Rule::R7, "the owner revises after course closure");
    case Rel::ContractLocked:
      return deny(Rule::R7, "the contract cannot be modified while the course runs");
    case Rel::ContractNewClosed: return deny(Rule::R7, "contracts are created before closure");
    default: return deny(Rule::R7, "only the owner writes a learning contract");
  }
}

using RuleFn = Verdict (*)(const DecisionKey&);

struct RuleEntry {
  Rule rule;
  RuleFn fn;
};

// Denying rules come before the grants they restrict.
constexpr std::array<RuleEntry, 7> kRules{{
    {Rule::R5, r5_leader_metacog},
    {Rule::R7, r7_contract},
    {Rule::R6, r6_forum},
    {Rule::R3, r3_leader},
    {Rule::R2, r2_student_self},
    {Rule::R1, r1_owner},
    {Rule::R4, r4_tutor},
}};

}  // namespace

PolicyDecision decide(const DecisionKey& key, DisabledRules disabled) {
  for (const auto& entry : kRules) {
    if (disabled.test(static_cast<std::size_t>(entry.rule))) continue;
    if (auto v = entry.fn(key)) return *v;
  }
  return PolicyDecision{false, Rule::R8, "no rule grants this access"};
}

bool rule_grants(Rule rule, const DecisionKey& key) {
  for (const auto& entry : kRules) {
    if (entry.rule != rule) continue;
    auto v = entry.fn(key);
    return v && v->allow;
  }
  return false;
}

Relationship relationship(const State& s, ActorId actor_id, const Resource& r) {
  const Actor* actor = s.actor(actor_id);
  if (!actor) throw Error(ErrorCode::UnknownActor, "unknown actor " + actor_id.str());

  auto group_relation = [&](const ProjectGroup& g) {
    if (g.leader_id == actor_id) return Rel::Leader;
    if (g.has_member(actor_id)) return Rel::Member;
    if (g.has_tutor(actor_id)) return Rel::Tutor;
    if (is_staff(actor->role)) return Rel::Staff;
    return Rel::Outsider;
  };

  if (r.cls == RC::ForumDiscussion || r.cls == RC::Taxonomy) return Rel::Course;

  if (is_group_scoped(r.cls)) {
    const auto* gid = std::get_if<GroupId>(&r.scope);
    const ProjectGroup* g = gid ? s.group(*gid) : nullptr;
    if (!g) throw Error(ErrorCode::UnknownResource, "unknown resource " + r.str());
    return group_relation(*g);
  }

  const auto* owner_id = std::get_if<ActorId>(&r.scope);
  const Actor* owner = owner_id ? s.actor(*owner_id) : nullptr;
  if (!owner) throw Error(ErrorCode::UnknownResource, "unknown resource " + r.str());

  if (is_student_scoped(r.cls)) {
    if (!is_student(owner->role))
      throw Error(ErrorCode::UnknownResource, "unknown resource " + r.str());
    if (owner->id == actor_id) return Rel::Self;
    if (owner->group_id) {
      if (const auto* g = s.group(*owner->group_id)) return group_relation(*g);
    }
    return is_staff(actor->role) ? Rel::Staff : Rel::Outsider;
  }

  if (r.cls == RC::TutorView) return owner->id == actor_id ? Rel::Self : Rel::Other;

  // LearningContract
  if (owner->id != actor_id) return Rel::Other;
  const bool closed = s.course && s.course->status == CourseStatus::Closed;
  const bool exists = s.contracts.contains(owner->id);
  if (exists) return closed ? Rel::ContractClosed : Rel::ContractLocked;
  return closed ? Rel::ContractNewClosed : Rel::ContractNew;
}

DecisionKey key_for(const State& s, ActorId actor, Action action, const Resource& r) {
  const Relationship rel = relationship(s, actor, r);
  return DecisionKey{rel, s.actor(actor)->role, action, r.cls};
}

PolicyDecision authorize(const State& s, ActorId actor, Action action, const Resource& r) {
  return decide(key_for(s, actor, action, r));
}

void require(const State& s, ActorId actor, Action action, const Resource& r) {
  const auto d = authorize(s, actor, action, r);
  if (!d.allow)
    throw Error(ErrorCode::Forbidden,
                std::string(to_string(action)) + " on " + r.str() + " denied: " + d.explanation,
                d.rule_id());
}

std::vector<Resource> all_resources(const State& s) {
  std::vector<Resource> out;
  for (const auto& [gid, g] : s.groups)
    for (auto c : kAllClasses)
      if (is_group_scoped(c)) out.push_back(Resource::group_scoped(c, gid));
  for (const auto& [aid, a] : s.actors) {
    if (is_student(a.role))
      for (auto c : kAllClasses)
        if (is_student_scoped(c)) out.push_back(Resource::actor_scoped(c, aid));
    out.push_back(Resource::actor_scoped(RC::LearningContract, aid));
    out.push_back(Resource::actor_scoped(RC::TutorView, aid));
  }
  out.push_back(Resource::course_wide(RC::ForumDiscussion));
  out.push_back(Resource::course_wide(RC::Taxonomy));
  return out;
}

std::vector<DecisionRow> decision_table(const State& s) {
  std::map<DecisionKey, PolicyDecision> rows;
  const auto resources = all_resources(s);
  for (const auto& [aid, a] : s.actors) {
    for (const auto& r : resources) {
      const Relationship rel = relationship(s, aid, r);
      for (auto action : kAllActions) {
        DecisionKey key{rel, a.role, action, r.cls};
        if (!rows.contains(key)) rows.emplace(key, decide(key));
      }
    }
  }
  std::vector<DecisionRow> out;
  out.reserve(rows.size());
  for (auto& [k, d] : rows) out.push_back(DecisionRow{k, std::move(d)});
  return out;
}

std::string decision_table_csv(const std::vector<DecisionRow>& rows) {
  std::ostringstream os;
  os << "relationship,role,action,resource_class,allow,rule_id\n";
  for (const auto& row : rows)
    os << to_string(row.key.relationship) << ',' << to_string(row.key.role) << ','
       << to_string(row.key.action) << ',' << to_string(row.key.cls) << ','
       << (row.decision.allow ? "allow" : "deny") << ',' << row.decision.rule_id() << '\n';
  return os.str();
}

}  // namespace meshat::policy
