#pragma once

#include <bitset>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "meshat/ids.hpp"
#include "meshat/state.hpp"
#include "meshat/types.hpp"

namespace meshat::policy {

enum class Action { Read, Write };

enum class ResourceClass {
  GroupDashboard,
  StudentMetacogDashboard,
  StudentBlog,
  GroupBlog,
  GroupBlogDraft,
  TutorView,
  ForumDiscussion,
  Taxonomy,
  LearningContract,
  Task,
  Deliverable,
  TimeEntryStream,
  Evaluation,
};

inline constexpr std::array kAllClasses{
    ResourceClass::GroupDashboard, ResourceClass::StudentMetacogDashboard,
    ResourceClass::StudentBlog,    ResourceClass::GroupBlog,
    ResourceClass::GroupBlogDraft, ResourceClass::TutorView,
    ResourceClass::ForumDiscussion, ResourceClass::Taxonomy,
    ResourceClass::LearningContract, ResourceClass::Task,
    ResourceClass::Deliverable,    ResourceClass::TimeEntryStream,
    ResourceClass::Evaluation};

inline constexpr std::array kAllActions{Action::Read, Action::Write};

// How the acting actor relates to the resource instance. Learning-contract
// relationships also carry the contract's lifecycle state.
enum class Relationship {
  Self,        // owner of a student-scoped resource or of a tutor view
  Leader,      // leader of the resource's group
  Member,      // non-leader member of the resource's group
  Tutor,       // technical or management tutor of the resource's group
  Outsider,    // student or tutor attached to another group
  Staff,       // manager, teacher or director
  Course,      // course-wide resource (forum, taxonomy)
  Other,       // anyone else (someone else's contract or tutor view)
  ContractNew,       // owner, no contract yet, course not closed
  ContractNewClosed, // owner, no contract yet, course closed
  ContractLocked,    // owner, contract exists, course not closed
  ContractClosed,    // owner, contract exists, course closed
};

inline constexpr std::array kAllRelationships{
    Relationship::Self,        Relationship::Leader,          Relationship::Member,
    Relationship::Tutor,       Relationship::Outsider,        Relationship::Staff,
    Relationship::Course,      Relationship::Other,           Relationship::ContractNew,
    Relationship::ContractNewClosed, Relationship::ContractLocked, Relationship::ContractClosed};

std::string_view to_string(Action a);
std::string_view to_string(ResourceClass c);
std::string_view to_string(Relationship r);

struct Resource {
  ResourceClass cls{};
  std::variant<std::monostate, ActorId, GroupId> scope;

  static Resource group_scoped(ResourceClass cls, GroupId g) { return {cls, g}; }
  static Resource actor_scoped(ResourceClass cls, ActorId a) { return {cls, a}; }
  static Resource course_wide(ResourceClass cls) { return {cls, std::monostate{}}; }

  std::string str() const;
};

// Rules R1..R8; index 0 is unused.
enum class Rule : int { R1 = 1, R2, R3, R4, R5, R6, R7, R8 };
std::string rule_id(Rule r);

struct PolicyDecision {
  bool allow{false};
  Rule rule{Rule::R8};
  std::string explanation;

  std::string rule_id() const { return policy::rule_id(rule); }
};

struct DecisionKey {
  Relationship relationship{};
  Role role{};
  Action action{};
  ResourceClass cls{};
  friend auto operator<=>(const DecisionKey&, const DecisionKey&) = default;
};

// Set of rules switched off; used to audit that rules do not mask each other.
using DisabledRules = std::bitset<9>;

// The rule function proper. Deterministic in the key alone.
PolicyDecision decide(const DecisionKey& key, DisabledRules disabled = {});

// Whether a single rule, evaluated on its own, grants the key.
bool rule_grants(Rule rule, const DecisionKey& key);

// Throws Error(UnknownActor / UnknownResource).
Relationship relationship(const State& state, ActorId actor, const Resource& resource);
DecisionKey key_for(const State& state, ActorId actor, Action action, const Resource& resource);

PolicyDecision authorize(const State& state, ActorId actor, Action action,
                         const Resource& resource);

// Throws Error(Forbidden) carrying the rule id when denied.
void require(const State& state, ActorId actor, Action action, const Resource& resource);

struct DecisionRow {
  DecisionKey key;
  PolicyDecision decision;
};

// Every distinct (relationship, role, action, class) combination realized by
// some actor and resource instance of the course, in key order.
std::vector<DecisionRow> decision_table(const State& state);

// All resource instances the state defines, for enumeration.
std::vector<Resource> all_resources(const State& state);

// Flat export: header plus one decision per row.
std::string decision_table_csv(const std::vector<DecisionRow>& rows);

}  // namespace meshat::policy
