#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "meshat/forum.hpp"
#include "meshat/ids.hpp"
#include "meshat/time.hpp"
#include "meshat/types.hpp"

namespace meshat {

// Activity kinds first, then the structural kinds that set up the course.
enum class EventKind {
  TimeEntry,
  FrameOfMind,
  TaskUpdate,
  DeliverableSubmit,
  DeliverableAccept,
  DeliverableComment,
  BlogPost,
  ForumMessage,
  SelfReport,
  Evaluation,
  ContractUpdate,
  CourseCreated,
  CourseAdvanced,
  ActorRegistered,
  GroupCreated,
  DeliverableCreated,
  SkillUpdate,
  BlogConfirm,
  TaxonomyUpdate,
};

std::string_view to_string(EventKind k);
std::optional<EventKind> parse_event_kind(std::string_view s);

namespace payload {

struct CourseCreated {
  std::string name;
  std::vector<PhaseWindow> calendar;
  friend bool operator==(const CourseCreated&, const CourseCreated&) = default;
};

struct CourseAdvanced {
  CourseStatus to{};
  friend bool operator==(const CourseAdvanced&, const CourseAdvanced&) = default;
};

struct ActorRegistered {
  ActorId id;
  std::string name;
  Role role{};
  friend bool operator==(const ActorRegistered&, const ActorRegistered&) = default;
};

struct GroupCreated {
  GroupId id;
  std::string name;
  std::set<ActorId> members;
  ActorId leader;
  ActorId technical_tutor;
  ActorId management_tutor;
  std::string subject;
  SubjectId progress_subject;  // GroupProgress taxonomy node created alongside
  friend bool operator==(const GroupCreated&, const GroupCreated&) = default;
};

// Creation carries every field; an update carries only the changed ones.
struct TaskUpdate {
  TaskId task;
  GroupId group;
  bool created{false};
  std::optional<std::string> title;
  std::optional<ActorId> assignee;
  std::optional<std::set<TaskId>> dependencies;
  std::optional<TaskStatus> status;
  std::optional<Date> planned_start;
  std::optional<Date> planned_end;
  friend bool operator==(const TaskUpdate&, const TaskUpdate&) = default;
};

struct TimeEntry {
  ActorId student;
  Date date{};
  double hours{0.0};
  friend bool operator==(const TimeEntry&, const TimeEntry&) = default;
};

struct FrameOfMind {
  ActorId student;
  IsoWeek period;
  int score{0};
  friend bool operator==(const FrameOfMind&, const FrameOfMind&) = default;
};

struct DeliverableCreated {
  DeliverableId id;
  GroupId group;
  std::string title;
  Date due{};
  friend bool operator==(const DeliverableCreated&, const DeliverableCreated&) = default;
};

struct DeliverableSubmit {
  DeliverableId id;
  friend bool operator==(const DeliverableSubmit&, const DeliverableSubmit&) = default;
};

struct DeliverableAccept {
  DeliverableId id;
  friend bool operator==(const DeliverableAccept&, const DeliverableAccept&) = default;
};

struct DeliverableComment {
  DeliverableId id;
  std::string body;
  friend bool operator==(const DeliverableComment&, const DeliverableComment&) = default;
};

struct SkillUpdate {
  GroupId group;
  std::string skill;
  bool done{false};
  friend bool operator==(const SkillUpdate&, const SkillUpdate&) = default;
};

struct BlogPost {
  PostId id;
  BlogOwner blog;
  std::string body;
  PostStatus status{};
  friend bool operator==(const BlogPost&, const BlogPost&) = default;
};

struct BlogConfirm {
  PostId id;
  friend bool operator==(const BlogConfirm&, const BlogConfirm&) = default;
};

// Opens a discussion when `opens` is set, otherwise replies to it.
struct ForumMessage {
  DiscussionId discussion;
  bool opens{false};
  std::string title;
  std::set<SubjectId> tags;
  std::string body;
  friend bool operator==(const ForumMessage&, const ForumMessage&) = default;
};

enum class TaxonomyOp { Propose, Rename, Merge };

struct TaxonomyUpdate {
  TaxonomyOp op{};
  SubjectId subject;
  std::optional<SubjectId> parent;   // Propose
  std::string label;                 // Propose, Rename
  std::optional<SubjectId> target;   // Merge
  friend bool operator==(const TaxonomyUpdate&, const TaxonomyUpdate&) = default;
};

struct SelfReport {
  ActorId student;
  IsoWeek period;
  std::vector<SelfReportItem> items;
  friend bool operator==(const SelfReport&, const SelfReport&) = default;
};

// A group grade when `student` is empty, otherwise an individual adjustment.
struct Evaluation {
  GroupId group;
  std::optional<ActorId> student;
  double value{0.0};
  friend bool operator==(const Evaluation&, const Evaluation&) = default;
};

struct ContractUpdate {
  ActorId owner;
  bool revision{false};
  ContractAnswers answers;
  std::vector<Seq> linked_events;
  friend bool operator==(const ContractUpdate&, const ContractUpdate&) = default;
};

}  // namespace payload

using Payload =
    std::variant<payload::TimeEntry, payload::FrameOfMind, payload::TaskUpdate,
                 payload::DeliverableSubmit, payload::DeliverableAccept,
                 payload::DeliverableComment, payload::BlogPost, payload::ForumMessage,
                 payload::SelfReport, payload::Evaluation, payload::ContractUpdate,
                 payload::CourseCreated, payload::CourseAdvanced, payload::ActorRegistered,
                 payload::GroupCreated, payload::DeliverableCreated, payload::SkillUpdate,
                 payload::BlogConfirm, payload::TaxonomyUpdate>;

// Variant alternatives are declared in EventKind order.
inline EventKind kind_of(const Payload& p) { return static_cast<EventKind>(p.index()); }

struct Event {
  Seq seq{0};
  Timestamp timestamp{};
  ActorId actor_id;  // invalid (a0) for system-issued setup events
  Payload payload;

  EventKind kind() const { return kind_of(payload); }

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&payload);
  }

  friend bool operator==(const Event&, const Event&) = default;
};

}  // namespace meshat
