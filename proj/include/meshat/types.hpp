#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "meshat/ids.hpp"
#include "meshat/time.hpp"

namespace meshat {

enum class Role {
  Student,
  ProjectLeader,
  TechnicalTutor,
  ManagementTutor,
  TechnicalManager,
  ManagementManager,
  Teacher,
  Director,
};

inline constexpr std::array kAllRoles{Role::Student,          Role::ProjectLeader,
                                      Role::TechnicalTutor,   Role::ManagementTutor,
                                      Role::TechnicalManager, Role::ManagementManager,
                                      Role::Teacher,          Role::Director};

inline bool is_student(Role r) { return r == Role::Student || r == Role::ProjectLeader; }
inline bool is_tutor(Role r) { return r == Role::TechnicalTutor || r == Role::ManagementTutor; }
inline bool is_manager(Role r) {
  return r == Role::TechnicalManager || r == Role::ManagementManager;
}
// Roles that must be attached to exactly one project group.
inline bool is_group_scoped(Role r) { return is_student(r) || is_tutor(r); }

enum class Phase { Tender, MasterPlan, Development, Closure };
enum class CourseStatus { Setup, Running, Closed };
enum class TaskStatus { Planned, Active, Done };

struct PhaseWindow {
  Phase phase{};
  Date start{};
  Date end{};
  friend bool operator==(const PhaseWindow&, const PhaseWindow&) = default;
};

struct Course {
  std::string id;
  std::string name;
  std::vector<PhaseWindow> calendar;
  CourseStatus status{CourseStatus::Setup};
  Timestamp created_at{};

  std::optional<Phase> phase_at(Date d) const;
  friend bool operator==(const Course&, const Course&) = default;
};

struct Actor {
  ActorId id;
  std::string name;
  Role role{};
  std::optional<GroupId> group_id;
  friend bool operator==(const Actor&, const Actor&) = default;
};

struct ProjectGroup {
  GroupId id;
  std::string name;
  std::set<ActorId> member_ids;  // includes the leader
  ActorId leader_id;
  ActorId technical_tutor_id;
  ActorId management_tutor_id;
  std::string subject;

  bool has_member(ActorId a) const { return member_ids.contains(a); }
  bool has_tutor(ActorId a) const { return a == technical_tutor_id || a == management_tutor_id; }
  friend bool operator==(const ProjectGroup&, const ProjectGroup&) = default;
};

struct StatusChange {
  Timestamp at{};
  TaskStatus status{};
  friend bool operator==(const StatusChange&, const StatusChange&) = default;
};

struct Task {
  TaskId id;
  GroupId group_id;
  std::string title;
  std::optional<ActorId> assignee_id;
  std::optional<ActorId> original_assignee_id;
  std::set<TaskId> dependency_ids;
  TaskStatus status{TaskStatus::Planned};
  Date planned_start{};
  Date planned_end{};
  std::optional<Date> actual_start;
  std::optional<Date> actual_end;
  std::vector<StatusChange> status_history;
  friend bool operator==(const Task&, const Task&) = default;
};

struct Deliverable {
  DeliverableId id;
  GroupId group_id;
  std::string title;
  Date due{};
  std::optional<Timestamp> submitted_at;
  std::optional<Timestamp> accepted_at;
  std::optional<ActorId> accepted_by;
  std::size_t comment_count{0};
  friend bool operator==(const Deliverable&, const Deliverable&) = default;
};

struct SkillItem {
  std::string text;
  bool done{false};
  friend bool operator==(const SkillItem&, const SkillItem&) = default;
};

// Metacognitive self-assessment.
enum class Dimension { Cognition, Metacognition, Motivation, Behaviour };
inline constexpr std::array kAllDimensions{Dimension::Cognition, Dimension::Metacognition,
                                           Dimension::Motivation, Dimension::Behaviour};

struct SelfReportItem {
  Dimension dimension{};
  std::string prompt;
  int response{0};
  friend bool operator==(const SelfReportItem&, const SelfReportItem&) = default;
};

// Blogs: one per student and one per group.
using BlogOwner = std::variant<ActorId, GroupId>;
std::string blog_owner_str(const BlogOwner& owner);
std::optional<BlogOwner> parse_blog_owner(std::string_view text);

enum class PostStatus { Draft, Published };

struct BlogPost {
  PostId id;
  BlogOwner blog;
  ActorId author_id;
  std::string body;
  Timestamp created_at{};
  PostStatus status{PostStatus::Draft};
  std::optional<ActorId> published_by;
  friend bool operator==(const BlogPost&, const BlogPost&) = default;
};

struct Blog {
  BlogOwner owner;
  std::vector<PostId> posts;
  friend bool operator==(const Blog&, const Blog&) = default;
};

// Learning contract: six fixed questions.
inline constexpr std::array<std::string_view, 6> kContractQuestions{
    "What do I want to learn?",
    "How will I learn this?",
    "Who can give support?",
    "When can I start?",
    "How will I know that I have learned?",
    "How will others realize that I have learned?",
};

using ContractAnswers = std::array<std::string, 6>;

enum class ContractStatus { Active, Revised };

struct ContractRevision {
  ContractAnswers answers;
  std::vector<Seq> linked_events;
  Timestamp revised_at{};
  friend bool operator==(const ContractRevision&, const ContractRevision&) = default;
};

struct LearningContract {
  ActorId owner_id;
  ContractAnswers answers;
  ContractStatus status{ContractStatus::Active};
  std::optional<ContractRevision> revision;
  friend bool operator==(const LearningContract&, const LearningContract&) = default;
};

// Grading: group grade on 0-20, per-student adjustment within +-2.
inline constexpr double kMaxGrade = 20.0;
inline constexpr double kMaxAdjustment = 2.0;

struct GroupEvaluation {
  GroupId group_id;
  std::optional<double> group_grade;
  std::map<ActorId, double> adjustments;

  std::optional<double> individual_grade(ActorId student) const;
  friend bool operator==(const GroupEvaluation&, const GroupEvaluation&) = default;
};

std::string_view to_string(Role r);
std::string_view to_string(Phase p);
std::string_view to_string(CourseStatus s);
std::string_view to_string(TaskStatus s);
std::string_view to_string(Dimension d);
std::string_view to_string(PostStatus s);
std::string_view to_string(ContractStatus s);

std::optional<Role> parse_role(std::string_view s);
std::optional<Phase> parse_phase(std::string_view s);
std::optional<CourseStatus> parse_course_status(std::string_view s);
std::optional<TaskStatus> parse_task_status(std::string_view s);
std::optional<Dimension> parse_dimension(std::string_view s);
std::optional<PostStatus> parse_post_status(std::string_view s);
std::optional<ContractStatus> parse_contract_status(std::string_view s);

}  // namespace meshat
