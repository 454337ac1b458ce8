#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "meshat/events.hpp"
#include "meshat/platform.hpp"
#include "meshat/types.hpp"

// The three dashboards and the individual evaluation. Every compute_*
// function is a pure function of a log prefix.
namespace meshat::indicators {

// Self-assessment prompts per dimension. Prompts are replaceable; the four
// dimensions are not.
struct Questionnaire {
  std::map<Dimension, std::vector<std::string>> prompts;

  static Questionnaire defaults();
  static Questionnaire from_json_text(std::string_view text);  // throws Error(InvalidConfig)
  bool contains(Dimension d, std::string_view prompt) const;
};

const Event& record_frame_of_mind(Platform& p, ActorId actor, ActorId student, IsoWeek period,
                                  int score);
const Event& record_self_report(Platform& p, ActorId actor, ActorId student, IsoWeek period,
                                std::vector<SelfReportItem> items,
                                const Questionnaire& questionnaire = Questionnaire::defaults());

const GroupEvaluation& evaluate_group(Platform& p, ActorId tutor, GroupId group, double grade);
const GroupEvaluation& evaluate_student(Platform& p, ActorId tutor, ActorId student,
                                        double adjustment);

// Project monitoring dashboard ---------------------------------------------

struct MemberTime {
  ActorId student;
  double period_hours{0.0};
  double cumulative_hours{0.0};
  friend bool operator==(const MemberTime&, const MemberTime&) = default;
};

struct WorkingTime {
  std::vector<MemberTime> members;  // ordered by actor id
  double period_total{0.0};
  double cumulative_total{0.0};
  friend bool operator==(const WorkingTime&, const WorkingTime&) = default;
};

struct TaskCounts {
  std::size_t planned{0};
  std::size_t active{0};
  std::size_t done{0};
  friend bool operator==(const TaskCounts&, const TaskCounts&) = default;
};

enum class DeliverableState { Pending, Submitted, Accepted };
std::string_view to_string(DeliverableState s);

struct DeliverableStatus {
  DeliverableId id;
  std::string title;
  Date due{};
  DeliverableState state{};
  std::int64_t delay_days{0};
  friend bool operator==(const DeliverableStatus&, const DeliverableStatus&) = default;
};

struct ProjectDashboard {
  GroupId group;
  IsoWeek period;
  Date today{};
  std::optional<double> frame_of_mind;
  std::vector<SkillItem> skills;
  WorkingTime working_time;
  TaskCounts tasks;
  std::vector<DeliverableStatus> deliverables;  // ordered by id
  std::int64_t total_delay_days{0};
  friend bool operator==(const ProjectDashboard&, const ProjectDashboard&) = default;
};

// State-valued fields (skills, tasks, deliverable status) are taken at the end
// of `period`. `today` drives the delay of unsubmitted deliverables and
// defaults to the period's last day. Throws Error(UnknownGroup).
ProjectDashboard compute_project_dashboard(std::span<const Event> log, GroupId group,
                                           IsoWeek period, std::optional<Date> today = {});

// Teamwork indicators ------------------------------------------------------

// A ratio whose denominator is zero is reported as 1.0 with `no_data` set.
struct Ratio {
  double value{1.0};
  bool no_data{true};
  std::size_t numerator{0};
  std::size_t denominator{0};

  static Ratio of(std::size_t num, std::size_t den);
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

struct TeamworkIndicators {
  GroupId group;
  IsoWeek period;
  Ratio activity_score;  // accepted / due deliverables, cumulative
  Ratio to;              // members active in period / group size
  Ratio tl;              // active tasks with an assignee / active tasks
  Ratio mo;              // active tasks with a status change in period / active tasks
  Ratio fe;              // min(1, comments / submissions) in period
  Ratio ba;              // reassigned tasks done / reassigned tasks, cumulative
  Ratio co;              // starts with all dependencies done / starts with dependencies
  friend bool operator==(const TeamworkIndicators&, const TeamworkIndicators&) = default;
};

TeamworkIndicators compute_teamwork_indicators(std::span<const Event> log, GroupId group,
                                               IsoWeek period);

// Metacognitive profile ----------------------------------------------------

using DimensionScores = std::map<Dimension, double>;

struct MetacognitiveProfile {
  ActorId student;
  std::map<IsoWeek, DimensionScores> periods;
  DimensionScores trend;  // latest period minus the calendar week before it
  friend bool operator==(const MetacognitiveProfile&, const MetacognitiveProfile&) = default;
};

// Throws Error(UnknownActor) unless the student is registered in the log.
MetacognitiveProfile compute_metacognitive_profile(std::span<const Event> log, ActorId student);

// Tutor learning-monitoring view -------------------------------------------

struct StudentSummary {
  ActorId student;
  std::optional<IsoWeek> latest_period;
  DimensionScores latest;
  DimensionScores trend;
  friend bool operator==(const StudentSummary&, const StudentSummary&) = default;
};

struct BlogHeadline {
  PostId post;
  BlogOwner blog;
  ActorId author;
  Timestamp created_at{};
  std::string headline;
  friend bool operator==(const BlogHeadline&, const BlogHeadline&) = default;
};

struct GroupPanel {
  GroupId group;
  std::string name;
  TeamworkIndicators teamwork;
  ProjectDashboard dashboard;
  std::vector<StudentSummary> students;
  std::vector<BlogHeadline> recent_posts;  // newest first
  friend bool operator==(const GroupPanel&, const GroupPanel&) = default;
};

struct LearningMonitoringView {
  ActorId tutor;
  IsoWeek period;
  Seq seq{0};
  std::vector<GroupPanel> groups;
  friend bool operator==(const LearningMonitoringView&, const LearningMonitoringView&) = default;
};

inline constexpr std::size_t kRecentPosts = 5;

// Throws Error(Forbidden) for callers that are not tutors.
LearningMonitoringView compute_learning_view(const Platform& p, ActorId tutor, IsoWeek period);

}  // namespace meshat::indicators
