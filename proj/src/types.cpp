#include "meshat/types.hpp"

#include <algorithm>
#include <utility>

namespace meshat {

namespace {

template <typename E, std::size_t N>
std::string_view lookup(const std::array<std::pair<E, std::string_view>, N>& table, E value) {
  for (const auto& [e, name] : table)
    if (e == value) return name;
  return "?";
}

template <typename E, std::size_t N>
std::optional<E> reverse(const std::array<std::pair<E, std::string_view>, N>& table,
                         std::string_view text) {
  for (const auto& [e, name] : table)
    if (name == text) return e;
  return std::nullopt;
}

constexpr std::array<std::pair<Role, std::string_view>, 8> kRoleNames{{
    {Role::Student, "Student"},
    {Role::ProjectLeader, "ProjectLeader"},
    {Role::TechnicalTutor, "TechnicalTutor"},
    {Role::ManagementTutor, "ManagementTutor"},
    {Role::TechnicalManager, "TechnicalManager"},
    {Role::ManagementManager, "ManagementManager"},
    {Role::Teacher, "Teacher"},
    {Role::Director, "Director"},
}};

constexpr std::array<std::pair<Phase, std::string_view>, 4> kPhaseNames{{
    {Phase::Tender, "Tender"},
    {Phase::MasterPlan, "MasterPlan"},
    {Phase::Development, "Development"},
    {Phase::Closure, "Closure"},
}};

constexpr std::array<std::pair<CourseStatus, std::string_view>, 3> kCourseStatusNames{{
    {CourseStatus::Setup, "Setup"},
    {CourseStatus::Running, "Running"},
    {CourseStatus::Closed, "Closed"},
}};

constexpr std::array<std::pair<TaskStatus, std::string_view>, 3> kTaskStatusNames{{
    {TaskStatus::Planned, "Planned"},
    {TaskStatus::Active, "Active"},
    {TaskStatus::Done, "Done"},
}};

constexpr std::array<std::pair<Dimension, std::string_view>, 4> kDimensionNames{{
    {Dimension::Cognition, "Cognition"},
    {Dimension::Metacognition, "Metacognition"},
    {Dimension::Motivation, "Motivation"},
    {Dimension::Behaviour, "Behaviour"},
}};

constexpr std::array<std::pair<PostStatus, std::string_view>, 2> kPostStatusNames{{
    {PostStatus::Draft, "Draft"},
    {PostStatus::Published, "Published"},
}};

constexpr std::array<std::pair<ContractStatus, std::string_view>, 2> kContractStatusNames{{
    {ContractStatus::Active, "Active"},
    {ContractStatus::Revised, "Revised"},
}};

}  // namespace

std::string_view to_string(Role r) { return lookup(kRoleNames, r); }
std::string_view to_string(Phase p) { return lookup(kPhaseNames, p); }
std::string_view to_string(CourseStatus s) { return lookup(kCourseStatusNames, s); }
std::string_view to_string(TaskStatus s) { return lookup(kTaskStatusNames, s); }
std::string_view to_string(Dimension d) { return lookup(kDimensionNames, d); }
std::string_view to_string(PostStatus s) { return lookup(kPostStatusNames, s); }
std::string_view to_string(ContractStatus s) { return lookup(kContractStatusNames, s); }

std::optional<Role> parse_role(std::string_view s) { return reverse(kRoleNames, s); }
std::optional<Phase> parse_phase(std::string_view s) { return reverse(kPhaseNames, s); }
std::optional<CourseStatus> parse_course_status(std::string_view s) {
  return reverse(kCourseStatusNames, s);
}
std::optional<TaskStatus> parse_task_status(std::string_view s) {
  return reverse(kTaskStatusNames, s);
}
std::optional<Dimension> parse_dimension(std::string_view s) {
  return reverse(kDimensionNames, s);
}
std::optional<PostStatus> parse_post_status(std::string_view s) {
  return reverse(kPostStatusNames, s);
}
std::optional<ContractStatus> parse_contract_status(std::string_view s) {
  return reverse(kContractStatusNames, s);
}

std::optional<Phase> Course::phase_at(Date d) const {
  for (const auto& w : calendar)
    if (d >= w.start && d <= w.end) return w.phase;
  return std::nullopt;
}

std::string blog_owner_str(const BlogOwner& owner) {
  return std::visit([](const auto& id) { return id.str(); }, owner);
}

std::optional<BlogOwner> parse_blog_owner(std::string_view text) {
  if (auto a = ActorId::parse(text)) return BlogOwner{*a};
  if (auto g = GroupId::parse(text)) return BlogOwner{*g};
  return std::nullopt;
}

std::optional<double> GroupEvaluation::individual_grade(ActorId student) const {
  if (!group_grade) return std::nullopt;
  double adj = 0.0;
  if (auto it = adjustments.find(student); it != adjustments.end()) adj = it->second;
  return std::clamp(*group_grade + adj, 0.0, kMaxGrade);
}

}  // namespace meshat
