#include "meshat/service/seed.hpp"

#include <array>
#include <string>

#include "meshat/course.hpp"
#include "meshat/error.hpp"

namespace meshat::service {

std::vector<PhaseWindow> paper_calendar() {
  return {
      {Phase::Tender, make_date(2025, 11, 1), make_date(2025, 11, 30)},
      {Phase::MasterPlan, make_date(2025, 12, 1), make_date(2025, 12, 31)},
      {Phase::Development, make_date(2026, 1, 1), make_date(2026, 3, 31)},
      {Phase::Closure, make_date(2026, 4, 1), make_date(2026, 4, 15)},
  };
}

Timestamp setup_epoch() { return make_timestamp(2025, 10, 15, 8, 0, 0); }

Platform::Clock stepping_clock(Timestamp start, std::chrono::seconds step) {
  auto next = std::make_shared<Timestamp>(start);
  return [next, step] {
    const Timestamp t = *next;
    *next += step;
    return t;
  };
}

namespace {

struct DeliverablePlan {
  const char* title;
  std::size_t phase;
};

constexpr std::array kDeliverables{
    DeliverablePlan{"Answer to the call for tender", 0},
    DeliverablePlan{"Master plan", 1},
    DeliverablePlan{"Product or study", 2},
    DeliverablePlan{"Technical report", 3},
    DeliverablePlan{"Management report", 3},
};

}  // namespace

const Course& seed_course(Platform& p, std::size_t groups, std::size_t members_per_group) {
  if (p.last_seq() != 0) throw Error(ErrorCode::StoreNotEmpty, "the store already holds events");
  if (groups == 0 || members_per_group < 2)
    throw Error(ErrorCode::InvalidConfig, "need at least one group of two students");

  const auto calendar = paper_calendar();
  core::create_course(p, "Project management course", calendar);
  core::register_actor(p, "Course director", Role::Director);
  core::register_actor(p, "Teacher", Role::Teacher);
  core::register_actor(p, "Technical manager", Role::TechnicalManager);
  core::register_actor(p, "Management manager", Role::ManagementManager);

  for (std::size_t g = 1; g <= groups; ++g) {
    const auto n = std::to_string(g);
    core::GroupSpec spec;
    spec.name = "Group " + n;
    spec.subject = "Project " + n;
    spec.technical_tutor = core::register_actor(p, "Technical tutor " + n, Role::TechnicalTutor);
    spec.management_tutor =
        core::register_actor(p, "Management tutor " + n, Role::ManagementTutor);
    for (std::size_t m = 1; m <= members_per_group; ++m) {
      auto id = core::register_actor(p, "Student " + n + "." + std::to_string(m), Role::Student);
      if (m == 1) spec.leader = id;
      spec.members.insert(id);
    }
    const GroupId gid = core::create_group(p, spec).id;
    for (const auto& d : kDeliverables)
      core::create_deliverable(p, spec.technical_tutor, gid, d.title, calendar[d.phase].end);
  }
  return *p.state().course;
}

const Course& seed_paper_course(Platform& p) { return seed_course(p, 12, 8); }

ActorId director_of(const State& s) {
  for (const auto& [id, a] : s.actors)
    if (a.role == Role::Director) return id;
  throw Error(ErrorCode::UnknownActor, "the course has no director");
}

}  // namespace meshat::service
