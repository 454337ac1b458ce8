#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "meshat/platform.hpp"

namespace meshat::service {

// November to mid-April, one window per phase.
std::vector<PhaseWindow> paper_calendar();

// Instant used to stamp setup events so that seeding is reproducible.
Timestamp setup_epoch();

// Clock that returns `start`, then `start + step`, and so on.
Platform::Clock stepping_clock(Timestamp start, std::chrono::seconds step = std::chrono::seconds{1});

// Creates the course with `groups` groups of `members_per_group` students.
// Each group gets a technical and a management tutor and one deliverable per
// phase; the first member leads. Staff: two managers, a teacher, a director.
// Leaves the course in Setup. Throws Error(StoreNotEmpty).
const Course& seed_course(Platform& p, std::size_t groups, std::size_t members_per_group);

// The course of the paper: 12 groups of 8 students.
const Course& seed_paper_course(Platform& p);

// The director of a seeded course.
ActorId director_of(const State& s);

}  // namespace meshat::service
