#pragma once

#include <gtest/gtest.h>

#include <memory>

#include "meshat/course.hpp"
#include "meshat/error.hpp"
#include "meshat/platform.hpp"
#include "meshat/service/seed.hpp"

namespace meshat::testing {

// Expects `stmt` to throw meshat::Error with the given code.
#define EXPECT_ERROR(stmt, expected_code)                                        \
  do {                                                                           \
    try {                                                                        \
      stmt;                                                                      \
      ADD_FAILURE() << "expected " << ::meshat::to_string(expected_code);        \
    } catch (const ::meshat::Error& e_) {                                        \
      EXPECT_EQ(e_.code(), expected_code) << e_.what();                          \
    }                                                                            \
  } while (0)

// Small seeded course on a hand-driven clock.
struct SeededCourse {
  std::shared_ptr<ManualClock> clock =
      std::make_shared<ManualClock>(make_timestamp(2025, 10, 15, 8));
  Platform p{[c = clock] {
    c->advance(std::chrono::seconds{1});
    return c->now();
  }};

  ActorId director, teacher, tech_manager, mgmt_manager;

  struct Group {
    GroupId id;
    ActorId leader, tech_tutor, mgmt_tutor;
    std::vector<ActorId> members;  // leader first
  };
  std::vector<Group> groups;

  explicit SeededCourse(std::size_t n_groups = 2, std::size_t members = 4, bool start = true) {
    service::seed_course(p, n_groups, members);
    const State& s = p.state();
    for (const auto& [id, a] : s.actors) {
      switch (a.role) {
        case Role::Director: director = id; break;
        case Role::Teacher: teacher = id; break;
        case Role::TechnicalManager: tech_manager = id; break;
        case Role::ManagementManager: mgmt_manager = id; break;
        default: break;
      }
    }
    for (const auto& [gid, g] : s.groups) {
      Group out{gid, g.leader_id, g.technical_tutor_id, g.management_tutor_id, {g.leader_id}};
      for (auto m : g.member_ids)
        if (m != g.leader_id) out.members.push_back(m);
      groups.push_back(out);
    }
    if (start) core::advance_course(p, director);
  }

  const State& s() const { return p.state(); }
  void at(Timestamp t) { clock->set(t - std::chrono::seconds{1}); }
  void close() { core::advance_course(p, director); }
};

}  // namespace meshat::testing
