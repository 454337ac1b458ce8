#pragma once

#include <cstdint>

#include "meshat/indicators.hpp"
#include "meshat/platform.hpp"

namespace meshat::service {

// Rates are per week: probabilities where the name ends in `_prob`,
// expected counts otherwise. Setting every rate to zero yields no activity.
struct SimulationConfig {
  std::uint64_t seed{42};
  std::size_t groups{12};
  std::size_t members_per_group{8};
  std::size_t weeks{26};

  double hours_per_student_week{3000.0 / (8 * 26)};
  double frame_of_mind_prob{0.8};
  double self_report_prob{0.5};
  double tasks_per_group{1.5};
  double task_progress_prob{0.4};
  double task_reassign_prob{0.05};
  double deliverable_submit_prob{0.8};
  double deliverable_accept_prob{0.7};
  double deliverable_comment_prob{0.6};
  double student_post_prob{0.3};
  double group_post_prob{0.5};
  double group_confirm_prob{0.8};
  double skill_update_prob{0.3};
  double discussion_prob{0.1};
  double reply_prob{0.2};
  double contract_prob{0.5};
  double evaluation_prob{1.0};

  bool close_course{false};

  // Sets every rate to zero.
  SimulationConfig& silence();
  // Throws Error(InvalidConfig).
  void validate() const;
};

struct SimulationResult {
  Seq first_seq{0};
  Seq last_seq{0};
  IsoWeek first_week;
  IsoWeek last_week;
};

// Generates a pseudo-random history on top of `p`. An empty platform is first
// seeded with `groups` x `members_per_group`; otherwise the course roster
// must match those counts. A course still in Setup is started. The platform
// clock is replaced by a simulated one. Same config, same starting log: same
// resulting log.
SimulationResult simulate(Platform& p, const SimulationConfig& config,
                          const indicators::Questionnaire& questionnaire =
                              indicators::Questionnaire::defaults());

}  // namespace meshat::service
