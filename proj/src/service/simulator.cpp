#include "meshat/service/simulator.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <string>

#include "meshat/course.hpp"
#include "meshat/error.hpp"
#include "meshat/service/seed.hpp"
#include "meshat/sharing.hpp"

namespace meshat::service {

SimulationConfig& SimulationConfig::silence() {
  hours_per_student_week = 0;
  frame_of_mind_prob = self_report_prob = 0;
  tasks_per_group = task_progress_prob = task_reassign_prob = 0;
  deliverable_submit_prob = deliverable_accept_prob = deliverable_comment_prob = 0;
  student_post_prob = group_post_prob = group_confirm_prob = 0;
  skill_update_prob = discussion_prob = reply_prob = contract_prob = evaluation_prob = 0;
  return *this;
}

void SimulationConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (groups == 0) fail("groups must be positive");
  if (members_per_group < 2) fail("members_per_group must be at least 2");
  if (weeks == 0 || weeks > 520) fail("weeks must lie in [1, 520]");
  if (!(hours_per_student_week >= 0 && hours_per_student_week <= 80))
    fail("hours_per_student_week must lie in [0, 80]");
  if (!(tasks_per_group >= 0 && tasks_per_group <= 50)) fail("tasks_per_group must lie in [0, 50]");
  const std::array<std::pair<const char*, double>, 15> probs{{
      {"frame_of_mind_prob", frame_of_mind_prob},
      {"self_report_prob", self_report_prob},
      {"task_progress_prob", task_progress_prob},
      {"task_reassign_prob", task_reassign_prob},
      {"deliverable_submit_prob", deliverable_submit_prob},
      {"deliverable_accept_prob", deliverable_accept_prob},
      {"deliverable_comment_prob", deliverable_comment_prob},
      {"student_post_prob", student_post_prob},
      {"group_post_prob", group_post_prob},
      {"group_confirm_prob", group_confirm_prob},
      {"skill_update_prob", skill_update_prob},
      {"discussion_prob", discussion_prob},
      {"reply_prob", reply_prob},
      {"contract_prob", contract_prob},
      {"evaluation_prob", evaluation_prob},
  }};
  for (const auto& [name, v] : probs)
    if (!(v >= 0 && v <= 1)) fail(std::string(name) + " must lie in [0, 1]");
}

namespace {

// Draws are built from raw engine output so that logs do not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return p > 0 && uniform() < p; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }
  int between(int lo, int hi) { return lo + static_cast<int>(below(hi - lo + 1)); }
  std::size_t count(double rate) {
    const double whole = std::floor(rate);
    return static_cast<std::size_t>(whole) + (chance(rate - whole) ? 1 : 0);
  }
  template <typename C>
  const auto& pick(const C& c) {
    auto it = c.begin();
    std::advance(it, below(c.size()));
    return *it;
  }

 private:
  std::mt19937_64 gen_;
};

constexpr std::array kSkills{"Planning", "Requirements analysis", "Risk management",
                             "Quality assurance", "Reporting", "Client communication"};

constexpr int kWorkdays = 5;

class Simulation {
 public:
  Simulation(Platform& p, const SimulationConfig& cfg, const indicators::Questionnaire& q)
      : p_(p), cfg_(cfg), q_(q), rng_(cfg.seed) {}

  SimulationResult run();

 private:
  using Action = std::function<void()>;

  const State& s() const { return p_.state(); }
  void at(int day, Action a) { days_[day].push_back(std::move(a)); }
  void schedule_week();
  void schedule_group(const ProjectGroup& g);
  void schedule_tutor(ActorId tutor);
  void run_days();
  void finish();
  void tick() { clock_->advance(std::chrono::seconds(rng_.between(1, 60))); }

  std::string text(const char* what, ActorId who) {
    return std::string(what) + " from " + s().actors.at(who).name + " in " + week_.str();
  }

  Platform& p_;
  const SimulationConfig& cfg_;
  const indicators::Questionnaire& q_;
  Rng rng_;
  std::shared_ptr<ManualClock> clock_ = std::make_shared<ManualClock>(Timestamp{});
  IsoWeek week_;
  std::array<std::vector<Action>, 7> days_;
};

void Simulation::schedule_group(const ProjectGroup& g) {
  const GroupId gid = g.id;
  const std::vector<ActorId> members(g.member_ids.begin(), g.member_ids.end());
  const ActorId leader = g.leader_id;
  const std::array tutors{g.technical_tutor_id, g.management_tutor_id};

  for (ActorId m : members) {
    if (cfg_.hours_per_student_week > 0) {
      const double weekly = cfg_.hours_per_student_week * (0.5 + rng_.uniform());
      const auto quarters = static_cast<long>(std::llround(weekly * 4));
      std::array<long, kWorkdays> split{};
      for (long i = 0; i < quarters; ++i) ++split[rng_.below(kWorkdays)];
      for (int d = 0; d < kWorkdays; ++d) {
        if (split[d] == 0) continue;
        const double hours = static_cast<double>(split[d]) / 4.0;
        const Date date = week_.first_day() + std::chrono::days(d);
        at(d, [this, m, date, hours] { core::record_time_entry(p_, m, m, date, hours); });
      }
    }
    if (rng_.chance(cfg_.frame_of_mind_prob)) {
      const int score = rng_.between(1, 5);
      at(static_cast<int>(rng_.below(kWorkdays)), [this, m, score] {
        indicators::record_frame_of_mind(p_, m, m, week_, score);
      });
    }
    if (rng_.chance(cfg_.self_report_prob)) {
      std::vector<SelfReportItem> items;
      for (const auto& [dim, prompts] : q_.prompts)
        for (const auto& prompt : prompts) items.push_back({dim, prompt, rng_.between(1, 5)});
      at(static_cast<int>(rng_.below(kWorkdays)), [this, m, items] {
        indicators::record_self_report(p_, m, m, week_, items, q_);
      });
    }
    if (rng_.chance(cfg_.student_post_prob)) {
      at(static_cast<int>(rng_.below(kWorkdays)),
         [this, m] { sharing::write_student_post(p_, m, m, text("Notes", m)); });
    }
  }

  for (std::size_t n = rng_.count(cfg_.tasks_per_group); n > 0; --n) {
    const ActorId creator = rng_.pick(members);
    std::optional<ActorId> assignee;
    if (rng_.chance(0.8)) assignee = rng_.pick(members);
    const int length = rng_.between(7, 28);
    const double dep_seed = rng_.uniform();
    at(static_cast<int>(rng_.below(kWorkdays)),
       [this, gid, creator, assignee, length, dep_seed] {
         core::TaskFields f;
         f.title = "Task " + std::to_string(s().next_task);
         f.assignee = assignee;
         std::vector<TaskId> existing;
         for (const auto& [tid, t] : s().tasks)
           if (t.group_id == gid) existing.push_back(tid);
         // Depend on up to two of the most recent tasks of the group.
         const auto deps = static_cast<std::size_t>(dep_seed * 3);
         for (std::size_t i = 0; i < deps && i < existing.size(); ++i)
           f.dependencies.insert(existing[existing.size() - 1 - i]);
         f.planned_start = date_of(clock_->now());
         f.planned_end = f.planned_start + std::chrono::days(length);
         core::add_task(p_, creator, gid, f);
       });
  }

  if (cfg_.task_progress_prob > 0 || cfg_.task_reassign_prob > 0) {
    at(static_cast<int>(rng_.below(kWorkdays)), [this, gid, members] {
      std::vector<TaskId> open;
      for (const auto& [tid, t] : s().tasks)
        if (t.group_id == gid && t.status != TaskStatus::Done) open.push_back(tid);
      for (TaskId tid : open) {
        const Task& t = *s().task(tid);
        core::TaskChanges c;
        if (rng_.chance(cfg_.task_progress_prob))
          c.status = t.status == TaskStatus::Planned ? TaskStatus::Active : TaskStatus::Done;
        if (rng_.chance(cfg_.task_reassign_prob)) {
          const ActorId other = rng_.pick(members);
          if (other != t.assignee_id) c.assignee = other;
        }
        if (!c.status && !c.assignee) continue;
        const ActorId actor = t.assignee_id.value_or(rng_.pick(members));
        core::update_task(p_, actor, gid, tid, c);
        tick();
      }
    });
  }

  const Date horizon = week_.last_day() + std::chrono::days(7);
  for (const auto& [did, d] : s().deliverables) {
    if (d.group_id != gid) continue;
    const DeliverableId id = did;
    if (!d.submitted_at && d.due <= horizon && rng_.chance(cfg_.deliverable_submit_prob)) {
      const ActorId who = rng_.pick(members);
      at(static_cast<int>(rng_.below(kWorkdays)), [this, id, who] {
        if (!s().deliverable(id)->submitted_at) core::submit_deliverable(p_, who, id);
      });
    } else if (d.submitted_at && !d.accepted_at) {
      if (rng_.chance(cfg_.deliverable_comment_prob)) {
        const ActorId who = rng_.chance(0.5) ? rng_.pick(tutors) : leader;
        at(static_cast<int>(rng_.below(kWorkdays)), [this, id, who] {
          core::comment_deliverable(p_, who, id, text("Review", who));
        });
      }
      if (rng_.chance(cfg_.deliverable_accept_prob)) {
        const ActorId who = rng_.pick(tutors);
        at(kWorkdays - 1, [this, id, who] {
          if (!s().deliverable(id)->accepted_at) core::accept_deliverable(p_, who, id);
        });
      }
    }
  }

  if (rng_.chance(cfg_.group_post_prob)) {
    const ActorId who = rng_.pick(members);
    at(static_cast<int>(rng_.below(kWorkdays)),
       [this, who, gid] { sharing::propose_group_post(p_, who, gid, text("Group news", who)); });
  }
  if (cfg_.group_confirm_prob > 0) {
    at(kWorkdays - 1, [this, gid, leader] {
      std::vector<PostId> drafts;
      for (PostId pid : s().blogs.at(BlogOwner{gid}).posts)
        if (s().posts.at(pid).status == PostStatus::Draft) drafts.push_back(pid);
      for (PostId pid : drafts) {
        if (!rng_.chance(cfg_.group_confirm_prob)) continue;
        sharing::confirm_group_post(p_, leader, pid);
        tick();
      }
    });
  }
  if (rng_.chance(cfg_.skill_update_prob)) {
    const std::string skill = rng_.pick(kSkills);
    const bool done = rng_.chance(0.5);
    at(static_cast<int>(rng_.below(kWorkdays)),
       [this, leader, gid, skill, done] { core::set_skill(p_, leader, gid, skill, done); });
  }
}

void Simulation::schedule_tutor(ActorId tutor) {
  if (rng_.chance(cfg_.discussion_prob)) {
    const double a = rng_.uniform();
    const double b = rng_.uniform();
    at(static_cast<int>(rng_.below(kWorkdays)), [this, tutor, a, b] {
      const auto& subjects = s().forum.subjects();
      auto nth = [&](double u) {
        auto it = subjects.begin();
        std::advance(it, static_cast<std::ptrdiff_t>(u * static_cast<double>(subjects.size())));
        return it->first;
      };
      std::set<SubjectId> tags{nth(a)};
      if (b < 0.5) tags.insert(nth(b * 2));
      sharing::create_discussion(p_, tutor, text("Question", tutor), text("Opening", tutor),
                                 tags);
    });
  }
  if (rng_.chance(cfg_.reply_prob)) {
    const double u = rng_.uniform();
    at(static_cast<int>(rng_.below(kWorkdays)), [this, tutor, u] {
      const auto& ds = s().forum.discussions();
      if (ds.empty()) return;
      auto it = ds.begin();
      std::advance(it, static_cast<std::ptrdiff_t>(u * static_cast<double>(ds.size())));
      sharing::reply(p_, tutor, it->first, text("Reply", tutor));
    });
  }
}

void Simulation::schedule_week() {
  for (const auto& [gid, g] : s().groups) schedule_group(g);
  for (const auto& [aid, a] : s().actors)
    if (is_tutor(a.role)) schedule_tutor(aid);
}

void Simulation::run_days() {
  for (int d = 0; d < 7; ++d) {
    const Timestamp morning = start_of(week_.first_day() + std::chrono::days(d)) + std::chrono::hours(8);
    if (clock_->now() < morning) clock_->set(morning);
    for (auto& action : days_[d]) {
      action();
      tick();
    }
    days_[d].clear();
  }
}

void Simulation::finish() {
  const ActorId director = director_of(s());
  const Timestamp close_day = start_of(week_.next().first_day()) + std::chrono::hours(8);
  if (clock_->now() < close_day) clock_->set(close_day);

  for (const auto& [gid, g] : s().groups) {
    if (!rng_.chance(cfg_.evaluation_prob)) continue;
    const double grade = rng_.between(16, 36) / 2.0;
    indicators::evaluate_group(p_, g.technical_tutor_id, gid, grade);
    tick();
    for (ActorId m : g.member_ids) {
      const double adj = rng_.between(-8, 8) / 4.0;
      indicators::evaluate_student(p_, g.management_tutor_id, m, adj);
      tick();
    }
  }
  core::advance_course(p_, director);
  tick();

  std::vector<ActorId> owners;
  for (const auto& [owner, c] : s().contracts) owners.push_back(owner);
  for (ActorId owner : owners) {
    std::vector<Seq> links;
    for (const auto& e : p_.log()) {
      if (links.size() == 3) break;
      if (e.kind() == EventKind::BlogPost && e.actor_id == owner) links.push_back(e.seq);
    }
    ContractAnswers answers = s().contracts.at(owner).answers;
    answers[4] = "Revised: " + answers[4];
    sharing::revise_learning_contract(p_, owner, owner, answers, links);
    tick();
  }
}

SimulationResult Simulation::run() {
  if (p_.last_seq() == 0) {
    p_.set_clock(stepping_clock(setup_epoch()));
    seed_course(p_, cfg_.groups, cfg_.members_per_group);
  }
  if (s().groups.size() != cfg_.groups)
    throw Error(ErrorCode::InvalidConfig, "the course has " + std::to_string(s().groups.size()) +
                                              " groups, the config expects " +
                                              std::to_string(cfg_.groups));
  for (const auto& [gid, g] : s().groups)
    if (g.member_ids.size() != cfg_.members_per_group)
      throw Error(ErrorCode::InvalidConfig, gid.str() + " does not have " +
                                                std::to_string(cfg_.members_per_group) +
                                                " members");

  const Course& course = core::require_course(s());
  week_ = IsoWeek::of(course.calendar.front().start);
  const Timestamp last = p_.log().empty() ? Timestamp{} : p_.log().back().timestamp;
  clock_->set(std::max(last + std::chrono::seconds(1),
                      start_of(week_.first_day()) + std::chrono::hours(7)));
  p_.set_clock([clock = clock_] { return clock->now(); });

  SimulationResult result;
  result.first_seq = p_.last_seq() + 1;
  if (course.status == CourseStatus::Setup) {
    core::advance_course(p_, director_of(s()));
    tick();
  }
  core::require_running(s());

  if (cfg_.contract_prob > 0) {
    std::vector<ActorId> students;
    for (const auto& [aid, a] : s().actors)
      if (is_student(a.role) && !s().contracts.contains(aid) && rng_.chance(cfg_.contract_prob))
        students.push_back(aid);
    for (ActorId st : students) {
      ContractAnswers answers;
      for (std::size_t i = 0; i < answers.size(); ++i)
        answers[i] = "Answer " + std::to_string(i + 1) + " of " + s().actors.at(st).name;
      sharing::init_learning_contract(p_, st, st, answers);
      tick();
    }
  }

  result.first_week = week_;
  for (std::size_t w = 0; w < cfg_.weeks; ++w) {
    if (w > 0) week_ = week_.next();
    schedule_week();
    run_days();
  }
  result.last_week = week_;
  if (cfg_.close_course) finish();

  result.last_seq = p_.last_seq();
  return result;
}

}  // namespace

SimulationResult simulate(Platform& p, const SimulationConfig& config,
                          const indicators::Questionnaire& questionnaire) {
  config.validate();
  return Simulation(p, config, questionnaire).run();
}

}  // namespace meshat::service
