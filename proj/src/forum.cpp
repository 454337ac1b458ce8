#include "meshat/forum.hpp"

#include <algorithm>
#include <array>
#include <deque>

#include "meshat/error.hpp"

namespace meshat {

namespace {

constexpr std::array<std::string_view, 10> kTutorRoles{
    "Social catalyst",  "Intellectual catalyst", "Individualiser", "Autonomiser",
    "Relational coach", "Educationalist",        "Content expert", "Evaluator",
    "Qualimetror",      "Other",
};

constexpr std::array<std::string_view, 4> kPhases{"Tender", "Master plan", "Development",
                                                  "Closure"};

}  // namespace

std::string_view to_string(TaxonomyRoot r) {
  switch (r) {
    case TaxonomyRoot::RolesAndTasks: return "RolesAndTasks";
    case TaxonomyRoot::ProjectCalendar: return "ProjectCalendar";
    case TaxonomyRoot::GroupProgress: return "GroupProgress";
  }
  return "?";
}

std::string_view to_string(SubjectStatus s) {
  return s == SubjectStatus::Seed ? "Seed" : "Proposed";
}

std::optional<TaxonomyRoot> parse_taxonomy_root(std::string_view s) {
  for (auto r : {TaxonomyRoot::RolesAndTasks, TaxonomyRoot::ProjectCalendar,
                 TaxonomyRoot::GroupProgress})
    if (to_string(r) == s) return r;
  return std::nullopt;
}

std::optional<SubjectStatus> parse_subject_status(std::string_view s) {
  if (s == "Seed") return SubjectStatus::Seed;
  if (s == "Proposed") return SubjectStatus::Proposed;
  return std::nullopt;
}

Forum Forum::seeded() {
  Forum f;
  f.add_root(TaxonomyRoot::RolesAndTasks, "Roles and tasks");
  f.add_root(TaxonomyRoot::ProjectCalendar, "Project calendar");
  f.add_root(TaxonomyRoot::GroupProgress, "Group progress");
  const SubjectId roles = f.root_subject(TaxonomyRoot::RolesAndTasks);
  for (auto label : kTutorRoles)
    f.add_subject(f.next_subject_id(), roles, std::string(label), SubjectStatus::Seed);
  const SubjectId calendar = f.root_subject(TaxonomyRoot::ProjectCalendar);
  for (auto label : kPhases)
    f.add_subject(f.next_subject_id(), calendar, std::string(label), SubjectStatus::Seed);
  return f;
}

void Forum::add_root(TaxonomyRoot root, std::string label) {
  const SubjectId id{next_subject_++};
  subjects_.emplace(id, TaxonomySubject{id, std::move(label), std::nullopt, root,
                                        SubjectStatus::Seed});
}

const TaxonomySubject* Forum::subject(SubjectId id) const {
  auto it = subjects_.find(id);
  return it == subjects_.end() ? nullptr : &it->second;
}

const Discussion* Forum::discussion(DiscussionId id) const {
  auto it = discussions_.find(id);
  return it == discussions_.end() ? nullptr : &it->second;
}

SubjectId Forum::root_subject(TaxonomyRoot root) const {
  for (const auto& [id, s] : subjects_)
    if (!s.parent_id && s.root == root) return id;
  throw Error(ErrorCode::UnknownTag, "taxonomy has no root " + std::string(to_string(root)));
}

std::vector<SubjectId> Forum::children(SubjectId parent) const {
  std::vector<SubjectId> out;
  for (const auto& [id, s] : subjects_)
    if (s.parent_id == parent) out.push_back(id);
  return out;
}

std::optional<SubjectId> Forum::find_child(SubjectId parent, std::string_view label) const {
  for (const auto& [id, s] : subjects_)
    if (s.parent_id == parent && s.label == label) return id;
  return std::nullopt;
}

bool Forum::is_ancestor_or_self(SubjectId ancestor, SubjectId node) const {
  std::optional<SubjectId> cur = node;
  // Bounded walk: a well-formed taxonomy has depth < number of subjects.
  for (std::size_t steps = 0; cur && steps <= subjects_.size(); ++steps) {
    if (*cur == ancestor) return true;
    const auto* s = subject(*cur);
    if (!s) return false;
    cur = s->parent_id;
  }
  return false;
}

void Forum::check_tags(const std::set<SubjectId>& tags) const {
  if (tags.empty()) throw Error(ErrorCode::EmptyTags, "a discussion needs at least one tag");
  for (auto t : tags)
    if (!subject(t)) throw Error(ErrorCode::UnknownTag, "unknown tag " + t.str());
}

void Forum::check_propose(SubjectId parent, std::string_view label) const {
  if (!subject(parent)) throw Error(ErrorCode::UnknownParent, "unknown parent " + parent.str());
  if (label.empty()) throw Error(ErrorCode::BadRequest, "empty subject label");
  if (find_child(parent, label))
    throw Error(ErrorCode::DuplicateLabel,
                "label '" + std::string(label) + "' already used under " + parent.str());
}

void Forum::check_rename(SubjectId id, std::string_view label) const {
  const auto* s = subject(id);
  if (!s) throw Error(ErrorCode::UnknownTag, "unknown subject " + id.str());
  if (label.empty()) throw Error(ErrorCode::BadRequest, "empty subject label");
  for (const auto& [other_id, other] : subjects_) {
    if (other_id != id && other.parent_id == s->parent_id && other.label == label)
      throw Error(ErrorCode::DuplicateLabel, "label '" + std::string(label) + "' already used");
  }
}

void Forum::check_merge(SubjectId source, SubjectId target) const {
  const auto* src = subject(source);
  if (!src) throw Error(ErrorCode::UnknownTag, "unknown subject " + source.str());
  if (!subject(target)) throw Error(ErrorCode::UnknownTag, "unknown subject " + target.str());
  if (!src->parent_id) throw Error(ErrorCode::InvalidMerge, "taxonomy roots cannot be merged");
  if (is_ancestor_or_self(source, target))
    throw Error(ErrorCode::InvalidMerge, "cannot merge a subject into its own subtree");
  for (auto child : children(source)) {
    const auto& label = subjects_.at(child).label;
    if (auto clash = find_child(target, label); clash && *clash != source)
      throw Error(ErrorCode::DuplicateLabel, "merge would duplicate label '" + label + "'");
  }
}

void Forum::add_subject(SubjectId id, SubjectId parent, std::string label, SubjectStatus status) {
  const TaxonomyRoot root = subjects_.at(parent).root;
  subjects_.insert_or_assign(id, TaxonomySubject{id, std::move(label), parent, root, status});
  next_subject_ = std::max(next_subject_, id.value + 1);
}

void Forum::rename(SubjectId id, std::string label) { subjects_.at(id).label = std::move(label); }

void Forum::reroot_subtree(SubjectId node, TaxonomyRoot root) {
  std::deque<SubjectId> pending{node};
  while (!pending.empty()) {
    const SubjectId cur = pending.front();
    pending.pop_front();
    subjects_.at(cur).root = root;
    for (auto c : children(cur)) pending.push_back(c);
  }
}

void Forum::merge(SubjectId source, SubjectId target) {
  const TaxonomyRoot target_root = subjects_.at(target).root;
  for (auto child : children(source)) {
    subjects_.at(child).parent_id = target;
    reroot_subtree(child, target_root);
  }
  subjects_.erase(source);
  for (auto& [id, d] : discussions_) {
    if (d.tags.erase(source) > 0) d.tags.insert(target);
  }
}

void Forum::open(DiscussionId id, std::string title, ActorId opener, std::set<SubjectId> tags,
                 ForumMessage first) {
  Discussion d{id, std::move(title), opener, std::move(tags), {std::move(first)}};
  discussions_.insert_or_assign(id, std::move(d));
  next_discussion_ = std::max(next_discussion_, id.value + 1);
}

void Forum::reply(DiscussionId id, ForumMessage message) {
  discussions_.at(id).messages.push_back(std::move(message));
}

std::vector<DiscussionId> Forum::search(const std::set<SubjectId>& query) const {
  for (auto q : query)
    if (!subject(q)) throw Error(ErrorCode::UnknownTag, "unknown tag " + q.str());

  std::multimap<SubjectId, SubjectId> child_index;
  for (const auto& [id, s] : subjects_)
    if (s.parent_id) child_index.emplace(*s.parent_id, id);

  // Expand each query tag to its subtree.
  std::vector<std::set<SubjectId>> closures;
  for (auto q : query) {
    std::set<SubjectId> closure{q};
    std::deque<SubjectId> pending{q};
    while (!pending.empty()) {
      auto [lo, hi] = child_index.equal_range(pending.front());
      pending.pop_front();
      for (auto it = lo; it != hi; ++it)
        if (closure.insert(it->second).second) pending.push_back(it->second);
    }
    closures.push_back(std::move(closure));
  }

  struct Hit {
    std::size_t score;
    Timestamp last;
    DiscussionId id;
  };
  std::vector<Hit> hits;
  for (const auto& [id, d] : discussions_) {
    std::size_t score = 0;
    for (const auto& closure : closures) {
      if (std::any_of(d.tags.begin(), d.tags.end(),
                      [&](SubjectId t) { return closure.contains(t); }))
        ++score;
    }
    if (score > 0) hits.push_back({score, d.last_activity(), id});
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.last != b.last) return a.last > b.last;
    return a.id < b.id;
  });
  std::vector<DiscussionId> out;
  out.reserve(hits.size());
  for (const auto& h : hits) out.push_back(h.id);
  return out;
}

std::optional<std::string> Forum::structure_violation() const {
  std::size_t roots = 0;
  std::set<TaxonomyRoot> root_kinds;
  for (const auto& [id, s] : subjects_) {
    if (!s.parent_id) {
      ++roots;
      root_kinds.insert(s.root);
      continue;
    }
    const auto* parent = subject(*s.parent_id);
    if (!parent) return "subject " + id.str() + " has a dangling parent";
    if (parent->root != s.root) return "subject " + id.str() + " disagrees with its parent's root";
    // Walking up must reach a root within |subjects| steps.
    std::optional<SubjectId> cur = s.parent_id;
    std::size_t steps = 0;
    while (cur) {
      if (*cur == id || ++steps > subjects_.size()) return "cycle through " + id.str();
      cur = subjects_.at(*cur).parent_id;
    }
  }
  if (roots != 3 || root_kinds.size() != 3) return "taxonomy must have exactly three roots";
  std::set<std::pair<std::optional<SubjectId>, std::string>> seen;
  for (const auto& [id, s] : subjects_) {
    if (!seen.emplace(s.parent_id, s.label).second)
      return "duplicate sibling label '" + s.label + "'";
  }
  for (const auto& [id, d] : discussions_) {
    if (d.tags.empty()) return "discussion " + id.str() + " has no tags";
    for (auto t : d.tags)
      if (!subject(t)) return "discussion " + id.str() + " references unknown tag " + t.str();
  }
  return std::nullopt;
}

Forum Forum::from_parts(std::vector<TaxonomySubject> subjects,
                        std::vector<Discussion> discussions) {
  Forum f;
  for (auto& s : subjects) {
    f.next_subject_ = std::max(f.next_subject_, s.id.value + 1);
    f.subjects_.insert_or_assign(s.id, std::move(s));
  }
  for (auto& d : discussions) {
    f.next_discussion_ = std::max(f.next_discussion_, d.id.value + 1);
    f.discussions_.insert_or_assign(d.id, std::move(d));
  }
  return f;
}

}  // namespace meshat
