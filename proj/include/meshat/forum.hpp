#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "meshat/ids.hpp"
#include "meshat/time.hpp"

namespace meshat {

// The tutors' community-of-practice forum: a tag taxonomy made of exactly
// three trees plus the discussions indexed by it.
enum class TaxonomyRoot { RolesAndTasks, ProjectCalendar, GroupProgress };
enum class SubjectStatus { Seed, Proposed };

std::string_view to_string(TaxonomyRoot r);
std::string_view to_string(SubjectStatus s);
std::optional<TaxonomyRoot> parse_taxonomy_root(std::string_view s);
std::optional<SubjectStatus> parse_subject_status(std::string_view s);

struct TaxonomySubject {
  SubjectId id;
  std::string label;
  std::optional<SubjectId> parent_id;
  TaxonomyRoot root{};
  SubjectStatus status{SubjectStatus::Seed};
  friend bool operator==(const TaxonomySubject&, const TaxonomySubject&) = default;
};

struct ForumMessage {
  ActorId author_id;
  std::string body;
  Timestamp at{};
  Seq seq{0};
  friend bool operator==(const ForumMessage&, const ForumMessage&) = default;
};

struct Discussion {
  DiscussionId id;
  std::string title;
  ActorId opener_id;
  std::set<SubjectId> tags;
  std::vector<ForumMessage> messages;

  Timestamp last_activity() const { return messages.empty() ? Timestamp{} : messages.back().at; }
  friend bool operator==(const Discussion&, const Discussion&) = default;
};

class Forum {
 public:
  // Three roots; RolesAndTasks carries the ten tutor roles and
  // ProjectCalendar the four course phases.
  static Forum seeded();

  const std::map<SubjectId, TaxonomySubject>& subjects() const { return subjects_; }
  const std::map<DiscussionId, Discussion>& discussions() const { return discussions_; }

  const TaxonomySubject* subject(SubjectId id) const;
  const Discussion* discussion(DiscussionId id) const;
  SubjectId root_subject(TaxonomyRoot root) const;
  std::vector<SubjectId> children(SubjectId parent) const;
  std::optional<SubjectId> find_child(SubjectId parent, std::string_view label) const;
  bool is_ancestor_or_self(SubjectId ancestor, SubjectId node) const;

  SubjectId next_subject_id() const { return SubjectId{next_subject_}; }
  DiscussionId next_discussion_id() const { return DiscussionId{next_discussion_}; }

  // Validation; each throws meshat::Error on violation.
  void check_tags(const std::set<SubjectId>& tags) const;
  void check_propose(SubjectId parent, std::string_view label) const;
  void check_rename(SubjectId subject, std::string_view label) const;
  void check_merge(SubjectId source, SubjectId target) const;

  // Mutation; callers validate first.
  void add_subject(SubjectId id, SubjectId parent, std::string label, SubjectStatus status);
  void rename(SubjectId subject, std::string label);
  void merge(SubjectId source, SubjectId target);
  void open(DiscussionId id, std::string title, ActorId opener, std::set<SubjectId> tags,
            ForumMessage first);
  void reply(DiscussionId id, ForumMessage message);

  // Discussions matching at least one query tag (directly or through a
  // descendant), by descending match count, then most recent message, then id.
  std::vector<DiscussionId> search(const std::set<SubjectId>& query) const;

  // Empty when the taxonomy is a three-root forest with unique sibling
  // labels; otherwise a description of the first violation.
  std::optional<std::string> structure_violation() const;

  // Rebuild from exported parts; next ids resume after the largest seen.
  static Forum from_parts(std::vector<TaxonomySubject> subjects,
                          std::vector<Discussion> discussions);

  friend bool operator==(const Forum&, const Forum&) = default;

 private:
  void add_root(TaxonomyRoot root, std::string label);
  void reroot_subtree(SubjectId node, TaxonomyRoot root);

  std::map<SubjectId, TaxonomySubject> subjects_;
  std::map<DiscussionId, Discussion> discussions_;
  std::uint64_t next_subject_{1};
  std::uint64_t next_discussion_{1};
};

}  // namespace meshat
