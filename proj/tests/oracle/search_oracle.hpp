#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "meshat/forum.hpp"

namespace meshat::oracle {

// Walks parent pointers upward from every discussion tag.
inline bool under(const Forum& f, SubjectId ancestor, SubjectId node) {
  std::optional<SubjectId> cur = node;
  while (cur) {
    if (*cur == ancestor) return true;
    cur = f.subjects().at(*cur).parent_id;
  }
  return false;
}

inline std::vector<DiscussionId> search(const Forum& f, const std::set<SubjectId>& query) {
  struct Row {
    int score;
    Timestamp last;
    DiscussionId id;
  };
  std::vector<Row> rows;
  for (const auto& [id, d] : f.discussions()) {
    int score = 0;
    for (auto q : query) {
      bool hit = false;
      for (auto t : d.tags) hit = hit || under(f, q, t);
      score += hit ? 1 : 0;
    }
    if (score > 0) rows.push_back({score, d.messages.back().at, id});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.last != b.last) return a.last > b.last;
    return a.id < b.id;
  });
  std::vector<DiscussionId> out;
  for (const auto& r : rows) out.push_back(r.id);
  return out;
}

}  // namespace meshat::oracle
