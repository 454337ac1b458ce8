#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace meshat {

// Opaque identifiers. Each id kind prints with a one-letter prefix ("a12",
// "g3") so that ids of different kinds never collide in paths or exports.
template <typename Tag>
struct Id {
  std::uint64_t value{0};

  constexpr Id() = default;
  constexpr explicit Id(std::uint64_t v) : value(v) {}

  constexpr bool valid() const { return value != 0; }

  std::string str() const { return std::string(1, Tag::prefix) + std::to_string(value); }

  static std::optional<Id> parse(std::string_view text) {
    if (text.size() < 2 || text.front() != Tag::prefix) return std::nullopt;
    std::uint64_t v = 0;
    for (char c : text.substr(1)) {
      if (c < '0' || c > '9') return std::nullopt;
      v = v * 10 + static_cast<std::uint64_t>(c - '0');
    }
    if (v == 0) return std::nullopt;
    return Id(v);
  }

  friend constexpr auto operator<=>(const Id&, const Id&) = default;
};

struct ActorTag { static constexpr char prefix = 'a'; };
struct GroupTag { static constexpr char prefix = 'g'; };
struct TaskTag { static constexpr char prefix = 't'; };
struct DeliverableTag { static constexpr char prefix = 'd'; };
struct PostTag { static constexpr char prefix = 'p'; };
struct SubjectTag { static constexpr char prefix = 's'; };
struct DiscussionTag { static constexpr char prefix = 'q'; };

using ActorId = Id<ActorTag>;
using GroupId = Id<GroupTag>;
using TaskId = Id<TaskTag>;
using DeliverableId = Id<DeliverableTag>;
using PostId = Id<PostTag>;
using SubjectId = Id<SubjectTag>;
using DiscussionId = Id<DiscussionTag>;

using Seq = std::uint64_t;

}  // namespace meshat

template <typename Tag>
struct std::hash<meshat::Id<Tag>> {
  std::size_t operator()(const meshat::Id<Tag>& id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};
