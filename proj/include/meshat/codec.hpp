#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "meshat/events.hpp"
#include "meshat/forum.hpp"

namespace meshat {

using Json = nlohmann::ordered_json;

// One self-describing record per event:
//   {"seq", "timestamp", "actor_id", "kind", "payload"}
// Encoding is canonical: decode followed by encode reproduces the bytes.
Json encode_event(const Event& e);
Event decode_event(const Json& j);  // throws Error(SchemaMismatch)

std::string event_to_line(const Event& e);  // no trailing newline
Event event_from_line(std::string_view line);

Json encode_payload(const Payload& p);
Payload decode_payload(EventKind kind, const Json& j);

// Forum export: taxonomy rows plus discussions with their messages.
Json encode_forum(const Forum& forum);
Forum decode_forum(const Json& j);

}  // namespace meshat
