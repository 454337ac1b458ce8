#include "meshat/platform.hpp"

#include "meshat/error.hpp"

namespace meshat {

Platform::Platform()
    : Platform([] { return std::chrono::time_point_cast<std::chrono::seconds>(
                        std::chrono::system_clock::now()); }) {}

Platform::Platform(Clock clock) : clock_(std::move(clock)) {}

std::span<const Event> Platform::log_prefix(Seq up_to) const {
  const auto n = std::min<std::size_t>(up_to, log_.size());
  return std::span<const Event>(log_.data(), n);
}

const Event& Platform::append(ActorId actor, Payload payload) {
  commit(Event{state_.last_seq + 1, clock_(), actor, std::move(payload)});
  return log_.back();
}

void Platform::replay_event(const Event& event) {
  if (event.seq != state_.last_seq + 1)
    throw Error(ErrorCode::SchemaMismatch,
                "expected seq " + std::to_string(state_.last_seq + 1) + ", found " +
                    std::to_string(event.seq));
  commit(event);
}

void Platform::commit(Event event) {
  if (sink_) sink_->append(event);
  log_.push_back(std::move(event));
  apply(state_, log_.back());
}

}  // namespace meshat
