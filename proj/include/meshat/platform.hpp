#pragma once

#include <functional>
#include <span>
#include <vector>

#include "meshat/events.hpp"
#include "meshat/state.hpp"

namespace meshat {

// Durable destination for appended events. `append` must persist the event
// before returning, or throw Error(IoFailure) leaving nothing behind.
class EventSink {
 public:
  virtual ~EventSink() = default;
  virtual void append(const Event& event) = 0;
};

// Owner of the append-only log and the state derived from it. Every
// mutating operation validates against `state()` and then calls `append`,
// the single point where events enter the log. Not thread-safe; the service
// layer serializes writers.
class Platform {
 public:
  using Clock = std::function<Timestamp()>;

  Platform();
  explicit Platform(Clock clock);

  const State& state() const { return state_; }
  const std::vector<Event>& log() const { return log_; }
  std::span<const Event> log_prefix(Seq up_to) const;
  Seq last_seq() const { return state_.last_seq; }

  Timestamp now() const { return clock_(); }
  void set_clock(Clock clock) { clock_ = std::move(clock); }
  void set_sink(EventSink* sink) { sink_ = sink; }

  const Event& append(ActorId actor, Payload payload);

  // Re-appends an event read from an external log, keeping its seq and
  // timestamp. The seq must be exactly last_seq() + 1.
  void replay_event(const Event& event);

 private:
  void commit(Event event);

  Clock clock_;
  EventSink* sink_{nullptr};
  std::vector<Event> log_;
  State state_;
};

// A clock advanced by hand, for simulations and tests.
class ManualClock {
 public:
  explicit ManualClock(Timestamp start) : now_(start) {}
  Timestamp operator()() const { return now_; }
  void set(Timestamp t) { now_ = t; }
  void advance(std::chrono::seconds by) { now_ += by; }
  Timestamp now() const { return now_; }

 private:
  Timestamp now_;
};

}  // namespace meshat
