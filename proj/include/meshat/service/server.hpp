#pragma once

#include <condition_variable>
#include <deque>
#include <future>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <thread>

#include "meshat/service/api.hpp"
#include "meshat/service/config.hpp"

namespace meshat::service {

// Thread-safe front of an Api. Mutations are queued to one writer thread
// and the caller waits for its acknowledgment; reads run concurrently under
// a shared lock and therefore see the state at a single seq.
class Service {
 public:
  explicit Service(Api& api);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  Response handle(const Request& r);

  // Runs `fn` with shared access to the platform.
  template <typename Fn>
  auto read(Fn&& fn) {
    std::shared_lock lock(state_mutex_);
    return fn();
  }

 private:
  struct Job {
    Request request;
    std::promise<Response> done;
  };

  void writer_loop();

  Api& api_;
  std::shared_mutex state_mutex_;
  std::mutex queue_mutex_;
  std::condition_variable queue_cv_;
  std::deque<std::unique_ptr<Job>> queue_;
  bool stopping_{false};
  std::thread writer_;
};

// HTTP listener bound to config.host:config.port.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();

  // Binds and returns the bound port; throws Error(BindFailure).
  int bind(const std::string& host, int port);
  // Serves until stop() is called.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace meshat::service
