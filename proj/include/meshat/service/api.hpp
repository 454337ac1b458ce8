#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "meshat/codec.hpp"
#include "meshat/error.hpp"
#include "meshat/indicators.hpp"
#include "meshat/platform.hpp"
#include "meshat/policy.hpp"

namespace meshat::service {

struct Request {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
  std::string token;  // bearer token, empty when absent
};

struct Response {
  int status{200};
  Json body;
  std::string content_type{"application/json"};
  std::string text{};  // raw body for non-JSON content
};

// The policy check that governs a route. Read routes enforce it before
// answering; write routes reach it through the domain operation they call.
struct Guard {
  policy::Action action{};
  policy::Resource resource;
};

struct ApiSession {
  std::string token;
  ActorId actor_id;
  Timestamp expires_at{};
};

int http_status(ErrorCode code);
Response error_response(const Error& e);

// Transport-independent HTTP JSON API. Successful payloads are wrapped as
// {"seq": <last seq seen>, "data": ...}; errors are {code, rule_id?, message}.
// Not synchronized except for the session table: the caller must hold the
// platform exclusively for mutations and shared for reads.
class Api {
 public:
  using WallClock = std::function<Timestamp()>;

  Api(Platform& p, indicators::Questionnaire questionnaire,
      std::chrono::seconds session_ttl = std::chrono::hours(8), WallClock wall = {});
  ~Api();

  Api(const Api&) = delete;
  Api& operator=(const Api&) = delete;

  Response handle(const Request& r);

  // True for requests that may append to the log.
  static bool is_mutation(const Request& r) { return r.method == "POST"; }

  // The guard of the route `r` resolves to. Null for routes outside the
  // resource model (session, course administration) and for unknown paths.
  std::optional<Guard> guard(const Request& r, ActorId actor) const;

  ApiSession open_session(ActorId actor);

  struct Context;
  struct Route;

 private:
  std::optional<ActorId> authenticate(const std::string& token);
  Response session(const Request& r);

  Platform& p_;
  indicators::Questionnaire questionnaire_;
  std::chrono::seconds ttl_;
  WallClock wall_;
  std::vector<Route> routes_;

  std::mutex sessions_mutex_;
  std::unordered_map<std::string, ApiSession> sessions_;
  std::mt19937_64 token_rng_;
};

}  // namespace meshat::service
