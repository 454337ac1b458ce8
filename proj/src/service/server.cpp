#include "meshat/service/server.hpp"

#include "httplib.h"

namespace meshat::service {

Service::Service(Api& api) : api_(api), writer_([this] { writer_loop(); }) {}

Service::~Service() {
  {
    std::lock_guard lock(queue_mutex_);
    stopping_ = true;
  }
  queue_cv_.notify_all();
  writer_.join();
}

Response Service::handle(const Request& r) {
  if (!Api::is_mutation(r)) {
    std::shared_lock lock(state_mutex_);
    return api_.handle(r);
  }
  auto job = std::make_unique<Job>(Job{r, {}});
  auto done = job->done.get_future();
  {
    std::lock_guard lock(queue_mutex_);
    queue_.push_back(std::move(job));
  }
  queue_cv_.notify_one();
  return done.get();
}

void Service::writer_loop() {
  for (;;) {
    std::unique_ptr<Job> job;
    {
      std::unique_lock lock(queue_mutex_);
      queue_cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
      if (queue_.empty()) return;
      job = std::move(queue_.front());
      queue_.pop_front();
    }
    Response response;
    {
      std::unique_lock lock(state_mutex_);
      response = api_.handle(job->request);
    }
    job->done.set_value(std::move(response));
  }
}

struct HttpServer::Impl {
  Service& service;
  httplib::Server server;
};

namespace {

Request to_request(const httplib::Request& req) {
  Request r;
  r.method = req.method;
  r.path = req.path;
  for (const auto& [k, v] : req.params) r.query[k] = v;
  r.body = req.body;
  const auto auth = req.get_header_value("Authorization");
  constexpr std::string_view bearer = "Bearer ";
  if (auth.starts_with(bearer)) r.token = auth.substr(bearer.size());
  return r;
}

}  // namespace

HttpServer::HttpServer(Service& service) : impl_(new Impl{service, {}}) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    const Response out = impl_->service.handle(to_request(req));
    res.status = out.status;
    if (out.content_type == "application/json")
      res.set_content(out.body.dump(), out.content_type);
    else
      res.set_content(out.text, out.content_type);
  };
  impl_->server.Get(".*", handler);
  impl_->server.Post(".*", handler);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host)
                              : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0)
    throw Error(ErrorCode::BindFailure,
                "cannot listen on " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace meshat::service
