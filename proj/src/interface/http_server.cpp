#include "prefboard/interface/http_server.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>

namespace prefboard::interface {

namespace {

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code,
                const std::string& message, const Json& details = Json::object()) {
  send_json(res, status, {{"code", code}, {"message", message}, {"details", details}});
}

template <class F>
void guarded(httplib::Response& res, F&& body) {
  try {
    body();
  } catch (const RequestError& e) {
    send_error(res, 400, e.code(), e.what(), e.details());
  } catch (const ValidationError& e) {
    send_error(res, 400, "invalid_request", e.what());
  } catch (const std::exception& e) {
    spdlog::error("request failed: {}", e.what());
    send_error(res, 500, "internal", e.what());
  }
}

}  // namespace

HttpServer::HttpServer(RankService& service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto& s = *server_;
  // httplib defaults to SO_REUSEPORT, which would let a second server share a
  // busy port silently.
  s.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  s.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, service_.health_json()); });
  });
  s.Get("/topics", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, service_.topics_json()); });
  });
  s.Get("/models", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, service_.models_json()); });
  });
  s.Get("/leaderboard/default", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, leaderboard::to_json(service_.default_leaderboard())); });
  });
  s.Get(R"(/snapshots/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const std::string id = req.matches[1];
      if (auto snap = service_.snapshot(id)) {
        send_json(res, 200, leaderboard::to_json(*snap));
      } else {
        send_error(res, 404, "not_found", "no snapshot " + id, {{"id", id}});
      }
    });
  });
  s.Post("/rankings", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      Json body;
      try {
        body = req.body.empty() ? Json::object() : Json::parse(req.body);
      } catch (const Json::parse_error& e) {
        throw RequestError("invalid_json", e.what());
      }
      send_json(res, 200, leaderboard::to_json(service_.handle_rank(RankRequest::from_json(body))));
    });
  });
  s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) send_error(res, res.status, "http_" + std::to_string(res.status), "no such route");
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = server_->bind_to_any_port(host);
  } else if (!server_->bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
  bound_ = true;
  return bound;
}

void HttpServer::listen() {
  if (!bound_) throw Error("bind before listen");
  server_->listen_after_bind();
}

void HttpServer::start() {
  if (!bound_) throw Error("bind before start");
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void HttpServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace prefboard::interface
