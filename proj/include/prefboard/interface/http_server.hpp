#pragma once

#include <memory>
#include <string>
#include <thread>

#include "prefboard/interface/rank_service.hpp"

namespace httplib {
class Server;
}

namespace prefboard::interface {

/// GET /topics, /models, /leaderboard/default, /snapshots/<id>, /health and
/// POST /rankings over a RankService. Errors are {code, message, details}:
/// 400 for bad requests, 404 for unknown snapshots, 500 otherwise.
class HttpServer {
 public:
  explicit HttpServer(RankService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds without serving; port 0 picks a free port. Returns the bound port.
  /// Throws Error when the address is taken.
  int bind(const std::string& host, int port);
  /// Serves on the calling thread until stop().
  void listen();
  /// Serves on a background thread.
  void start();
  void stop();

 private:
  RankService& service_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  bool bound_ = false;
};

}  // namespace prefboard::interface
