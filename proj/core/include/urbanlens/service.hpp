#pragma once

#include <map>
#include <memory>
#include <string>
#include <thread>

#include "urbanlens/config.hpp"
#include "urbanlens/spatial_index.hpp"
#include "urbanlens/workspace.hpp"

namespace urbanlens {

inline constexpr const char* kVersion = "1.0.0";

struct ApiRequest {
  std::string method = "GET";
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// Read-only JSON API over one workspace snapshot. Spatial indexes for
/// every point layer are built in the constructor; handle() never mutates
/// anything, so one instance serves concurrent requests.
class Api {
 public:
  explicit Api(std::shared_ptr<const Workspace> workspace, IndexConfig index = {});

  ApiResponse handle(const ApiRequest& request) const;
  const Workspace& workspace() const { return *workspace_; }
  /// Index backing the spatial lens of a point layer, or nullptr.
  const QuadTree* lens_index(LayerId layer) const;

 private:
  std::shared_ptr<const Workspace> workspace_;
  std::map<LayerId, QuadTree> indexes_;
};

/// Thin cpp-httplib adapter around Api.
class HttpServer {
 public:
  HttpServer(std::shared_ptr<const Api> api, ServerConfig config);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds and serves on a background thread. Port 0 picks a free port.
  /// Returns the bound port.
  int start();
  /// Blocks serving on the calling thread.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace urbanlens
