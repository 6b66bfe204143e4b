// Copyright 2026 The CSKB Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CSKB_SERVER_H_
#define CSKB_SERVER_H_

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "cskb/api.h"
#include "cskb/resource.h"

namespace httplib {
class Server;
}

namespace cskb {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::vector<std::filesystem::path> snapshots;
  // Restricts the served resources to these names when non-empty.
  std::vector<std::string> resources;

  // Throws kInvalidArgument when no snapshot is configured.
  void Validate() const;
};

// Loads and merges every snapshot. Failures are rethrown with the failing
// snapshot path in the message; an empty result throws kInvalidArgument.
std::shared_ptr<const Catalog> LoadServiceCatalog(const ServiceConfig& config);

// HTTP front end for ApiService.
class HttpServer {
 public:
  explicit HttpServer(std::shared_ptr<const Catalog> catalog);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds; port 0 picks a free port. Returns the bound port or -1.
  int Bind(const std::string& host, int port);
  // Serves until Stop(). Call after Bind().
  bool ListenAfterBind();
  void Stop();
  bool is_running() const;

 private:
  ApiService api_;
  std::unique_ptr<httplib::Server> server_;
};

// Blocks serving `config` until SIGINT or SIGTERM.
int RunService(const ServiceConfig& config);

}  // namespace cskb

#endif  // CSKB_SERVER_H_
