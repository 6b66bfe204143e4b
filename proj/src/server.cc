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

#include "cskb/server.h"

#include <httplib.h>

#include <csignal>
#include <iostream>
#include <thread>

#include "cskb/error.h"
#include "cskb/snapshot.h"

namespace cskb {

void ServiceConfig::Validate() const {
  if (snapshots.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no snapshot configured");
  }
  if (port < 0 || port > 65535) {
    throw Error(ErrorCode::kInvalidArgument, "port out of range");
  }
}

std::shared_ptr<const Catalog> LoadServiceCatalog(const ServiceConfig& config) {
  config.Validate();
  auto merged = std::make_shared<Catalog>();
  for (const auto& path : config.snapshots) {
    Catalog part;
    try {
      part = LoadSnapshot(path);
    } catch (const Error& e) {
      throw Error(e.code(),
                  "failed to load snapshot " + path.string() + ": " + e.what());
    }
    for (const auto& r : part.resources()) {
      if (!config.resources.empty() &&
          std::find(config.resources.begin(), config.resources.end(),
                    r->name()) == config.resources.end()) {
        continue;
      }
      merged->Add(r);
    }
  }
  if (merged->empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "no resource configured after loading snapshots");
  }
  return merged;
}

HttpServer::HttpServer(std::shared_ptr<const Catalog> catalog)
    : api_(std::move(catalog)), server_(std::make_unique<httplib::Server>()) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    ApiRequest request;
    request.method = req.method;
    request.path = req.path;
    for (const auto& [key, value] : req.params) request.params[key] = value;
    request.body = req.body;
    ApiResponse response = api_.Handle(request);
    res.status = response.status;
    res.set_content(response.body, "application/json; charset=utf-8");
  };
  server_->Get(".*", handler);
  server_->Post(".*", handler);
}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

bool HttpServer::ListenAfterBind() { return server_->listen_after_bind(); }

void HttpServer::Stop() {
  if (server_) server_->stop();
}

bool HttpServer::is_running() const { return server_->is_running(); }

int RunService(const ServiceConfig& config) {
  auto catalog = LoadServiceCatalog(config);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  HttpServer server(catalog);
  int port = server.Bind(config.host, config.port);
  if (port < 0) {
    std::cerr << "cannot bind " << config.host << ":" << config.port << "\n";
    return 1;
  }
  std::cerr << "serving " << catalog->size() << " resource(s) on http://"
            << config.host << ":" << port << "\n";

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    std::cerr << "signal " << sig << ", shutting down\n";
    server.Stop();
  });
  bool ok = server.ListenAfterBind();
  if (!ok) {
    // Wake the waiter if listening failed without a signal.
    pthread_kill(waiter.native_handle(), SIGTERM);
  }
  waiter.join();
  return ok ? 0 : 1;
}

}  // namespace cskb
