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

#ifndef CSKB_API_H_
#define CSKB_API_H_

#include <map>
#include <memory>
#include <string>

#include "cskb/resource.h"

namespace cskb {

struct ApiRequest {
  std::string method = "GET";
  // URL-decoded path, e.g. "/api/subjects/elephant".
  std::string path;
  std::map<std::string, std::string> params;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string body;  // UTF-8 JSON

  friend bool operator==(const ApiResponse&, const ApiResponse&) = default;
};

// Read-only JSON API over an immutable catalog. Handle() is a pure function
// of the catalog and the request, safe to call from any number of threads.
//
//   GET  /api/resources
//   GET  /api/subjects/{subject}?resources=a,b[&k=10]
//   GET  /api/subject-names?prefix=...[&limit=20]
//   GET  /api/search?q=...[&resources=a,b][&page=1]      (50 per page)
//   GET  /api/aggregate?resource=...&predicate=...[&k=10]
//   GET  /api/top?resource=...&subject=...[&predicate=...][&k=10]
//   GET  /api/stats?resource=...[&top_n=...]
//   GET  /api/diagnostics?resource=...[&subject=...]
//   POST /api/join   {"resource": ..., "query": "..."} or structured patterns
//
// Errors are {"error": {"code": ..., "message": ...}} with 400/404/405.
class ApiService {
 public:
  static constexpr std::size_t kSearchPageSize = 50;

  explicit ApiService(std::shared_ptr<const Catalog> catalog);

  ApiResponse Handle(const ApiRequest& request) const;

 private:
  std::shared_ptr<const Catalog> catalog_;
};

}  // namespace cskb

#endif  // CSKB_API_H_
