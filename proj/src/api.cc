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

#include "cskb/api.h"

#include <algorithm>
#include <charconv>
#include <nlohmann/json.hpp>
#include <set>

#include "cskb/diagnostics.h"
#include "cskb/error.h"
#include "cskb/query.h"
#include "cskb/text.h"

namespace cskb {
namespace {

using Json = nlohmann::ordered_json;

ApiResponse ErrorResponse(int status, std::string_view code,
                          const std::string& message) {
  Json j;
  j["error"]["code"] = code;
  j["error"]["message"] = message;
  return {status, j.dump()};
}

int StatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownResource:
    case ErrorCode::kNotFound:
      return 404;
    default:
      return 400;
  }
}

Json AssertionJson(const Assertion& a) {
  Json j;
  j["subject"] = a.subject;
  j["predicate"] = std::string(PredicateName(a.predicate));
  j["object"] = a.object;
  j["score"] = a.score ? Json(*a.score) : Json(nullptr);
  j["local_rank"] = a.local_rank;
  j["subject_rank"] = a.subject_rank;
  j["global_rank"] = a.global_rank;
  j["resource"] = a.resource ? a.resource->name : std::string();
  return j;
}

const std::string* Param(const ApiRequest& req, const std::string& name) {
  auto it = req.params.find(name);
  return it == req.params.end() ? nullptr : &it->second;
}

const std::string& RequireParam(const ApiRequest& req,
                                const std::string& name) {
  const std::string* v = Param(req, name);
  if (v == nullptr || v->empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "missing query parameter '" + name + "'");
  }
  return *v;
}

std::size_t SizeParam(const ApiRequest& req, const std::string& name,
                      std::size_t fallback, std::size_t max = 100000) {
  const std::string* v = Param(req, name);
  if (v == nullptr || v->empty()) return fallback;
  std::size_t out = 0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size() || out == 0 ||
      out > max) {
    throw Error(ErrorCode::kInvalidArgument,
                "parameter '" + name + "' must be an integer in [1, " +
                    std::to_string(max) + "]");
  }
  return out;
}

// Resources named by a comma list, or all of them when absent.
std::vector<const Resource*> SelectResources(const Catalog& catalog,
                                             const std::string* list) {
  std::vector<const Resource*> out;
  if (list == nullptr || list->empty()) {
    for (const auto& r : catalog.resources()) out.push_back(r.get());
    return out;
  }
  for (std::string_view name : SplitFields(*list, ',')) {
    std::string trimmed = CleanSurface(name);
    if (trimmed.empty()) continue;
    out.push_back(&catalog.Get(trimmed));
  }
  return out;
}

ApiResponse Resources(const Catalog& catalog) {
  Json j;
  j["resources"] = Json::array();
  for (const auto& r : catalog.resources()) {
    Json e;
    e["name"] = r->name();
    e["kind"] = std::string(ResourceKindName(r->id().kind));
    e["size"] = r->size();
    e["subjects"] = r->index().subjects().size();
    e["pairs"] = r->index().pair_count();
    const ResourceMetadata& m = r->metadata();
    e["top_k_per_pair"] =
        m.top_k_per_pair ? Json(*m.top_k_per_pair) : Json(nullptr);
    j["resources"].push_back(std::move(e));
  }
  return {200, j.dump()};
}

ApiResponse Subject(const Catalog& catalog, const ApiRequest& req,
                    std::string_view subject) {
  auto resources = SelectResources(catalog, Param(req, "resources"));
  std::size_t k = SizeParam(req, "k", 10, 1000);
  SubjectSummary summary = SummarizeSubject(subject, resources, k);
  Json j;
  j["subject"] = summary.subject;
  j["resources"] = Json::array();
  for (const ResourceSummary& rs : summary.resources) {
    Json r;
    r["name"] = rs.resource;
    r["predicates"] = Json::array();
    for (const PredicateSlot& slot : rs.slots) {
      Json s;
      s["predicate"] = std::string(PredicateName(slot.predicate));
      s["total"] = slot.total;
      s["assertions"] = Json::array();
      for (const Assertion& a : slot.top)
        s["assertions"].push_back(AssertionJson(a));
      r["predicates"].push_back(std::move(s));
    }
    j["resources"].push_back(std::move(r));
  }
  return {200, j.dump()};
}

ApiResponse SubjectNames(const Catalog& catalog, const ApiRequest& req) {
  const std::string* prefix_param = Param(req, "prefix");
  std::string prefix = prefix_param ? NormalizeText(*prefix_param) : "";
  std::size_t limit = SizeParam(req, "limit", 20, 1000);
  std::set<std::string> names;
  for (const auto& r : catalog.resources()) {
    const auto& subjects = r->index().subjects();
    auto it = std::lower_bound(subjects.begin(), subjects.end(), prefix);
    for (std::size_t n = 0; it != subjects.end() && n < limit; ++it, ++n) {
      if (!std::string_view(*it).starts_with(prefix)) break;
      names.insert(*it);
    }
  }
  Json j;
  j["prefix"] = prefix;
  j["subjects"] = Json::array();
  for (const std::string& name : names) {
    if (j["subjects"].size() == limit) break;
    j["subjects"].push_back(name);
  }
  return {200, j.dump()};
}

ApiResponse Search(const Catalog& catalog, const ApiRequest& req) {
  const std::string& q = RequireParam(req, "q");
  auto resources = SelectResources(catalog, Param(req, "resources"));
  std::size_t page = SizeParam(req, "page", 1, 1u << 30);
  auto hits = SearchText(resources, q);
  Json j;
  j["query"] = q;
  j["page"] = page;
  j["page_size"] = ApiService::kSearchPageSize;
  j["total"] = hits.size();
  j["results"] = Json::array();
  std::size_t begin = (page - 1) * ApiService::kSearchPageSize;
  for (std::size_t i = begin;
       i < hits.size() && i < begin + ApiService::kSearchPageSize; ++i) {
    j["results"].push_back(AssertionJson(hits[i]));
  }
  return {200, j.dump()};
}

ApiResponse Aggregate(const Catalog& catalog, const ApiRequest& req) {
  const Resource& resource = catalog.Get(RequireParam(req, "resource"));
  Predicate predicate = ParsePredicate(RequireParam(req, "predicate"));
  std::size_t k = SizeParam(req, "k", 10);
  Json j;
  j["resource"] = resource.name();
  j["predicate"] = std::string(PredicateName(predicate));
  j["rows"] = Json::array();
  for (const ObjectFrequency& row : AggregateObjects(resource, predicate, k)) {
    j["rows"].push_back({{"object", row.object}, {"frequency", row.frequency}});
  }
  return {200, j.dump()};
}

ApiResponse Top(const Catalog& catalog, const ApiRequest& req) {
  const Resource& resource = catalog.Get(RequireParam(req, "resource"));
  const std::string& subject = RequireParam(req, "subject");
  std::optional<Predicate> predicate;
  if (const std::string* p = Param(req, "predicate"); p && !p->empty()) {
    predicate = ParsePredicate(*p);
  }
  std::size_t k = SizeParam(req, "k", 10);
  Json j;
  j["resource"] = resource.name();
  j["subject"] = NormalizeText(subject);
  j["assertions"] = Json::array();
  for (const Assertion& a : TopAssertions(resource, subject, predicate, k)) {
    j["assertions"].push_back(AssertionJson(a));
  }
  return {200, j.dump()};
}

ApiResponse Stats(const Catalog& catalog, const ApiRequest& req) {
  const Resource& resource = catalog.Get(RequireParam(req, "resource"));
  std::optional<std::uint32_t> top_n;
  if (Param(req, "top_n") != nullptr) {
    top_n = static_cast<std::uint32_t>(SizeParam(req, "top_n", 100, 1u << 30));
  }
  ResourceStats s = ComputeResourceStats(resource, top_n);
  Json j;
  j["resource"] = resource.name();
  j["top_n_per_subject"] = top_n ? Json(*top_n) : Json(nullptr);
  j["total"] = s.total;
  j["subjects"] = s.subjects;
  j["pairs"] = s.pairs;
  j["mean_objects_per_pair"] = s.mean_objects_per_pair;
  for (Predicate p : kAllPredicates) {
    j["per_predicate"][std::string(PredicateName(p))] =
        s.per_predicate[PredicateIndex(p)];
  }
  return {200, j.dump()};
}

ApiResponse Diagnostics(const Catalog& catalog, const ApiRequest& req) {
  const Resource& resource = catalog.Get(RequireParam(req, "resource"));
  std::optional<std::string_view> subject;
  if (const std::string* s = Param(req, "subject"); s && !s->empty()) {
    subject = *s;
  }
  auto report = BuildDiagnosticsReport(resource, subject);
  return {200, Json::parse(DiagnosticsReportJson(report)).dump()};
}

Term TermFromJson(const Json& j, bool allow_template) {
  if (!j.is_string()) {
    throw Error(ErrorCode::kMalformedQuery, "pattern fields must be strings");
  }
  return ParseTerm(j.get<std::string>(), allow_template);
}

ConjunctiveQuery QueryFromJson(const Json& body) {
  if (body.contains("query")) {
    if (!body["query"].is_string()) {
      throw Error(ErrorCode::kMalformedQuery, "'query' must be a string");
    }
    ConjunctiveQuery q = ParseQuery(body["query"].get<std::string>());
    if (body.contains("aggregate") && body["aggregate"].is_boolean()) {
      q.aggregate = body["aggregate"].get<bool>();
    }
    return q;
  }
  if (!body.contains("patterns") || !body["patterns"].is_array()) {
    throw Error(ErrorCode::kMalformedQuery,
                "body needs 'query' text or a 'patterns' array");
  }
  ConjunctiveQuery q;
  for (const Json& p : body["patterns"]) {
    if (!p.is_object() || !p.contains("subject") || !p.contains("predicate") ||
        !p.contains("object") || !p["predicate"].is_string()) {
      throw Error(ErrorCode::kMalformedQuery,
                  "each pattern needs subject, predicate and object");
    }
    Pattern pattern;
    pattern.subject = TermFromJson(p["subject"], false);
    pattern.predicate = ParsePredicate(p["predicate"].get<std::string>());
    pattern.object = TermFromJson(p["object"], true);
    q.patterns.push_back(std::move(pattern));
  }
  if (body.contains("projection") && body["projection"].is_string()) {
    std::string proj = body["projection"].get<std::string>();
    if (!proj.empty() && proj[0] == '?') proj.erase(0, 1);
    q.projection = proj;
  } else {
    for (const Pattern& p : q.patterns) {
      for (const Term* t : {&p.subject, &p.object}) {
        if (q.projection.empty() && t->has_variable()) q.projection = t->value;
      }
    }
  }
  q.aggregate = body.value("aggregate", false);
  q.Validate();
  return q;
}

ApiResponse Join(const Catalog& catalog, const ApiRequest& req) {
  Json body = Json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) {
    throw Error(ErrorCode::kMalformedQuery,
                "request body must be a JSON object");
  }
  if (!body.contains("resource") || !body["resource"].is_string()) {
    throw Error(ErrorCode::kInvalidArgument, "missing 'resource'");
  }
  const Resource& resource = catalog.Get(body["resource"].get<std::string>());
  ConjunctiveQuery query = QueryFromJson(body);
  std::size_t limit = 0;
  if (body.contains("limit")) {
    if (!body["limit"].is_number_unsigned() ||
        body["limit"].get<std::size_t>() == 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "'limit' must be a positive integer");
    }
    limit = body["limit"].get<std::size_t>();
  }
  auto rows = EvaluateConjunctive(resource, query);
  Json j;
  j["resource"] = resource.name();
  j["query"] = query.ToString();
  j["projection"] = query.projection;
  j["aggregate"] = query.aggregate;
  j["total"] = rows.size();
  j["rows"] = Json::array();
  for (std::size_t i = 0; i < rows.size() && (limit == 0 || i < limit); ++i) {
    j["rows"].push_back({{"value", rows[i].value},
                         {"count", rows[i].count},
                         {"plural_folded", rows[i].plural_folded}});
  }
  return {200, j.dump()};
}

}  // namespace

ApiService::ApiService(std::shared_ptr<const Catalog> catalog)
    : catalog_(std::move(catalog)) {}

ApiResponse ApiService::Handle(const ApiRequest& req) const {
  try {
    const std::string& path = req.path;
    const bool get = req.method == "GET";
    if (path == "/api/join") {
      if (req.method != "POST") {
        return ErrorResponse(405, "method_not_allowed",
                             "use POST for /api/join");
      }
      return Join(*catalog_, req);
    }
    if (!get) {
      return ErrorResponse(405, "method_not_allowed",
                           "read-only API: only GET and POST /api/join");
    }
    if (path == "/api/resources") return Resources(*catalog_);
    constexpr std::string_view kSubjects = "/api/subjects/";
    if (path.starts_with(kSubjects) && path.size() > kSubjects.size()) {
      return Subject(*catalog_, req,
                     std::string_view(path).substr(kSubjects.size()));
    }
    if (path == "/api/subject-names") return SubjectNames(*catalog_, req);
    if (path == "/api/search") return Search(*catalog_, req);
    if (path == "/api/aggregate") return Aggregate(*catalog_, req);
    if (path == "/api/top") return Top(*catalog_, req);
    if (path == "/api/stats") return Stats(*catalog_, req);
    if (path == "/api/diagnostics") return Diagnostics(*catalog_, req);
    return ErrorResponse(404, "not_found", "no route for " + path);
  } catch (const Error& e) {
    return ErrorResponse(StatusFor(e.code()), ErrorCodeName(e.code()),
                         e.what());
  }
}

}  // namespace cskb
