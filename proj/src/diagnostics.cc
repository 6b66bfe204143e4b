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

#include "cskb/diagnostics.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>
#include <unordered_map>

#include "cskb/ingest.h"
#include "cskb/text.h"

namespace cskb {
namespace {

using Id = IndexSet::Id;

constexpr std::array<std::string_view, 20> kNumberWords = {
    "one",     "two",       "three",    "four",     "five",
    "six",     "seven",     "eight",    "nine",     "ten",
    "eleven",  "twelve",    "thirteen", "fourteen", "fifteen",
    "sixteen", "seventeen", "eighteen", "nineteen", "twenty"};

std::string_view FinalWord(std::string_view text) {
  std::size_t space = text.rfind(' ');
  return space == std::string_view::npos ? text : text.substr(space + 1);
}

// Singular candidates of a final word under the plural rule.
std::vector<std::string_view> SingularForms(std::string_view word) {
  std::vector<std::string_view> out;
  if (word.size() <= 3) return out;
  if (word.ends_with('s') && !word.ends_with("ss")) {
    out.push_back(word.substr(0, word.size() - 1));
  }
  if (word.ends_with("es")) out.push_back(word.substr(0, word.size() - 2));
  return out;
}

void PairsInBucket(const Resource& resource, std::span<const Id> ids,
                   std::vector<RedundantPair>& out) {
  std::unordered_map<std::string_view, Id> by_object;
  for (Id id : ids) by_object.emplace(resource.normalized_object(id), id);
  for (Id id : ids) {
    std::string_view object = resource.normalized_object(id);
    std::string_view word = FinalWord(object);
    std::string_view head = object.substr(0, object.size() - word.size());
    std::set<Id> seen;
    for (std::string_view singular : SingularForms(word)) {
      std::string candidate = std::string(head) + std::string(singular);
      auto it = by_object.find(candidate);
      if (it == by_object.end() || !seen.insert(it->second).second) continue;
      Id a = std::min(id, it->second), b = std::max(id, it->second);
      out.push_back({resource.at(a), resource.at(b)});
    }
  }
}

}  // namespace

CopyRate SubjectCopyRate(const Resource& resource, std::string_view subject) {
  std::string key = NormalizeText(subject);
  auto ids = resource.index().BySubject(key);
  CopyRate r;
  r.total = ids.size();
  if (ids.empty()) {
    r.undefined = true;
    return r;
  }
  const auto needle = Tokenize(key);
  for (Id id : ids) {
    if (ContainsTokenRun(Tokenize(resource.at(id).object), needle)) ++r.copies;
  }
  r.rate = static_cast<double>(r.copies) / r.total;
  return r;
}

std::optional<int> NumberValue(std::string_view token) {
  if (!token.empty() && token.size() <= 4 &&
      std::all_of(token.begin(), token.end(),
                  [](char c) { return c >= '0' && c <= '9'; })) {
    int v = 0;
    std::from_chars(token.data(), token.data() + token.size(), v);
    return v;
  }
  for (std::size_t i = 0; i < kNumberWords.size(); ++i) {
    if (token == kNumberWords[i]) return static_cast<int>(i + 1);
  }
  if (token == "dozen") return 12;
  return std::nullopt;
}

std::vector<QuantityGroup> QuantityConflicts(const Resource& resource,
                                             std::string_view subject,
                                             Predicate predicate) {
  std::string key = NormalizeText(subject);
  struct Bucket {
    std::vector<Id> ids;
    std::set<std::vector<int>> values;
  };
  std::map<std::string, Bucket> buckets;
  std::vector<std::string> order;
  for (Id id : resource.index().BySubjectPredicate(key, predicate)) {
    std::vector<int> values;
    std::string masked;
    for (const std::string& token : Tokenize(resource.at(id).object)) {
      if (!masked.empty()) masked.push_back(' ');
      if (auto v = NumberValue(token)) {
        values.push_back(*v);
        masked.push_back('#');
      } else {
        masked += token;
      }
    }
    if (values.empty()) continue;
    auto [it, inserted] = buckets.try_emplace(masked);
    if (inserted) order.push_back(masked);
    it->second.ids.push_back(id);
    it->second.values.insert(std::move(values));
  }
  std::vector<QuantityGroup> groups;
  for (const std::string& masked : order) {
    const Bucket& b = buckets[masked];
    if (b.ids.size() < 2) continue;
    QuantityGroup g{key, predicate, masked, {}, b.values.size()};
    for (Id id : b.ids) g.members.push_back(resource.at(id));
    groups.push_back(std::move(g));
  }
  return groups;
}

std::vector<RedundantPair> PluralRedundancy(
    const Resource& resource, std::optional<std::string_view> subject,
    std::optional<Predicate> predicate) {
  std::vector<std::string> subjects;
  if (subject) {
    subjects.push_back(NormalizeText(*subject));
  } else {
    subjects = resource.index().subjects();
  }
  std::vector<RedundantPair> out;
  for (const std::string& s : subjects) {
    for (Predicate p : kAllPredicates) {
      if (predicate && *predicate != p) continue;
      PairsInBucket(resource, resource.index().BySubjectPredicate(s, p), out);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const RedundantPair& x, const RedundantPair& y) {
              return std::pair(x.first.global_rank, x.second.global_rank) <
                     std::pair(y.first.global_rank, y.second.global_rank);
            });
  return out;
}

ResourceStats ComputeResourceStats(const Resource& resource,
                                   std::optional<std::uint32_t> top_n) {
  ResourceStats s;
  std::set<std::string_view> subjects;
  std::set<std::pair<std::string_view, Predicate>> pairs;
  for (const Assertion& a : resource.assertions()) {
    if (top_n && a.subject_rank > *top_n) continue;
    ++s.total;
    ++s.per_predicate[PredicateIndex(a.predicate)];
    subjects.insert(a.subject);
    pairs.emplace(a.subject, a.predicate);
  }
  s.subjects = subjects.size();
  s.pairs = pairs.size();
  s.mean_objects_per_pair =
      s.pairs == 0 ? 0.0 : static_cast<double>(s.total) / s.pairs;
  return s;
}

DiagnosticsReport BuildDiagnosticsReport(
    const Resource& resource, std::optional<std::string_view> subject) {
  DiagnosticsReport r;
  r.resource = resource.name();
  r.stats = ComputeResourceStats(resource);
  std::vector<std::string> subjects;
  if (subject) {
    subjects.push_back(NormalizeText(*subject));
  } else {
    subjects = resource.index().subjects();
  }
  for (const std::string& s : subjects) {
    r.copy_rates.push_back({s, SubjectCopyRate(resource, s)});
    for (Predicate p : kAllPredicates) {
      for (QuantityGroup& g : QuantityConflicts(resource, s, p)) {
        r.quantity_groups.push_back(std::move(g));
      }
    }
  }
  if (subject) {
    r.plural_pairs = PluralRedundancy(resource, subjects.front(), std::nullopt);
  } else {
    r.plural_pairs = PluralRedundancy(resource, std::nullopt, std::nullopt);
  }
  return r;
}

namespace {

nlohmann::ordered_json AssertionJson(const Assertion& a) {
  nlohmann::ordered_json j;
  j["subject"] = a.subject;
  j["predicate"] = std::string(PredicateName(a.predicate));
  j["object"] = a.object;
  j["score"] = a.score ? nlohmann::ordered_json(*a.score)
                       : nlohmann::ordered_json(nullptr);
  j["local_rank"] = a.local_rank;
  j["global_rank"] = a.global_rank;
  return j;
}

}  // namespace

std::string DiagnosticsReportJson(const DiagnosticsReport& r) {
  nlohmann::ordered_json j;
  j["resource"] = r.resource;
  auto& stats = j["stats"];
  stats["total"] = r.stats.total;
  stats["subjects"] = r.stats.subjects;
  stats["pairs"] = r.stats.pairs;
  stats["mean_objects_per_pair"] = r.stats.mean_objects_per_pair;
  for (Predicate p : kAllPredicates) {
    stats["per_predicate"][std::string(PredicateName(p))] =
        r.stats.per_predicate[PredicateIndex(p)];
  }
  j["copy_rates"] = nlohmann::ordered_json::array();
  for (const SubjectCopy& c : r.copy_rates) {
    j["copy_rates"].push_back({{"subject", c.subject},
                               {"copies", c.rate.copies},
                               {"total", c.rate.total},
                               {"rate", c.rate.rate},
                               {"undefined", c.rate.undefined}});
  }
  j["quantity_groups"] = nlohmann::ordered_json::array();
  for (const QuantityGroup& g : r.quantity_groups) {
    nlohmann::ordered_json gj;
    gj["subject"] = g.subject;
    gj["predicate"] = std::string(PredicateName(g.predicate));
    gj["masked"] = g.masked;
    gj["distinct_values"] = g.distinct_values;
    gj["members"] = nlohmann::ordered_json::array();
    for (const Assertion& a : g.members)
      gj["members"].push_back(AssertionJson(a));
    j["quantity_groups"].push_back(std::move(gj));
  }
  j["plural_pairs"] = nlohmann::ordered_json::array();
  for (const RedundantPair& p : r.plural_pairs) {
    j["plural_pairs"].push_back({{"first", AssertionJson(p.first)},
                                 {"second", AssertionJson(p.second)}});
  }
  return j.dump(2);
}

std::string DiagnosticsReportText(const DiagnosticsReport& r) {
  std::ostringstream out;
  char buf[160];
  out << "resource " << r.resource << "\n";
  out << "  assertions " << r.stats.total << ", subjects " << r.stats.subjects
      << ", pairs " << r.stats.pairs << "\n";
  std::snprintf(buf, sizeof(buf), "  mean objects per pair %.3f\n",
                r.stats.mean_objects_per_pair);
  out << buf;
  out << "\n  predicate            count\n";
  for (Predicate p : kAllPredicates) {
    std::snprintf(buf, sizeof(buf), "  %-18s %8zu\n",
                  std::string(PredicateName(p)).c_str(),
                  r.stats.per_predicate[PredicateIndex(p)]);
    out << buf;
  }
  out << "\n  subject copies\n";
  for (const SubjectCopy& c : r.copy_rates) {
    if (c.rate.copies == 0) continue;
    std::snprintf(buf, sizeof(buf), "  %-24s %5zu / %-5zu %.3f\n",
                  c.subject.c_str(), c.rate.copies, c.rate.total, c.rate.rate);
    out << buf;
  }
  out << "\n  quantity groups\n";
  for (const QuantityGroup& g : r.quantity_groups) {
    out << "  " << g.subject << " " << PredicateName(g.predicate) << " ["
        << g.masked << "]:";
    for (const Assertion& a : g.members) {
      out << " " << a.object << " (#" << a.local_rank << ")";
    }
    out << "\n";
  }
  out << "\n  plural redundancy\n";
  for (const RedundantPair& p : r.plural_pairs) {
    out << "  " << p.first.subject << " " << PredicateName(p.first.predicate)
        << ": " << p.first.object << " / " << p.second.object << "\n";
  }
  return out.str();
}

}  // namespace cskb
