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

#include "cskb/query.h"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "cskb/error.h"
#include "cskb/text.h"

namespace cskb {
namespace {

using Id = IndexSet::Id;

// Flat binding table: `width` values per row, empty view = unbound.
struct Bindings {
  std::size_t width = 0;
  std::vector<std::string_view> values;
  std::vector<char> folded;

  std::size_t rows() const { return folded.size(); }
  std::string_view at(std::size_t row, std::size_t var) const {
    return values[row * width + var];
  }
};

std::vector<std::string> CollectVariables(const ConjunctiveQuery& query) {
  std::vector<std::string> vars;
  auto add = [&](const Term& t) {
    if (t.has_variable() &&
        std::find(vars.begin(), vars.end(), t.value) == vars.end()) {
      vars.push_back(t.value);
    }
  };
  for (const Pattern& p : query.patterns) {
    add(p.subject);
    add(p.object);
  }
  return vars;
}

std::size_t VarIndex(const std::vector<std::string>& vars,
                     const std::string& name) {
  return std::find(vars.begin(), vars.end(), name) - vars.begin();
}

Bindings EvaluatePattern(const Resource& resource, const Pattern& pattern,
                         const std::vector<std::string>& vars) {
  Bindings out;
  out.width = vars.size();
  std::span<const Id> candidates =
      pattern.subject.kind == Term::Kind::kConstant
          ? resource.index().BySubjectPredicate(pattern.subject.value,
                                                pattern.predicate)
          : resource.index().ByPredicate(pattern.predicate);

  const bool subject_var = pattern.subject.kind == Term::Kind::kVariable;
  const std::size_t vs =
      subject_var ? VarIndex(vars, pattern.subject.value) : 0;
  const std::size_t vo =
      pattern.object.has_variable() ? VarIndex(vars, pattern.object.value) : 0;
  const bool object_shares_subject =
      subject_var && pattern.object.has_variable() && vs == vo;

  std::vector<std::string_view> row(out.width);
  for (Id id : candidates) {
    const Assertion& a = resource.at(id);
    if (a.predicate != pattern.predicate) continue;
    if (!subject_var && a.subject != pattern.subject.value) continue;
    const std::string& object = resource.normalized_object(id);
    std::fill(row.begin(), row.end(), std::string_view());
    bool folded = false;
    if (subject_var) row[vs] = a.subject;
    switch (pattern.object.kind) {
      case Term::Kind::kConstant:
        if (object != pattern.object.value) continue;
        break;
      case Term::Kind::kVariable:
        if (object_shares_subject) {
          if (object != a.subject) continue;
        } else {
          row[vo] = object;
        }
        break;
      case Term::Kind::kTemplate: {
        const std::string& pre = pattern.object.prefix;
        const std::string& suf = pattern.object.suffix;
        if (object.size() <= pre.size() + suf.size()) continue;
        std::string_view view(object);
        if (!view.starts_with(pre) || !view.ends_with(suf)) continue;
        std::string_view slot =
            view.substr(pre.size(), view.size() - pre.size() - suf.size());
        if (object_shares_subject) {
          if (slot != a.subject) {
            if (!PluralFoldEqual(slot, a.subject)) continue;
            folded = true;
          }
        } else {
          row[vo] = slot;
        }
        break;
      }
    }
    out.values.insert(out.values.end(), row.begin(), row.end());
    out.folded.push_back(folded);
  }
  return out;
}

bool MentionsVariable(const Pattern& p, const std::string& name) {
  return (p.subject.has_variable() && p.subject.value == name) ||
         (p.object.has_variable() && p.object.value == name);
}

struct Tally {
  std::size_t count = 0;
  std::size_t exact = 0;
};

void Accumulate(std::map<std::string_view, Tally>& tally,
                std::string_view value, bool folded) {
  Tally& t = tally[value];
  ++t.count;
  if (!folded) ++t.exact;
}

}  // namespace

bool PluralFoldEqual(std::string_view a, std::string_view b) {
  if (a == b) return true;
  if (a.size() > b.size()) std::swap(a, b);
  if (!b.starts_with(a)) return false;
  std::string_view tail = b.substr(a.size());
  return tail == "s" || tail == "es";
}

std::vector<QueryRow> EvaluateConjunctive(const Resource& resource,
                                          const ConjunctiveQuery& query) {
  query.Validate();
  const std::vector<std::string> vars = CollectVariables(query);
  const std::size_t proj = VarIndex(vars, query.projection);

  std::map<std::string_view, Tally> tally;
  Bindings first = EvaluatePattern(resource, query.patterns[0], vars);
  if (query.patterns.size() == 1) {
    for (std::size_t r = 0; r < first.rows(); ++r) {
      Accumulate(tally, first.at(r, proj), first.folded[r]);
    }
  } else {
    Bindings second = EvaluatePattern(resource, query.patterns[1], vars);
    std::vector<std::size_t> shared;
    for (std::size_t v = 0; v < vars.size(); ++v) {
      if (MentionsVariable(query.patterns[0], vars[v]) &&
          MentionsVariable(query.patterns[1], vars[v])) {
        shared.push_back(v);
      }
    }
    auto key_of = [&](const Bindings& b, std::size_t r) {
      std::string key;
      for (std::size_t v : shared) {
        key.append(b.at(r, v));
        key.push_back('\x1f');
      }
      return key;
    };
    std::unordered_map<std::string, std::vector<std::size_t>> build;
    for (std::size_t r = 0; r < second.rows(); ++r) {
      build[key_of(second, r)].push_back(r);
    }
    for (std::size_t r = 0; r < first.rows(); ++r) {
      auto it = build.find(key_of(first, r));
      if (it == build.end()) continue;
      for (std::size_t s : it->second) {
        std::string_view value = first.at(r, proj);
        if (value.empty()) value = second.at(s, proj);
        Accumulate(tally, value, first.folded[r] || second.folded[s]);
      }
    }
  }

  std::vector<QueryRow> rows;
  rows.reserve(tally.size());
  for (const auto& [value, t] : tally) {
    rows.push_back({std::string(value), t.count, t.exact == 0});
  }
  if (query.aggregate) {
    std::stable_sort(
        rows.begin(), rows.end(),
        [](const QueryRow& a, const QueryRow& b) { return a.count > b.count; });
  }
  return rows;
}

std::vector<Assertion> TopAssertions(const Resource& resource,
                                     std::string_view subject,
                                     std::optional<Predicate> predicate,
                                     std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  std::string key = NormalizeText(subject);
  std::span<const Id> ids =
      predicate ? resource.index().BySubjectPredicate(key, *predicate)
                : resource.index().BySubject(key);
  std::vector<Assertion> out;
  for (Id id : ids.first(std::min(k, ids.size()))) {
    out.push_back(resource.at(id));
  }
  return out;
}

std::vector<ObjectFrequency> AggregateObjects(const Resource& resource,
                                              Predicate predicate,
                                              std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  std::unordered_map<std::string_view, std::size_t> counts;
  for (Id id : resource.index().ByPredicate(predicate)) {
    ++counts[resource.normalized_object(id)];
  }
  std::vector<ObjectFrequency> rows;
  rows.reserve(counts.size());
  for (const auto& [object, n] : counts) {
    rows.push_back({std::string(object), n});
  }
  auto order = [](const ObjectFrequency& a, const ObjectFrequency& b) {
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    return a.object < b.object;
  };
  if (rows.size() > k) {
    std::partial_sort(rows.begin(), rows.begin() + k, rows.end(), order);
    rows.resize(k);
  } else {
    std::sort(rows.begin(), rows.end(), order);
  }
  return rows;
}

namespace {

void CollectPhraseMatches(const Resource& resource,
                          const std::vector<std::string>& needle,
                          bool subject_side, std::vector<Id>& out) {
  std::span<const Id> smallest;
  bool first = true;
  for (const std::string& token : needle) {
    std::span<const Id> list = subject_side
                                   ? resource.index().BySubjectToken(token)
                                   : resource.index().ByObjectToken(token);
    if (list.empty()) return;
    if (first || list.size() < smallest.size()) smallest = list;
    first = false;
  }
  for (Id id : smallest) {
    const Assertion& a = resource.at(id);
    if (ContainsTokenRun(Tokenize(subject_side ? a.subject : a.object),
                         needle)) {
      out.push_back(id);
    }
  }
}

}  // namespace

std::vector<Assertion> SearchText(std::span<const Resource* const> resources,
                                  std::string_view needle) {
  const std::vector<std::string> tokens = Tokenize(needle);
  if (tokens.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "search needle has no tokens");
  }
  std::vector<Assertion> out;
  for (const Resource* resource : resources) {
    std::vector<Id> ids;
    CollectPhraseMatches(*resource, tokens, /*subject_side=*/true, ids);
    CollectPhraseMatches(*resource, tokens, /*subject_side=*/false, ids);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (Id id : ids) out.push_back(resource->at(id));
  }
  return out;
}

SubjectSummary SummarizeSubject(std::string_view subject,
                                std::span<const Resource* const> resources,
                                std::size_t k) {
  SubjectSummary summary;
  summary.subject = NormalizeText(subject);
  for (const Resource* resource : resources) {
    ResourceSummary rs;
    rs.resource = resource->name();
    for (Predicate p : kAllPredicates) {
      PredicateSlot& slot = rs.slots[PredicateIndex(p)];
      slot.predicate = p;
      auto ids = resource->index().BySubjectPredicate(summary.subject, p);
      slot.total = ids.size();
      for (Id id : ids.first(std::min(k, ids.size()))) {
        slot.top.push_back(resource->at(id));
      }
    }
    summary.resources.push_back(std::move(rs));
  }
  return summary;
}

}  // namespace cskb
