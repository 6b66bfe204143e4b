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

#include "cskb/verbalize.h"

#include <nlohmann/json.hpp>

#include "cskb/error.h"
#include "cskb/text.h"

namespace cskb {
namespace {

std::size_t CountOccurrences(std::string_view text, std::string_view needle) {
  std::size_t count = 0;
  for (std::size_t pos = text.find(needle); pos != std::string_view::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

}  // namespace

TemplateTable TemplateTable::Defaults() {
  TemplateTable t;
  t.Set(Predicate::kAtLocation, "you are likely to find {s} in {o}");
  t.Set(Predicate::kCapableOf, "{s} can {o}");
  t.Set(Predicate::kCauses, "{s} causes {o}");
  t.Set(Predicate::kDesires, "{s} wants {o}");
  t.Set(Predicate::kHasA, "{s} has {o}");
  t.Set(Predicate::kHasPrerequisite, "{s} requires {o}");
  t.Set(Predicate::kHasProperty, "{s} is {o}");
  t.Set(Predicate::kHasSubevent, "while {s}, {o}");
  t.Set(Predicate::kMadeOf, "{s} is made of {o}");
  t.Set(Predicate::kMotivatedByGoal, "{s} is motivated by {o}");
  t.Set(Predicate::kPartOf, "{s} is part of {o}");
  t.Set(Predicate::kReceivesAction, "{s} can be {o}");
  t.Set(Predicate::kUsedFor, "{s} is used for {o}");
  return t;
}

void TemplateTable::Set(Predicate predicate, std::string text) {
  if (CountOccurrences(text, "{s}") != 1 ||
      CountOccurrences(text, "{o}") != 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "template for " + std::string(PredicateName(predicate)) +
                    " must contain {s} and {o} exactly once: '" + text + "'");
  }
  templates_[PredicateIndex(predicate)] = std::move(text);
}

const std::string& TemplateTable::Get(Predicate predicate) const {
  return templates_[PredicateIndex(predicate)];
}

void TemplateTable::ApplyOverrides(std::string_view json_text) {
  auto j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::kParseError,
                "template overrides must be a JSON object");
  }
  for (const auto& [name, value] : j.items()) {
    if (!value.is_string()) {
      throw Error(ErrorCode::kParseError,
                  "template for '" + name + "' is not a string");
    }
    Set(ParsePredicate(name), value.get<std::string>());
  }
}

std::string Verbalize(std::string_view subject, Predicate predicate,
                      std::string_view object, const TemplateTable& table) {
  const std::string& tmpl = table.Get(predicate);
  std::string out;
  out.reserve(tmpl.size() + subject.size() + object.size());
  for (std::size_t i = 0; i < tmpl.size();) {
    if (tmpl.compare(i, 3, "{s}") == 0) {
      out.append(subject);
      i += 3;
    } else if (tmpl.compare(i, 3, "{o}") == 0) {
      out.append(object);
      i += 3;
    } else {
      out.push_back(tmpl[i++]);
    }
  }
  return CleanSurface(out);
}

}  // namespace cskb
