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

#include "cskb/predicate.h"

#include <string>

#include "cskb/error.h"

namespace cskb {
namespace {

constexpr std::array<std::string_view, kNumPredicates> kNames = {
    "AtLocation",     "CapableOf",       "Causes",      "Desires",
    "HasA",           "HasPrerequisite", "HasProperty", "HasSubevent",
    "MadeOf",         "MotivatedByGoal", "PartOf",      "UsedFor",
    "ReceivesAction",
};

bool EqualsIgnoreCase(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    unsigned char x = a[i], y = b[i];
    if (x >= 'A' && x <= 'Z') x = x - 'A' + 'a';
    if (y >= 'A' && y <= 'Z') y = y - 'A' + 'a';
    if (x != y) return false;
  }
  return true;
}

}  // namespace

std::string_view PredicateName(Predicate p) {
  return kNames[PredicateIndex(p)];
}

std::optional<Predicate> TryParsePredicate(std::string_view text) {
  for (Predicate p : kAllPredicates) {
    if (EqualsIgnoreCase(text, PredicateName(p))) return p;
  }
  return std::nullopt;
}

Predicate ParsePredicate(std::string_view text) {
  if (auto p = TryParsePredicate(text)) return *p;
  throw Error(ErrorCode::kUnknownPredicate,
              "unknown predicate '" + std::string(text) + "'");
}

std::optional<Predicate> PredicateFromIndex(std::size_t index) {
  if (index >= kNumPredicates) return std::nullopt;
  return kAllPredicates[index];
}

}  // namespace cskb
