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

#ifndef CSKB_PREDICATE_H_
#define CSKB_PREDICATE_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace cskb {

// The closed set of commonsense relations. The enumerator order is the
// canonical predicate order used for rank tie-breaking.
enum class Predicate : std::uint8_t {
  kAtLocation,
  kCapableOf,
  kCauses,
  kDesires,
  kHasA,
  kHasPrerequisite,
  kHasProperty,
  kHasSubevent,
  kMadeOf,
  kMotivatedByGoal,
  kPartOf,
  kUsedFor,
  kReceivesAction,
};

inline constexpr std::size_t kNumPredicates = 13;

inline constexpr std::array<Predicate, kNumPredicates> kAllPredicates = {
    Predicate::kAtLocation,     Predicate::kCapableOf,
    Predicate::kCauses,         Predicate::kDesires,
    Predicate::kHasA,           Predicate::kHasPrerequisite,
    Predicate::kHasProperty,    Predicate::kHasSubevent,
    Predicate::kMadeOf,         Predicate::kMotivatedByGoal,
    Predicate::kPartOf,         Predicate::kUsedFor,
    Predicate::kReceivesAction,
};

inline constexpr std::size_t PredicateIndex(Predicate p) {
  return static_cast<std::size_t>(p);
}

// Canonical camel-case spelling, e.g. "AtLocation".
std::string_view PredicateName(Predicate p);

// Case-insensitive match against the canonical names. Throws
// Error(kUnknownPredicate) for anything outside the closed set.
Predicate ParsePredicate(std::string_view text);

// Non-throwing variant of ParsePredicate.
std::optional<Predicate> TryParsePredicate(std::string_view text);

// Inverse of PredicateIndex; nullopt when out of range.
std::optional<Predicate> PredicateFromIndex(std::size_t index);

}  // namespace cskb

#endif  // CSKB_PREDICATE_H_
