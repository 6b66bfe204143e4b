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

#ifndef CSKB_INDEX_H_
#define CSKB_INDEX_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cskb/predicate.h"
#include "cskb/types.h"

namespace cskb {

// Lookup structures over a resource's assertion array. Ids are positions in
// that array, which is ordered by global rank, so every id list is sorted by
// the rank of its scope.
class IndexSet {
 public:
  using Id = std::uint32_t;

  IndexSet() = default;

  // `assertions` must be in global-rank order.
  static IndexSet Build(std::span<const Assertion> assertions);

  // Ids of one subject ordered by subject_rank.
  std::span<const Id> BySubject(std::string_view subject) const;
  // Ids of one (subject, predicate) pair ordered by local_rank.
  std::span<const Id> BySubjectPredicate(std::string_view subject,
                                         Predicate predicate) const;
  // Ids of one predicate ordered by global rank.
  std::span<const Id> ByPredicate(Predicate predicate) const;
  // Posting lists over Tokenize(object) and Tokenize(subject). Each id
  // appears once per list even if the token repeats.
  std::span<const Id> ByObjectToken(std::string_view token) const;
  std::span<const Id> BySubjectToken(std::string_view token) const;

  // All subjects, sorted bytewise.
  const std::vector<std::string>& subjects() const { return subjects_; }
  std::size_t pair_count() const { return pair_count_; }

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };
  template <typename V>
  using StringMap =
      std::unordered_map<std::string, V, StringHash, std::equal_to<>>;

  struct SubjectSlot {
    std::vector<Id> by_rank;
    // Ids grouped by predicate, each group in local-rank order.
    std::vector<Id> by_predicate;
    std::array<Id, kNumPredicates + 1> offsets{};
  };

  StringMap<SubjectSlot> by_subject_;
  std::array<std::vector<Id>, kNumPredicates> by_predicate_;
  StringMap<std::vector<Id>> by_object_token_;
  StringMap<std::vector<Id>> by_subject_token_;
  std::vector<std::string> subjects_;
  std::size_t pair_count_ = 0;
};

}  // namespace cskb

#endif  // CSKB_INDEX_H_
