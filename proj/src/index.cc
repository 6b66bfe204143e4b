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

#include "cskb/index.h"

#include <algorithm>

#include "cskb/text.h"

namespace cskb {
namespace {

template <typename Map>
std::span<const IndexSet::Id> Lookup(const Map& map, std::string_view key) {
  auto it = map.find(key);
  if (it == map.end()) return {};
  return it->second;
}

template <typename Map>
void AddTokens(Map& map, std::string_view text, IndexSet::Id id) {
  for (std::string& token : Tokenize(text)) {
    auto& list = map[std::move(token)];
    if (list.empty() || list.back() != id) list.push_back(id);
  }
}

}  // namespace

IndexSet IndexSet::Build(std::span<const Assertion> assertions) {
  IndexSet index;
  for (Id id = 0; id < assertions.size(); ++id) {
    const Assertion& a = assertions[id];
    index.by_subject_[a.subject].by_rank.push_back(id);
    index.by_predicate_[PredicateIndex(a.predicate)].push_back(id);
    AddTokens(index.by_object_token_, a.object, id);
    AddTokens(index.by_subject_token_, a.subject, id);
  }
  index.subjects_.reserve(index.by_subject_.size());
  for (auto& [subject, slot] : index.by_subject_) {
    index.subjects_.push_back(subject);
    std::array<Id, kNumPredicates> counts{};
    for (Id id : slot.by_rank)
      ++counts[PredicateIndex(assertions[id].predicate)];
    for (std::size_t p = 0; p < kNumPredicates; ++p) {
      slot.offsets[p + 1] = slot.offsets[p] + counts[p];
      if (counts[p] > 0) ++index.pair_count_;
    }
    slot.by_predicate.resize(slot.by_rank.size());
    std::array<Id, kNumPredicates> cursor{};
    for (Id id : slot.by_rank) {
      std::size_t p = PredicateIndex(assertions[id].predicate);
      slot.by_predicate[slot.offsets[p] + cursor[p]++] = id;
    }
  }
  std::sort(index.subjects_.begin(), index.subjects_.end());
  return index;
}

std::span<const IndexSet::Id> IndexSet::BySubject(
    std::string_view subject) const {
  auto it = by_subject_.find(subject);
  if (it == by_subject_.end()) return {};
  return it->second.by_rank;
}

std::span<const IndexSet::Id> IndexSet::BySubjectPredicate(
    std::string_view subject, Predicate predicate) const {
  auto it = by_subject_.find(subject);
  if (it == by_subject_.end()) return {};
  const SubjectSlot& slot = it->second;
  std::size_t p = PredicateIndex(predicate);
  return std::span<const Id>(slot.by_predicate)
      .subspan(slot.offsets[p], slot.offsets[p + 1] - slot.offsets[p]);
}

std::span<const IndexSet::Id> IndexSet::ByPredicate(Predicate predicate) const {
  return by_predicate_[PredicateIndex(predicate)];
}

std::span<const IndexSet::Id> IndexSet::ByObjectToken(
    std::string_view token) const {
  return Lookup(by_object_token_, token);
}

std::span<const IndexSet::Id> IndexSet::BySubjectToken(
    std::string_view token) const {
  return Lookup(by_subject_token_, token);
}

}  // namespace cskb
