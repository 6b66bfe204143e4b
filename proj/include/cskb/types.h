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

#ifndef CSKB_TYPES_H_
#define CSKB_TYPES_H_

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cskb/predicate.h"

namespace cskb {

enum class ResourceKind : std::uint8_t { kTraining, kGenerated };

std::string_view ResourceKindName(ResourceKind kind);
ResourceKind ParseResourceKind(std::string_view text);

struct ResourceId {
  std::string name;
  ResourceKind kind = ResourceKind::kGenerated;

  // Throws Error(kInvalidArgument) on an empty name.
  static ResourceId Make(std::string name, ResourceKind kind);

  friend bool operator==(const ResourceId&, const ResourceId&) = default;
};

// One (subject, predicate, object) triple of a resource. `subject` is stored
// normalized; `object` keeps the surface form of the winning generation (only
// whitespace is cleaned). Ranks are 0 until the pipeline assigns them.
struct Assertion {
  std::string subject;
  Predicate predicate = Predicate::kAtLocation;
  std::string object;
  std::optional<double> score;
  std::uint32_t local_rank = 0;
  std::uint32_t subject_rank = 0;
  std::uint32_t global_rank = 0;
  std::shared_ptr<const ResourceId> resource;

  friend bool operator==(const Assertion& a, const Assertion& b) {
    return a.subject == b.subject && a.predicate == b.predicate &&
           a.object == b.object && a.score == b.score &&
           a.local_rank == b.local_rank && a.subject_rank == b.subject_rank &&
           a.global_rank == b.global_rank &&
           (a.resource == b.resource ||
            (a.resource && b.resource && *a.resource == *b.resource));
  }
};

// Identity of an assertion independent of its resource and ranks. `object`
// is the normalized object text.
struct AssertionKey {
  std::string subject;
  Predicate predicate = Predicate::kAtLocation;
  std::string object;

  static AssertionKey Of(const Assertion& a);

  friend auto operator<=>(const AssertionKey&, const AssertionKey&) = default;
  friend bool operator==(const AssertionKey&, const AssertionKey&) = default;
};

struct AssertionKeyHash {
  std::size_t operator()(const AssertionKey& key) const;
};

struct GenerationRecord {
  std::string subject;
  Predicate predicate = Predicate::kAtLocation;
  std::string object_text;
  std::vector<double> token_logprobs;
  std::string model;
  std::uint32_t beam_index = 0;
};

struct GroundTruthSentence {
  std::string concept_name;
  std::string sentence;
};

struct SentenceEmbedding {
  std::string key;
  std::vector<double> vector;
};

enum class Dimension : std::uint8_t { kTypicality, kSaliency };

std::string_view DimensionName(Dimension d);
Dimension ParseDimension(std::string_view text);

// A 4-point Likert rating, or nullopt for "no judgement".
using Rating = std::optional<int>;

struct JudgementRow {
  AssertionKey assertion_key;
  std::string worker;
  Dimension dimension = Dimension::kTypicality;
  Rating rating;
};

}  // namespace cskb

#endif  // CSKB_TYPES_H_
