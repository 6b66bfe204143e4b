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

#ifndef CSKB_PIPELINE_H_
#define CSKB_PIPELINE_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cskb/ingest.h"
#include "cskb/resource.h"
#include "cskb/types.h"

namespace cskb {

struct PipelineConfig {
  std::uint32_t top_k_per_pair = 10;
  // When set, generations whose normalized (s, p, o) also occur in the
  // training resource passed to BuildResource are dropped before top-k.
  bool drop_training_duplicates = false;
  // Subject partitions processed concurrently. Output does not depend on it.
  unsigned threads = 1;

  // Throws kInvalidArgument when top_k_per_pair == 0 or threads == 0.
  void Validate() const;
};

// Sum of per-token log-probabilities, correctly rounded (exact summation,
// hence independent of element order). Throws kEmptySequence on an empty
// list and kInvalidArgument on positive or non-finite entries.
double ComputeBeamScore(std::span<const double> token_logprobs);

// Strict weak order used for every rank: scored before unscored, then score
// descending, predicate order, object bytewise, subject bytewise. Unscored
// assertions are all equivalent, so a stable sort keeps ingestion order.
bool RanksBefore(const Assertion& a, const Assertion& b);

// One assertion per (subject, predicate, normalized object). The survivor
// has the highest score (absent loses to present; equal scores go to the
// bytewise-smaller surface object) and sits at the position of the key's
// first occurrence.
std::vector<Assertion> Deduplicate(std::vector<Assertion> assertions);

// Keeps the `top_k_per_pair` best assertions of each (subject, predicate)
// under RanksBefore. Survivors keep their input order.
std::vector<Assertion> RetainTopK(std::vector<Assertion> assertions,
                                  const PipelineConfig& config);

// Sorts by RanksBefore (stable) and assigns local, subject and global ranks.
std::vector<Assertion> AssignRanks(std::vector<Assertion> assertions);

// Turns one generation record into an unranked assertion.
Assertion ScoreRecord(const GenerationRecord& record,
                      std::shared_ptr<const ResourceId> resource);

// score -> normalize -> deduplicate -> [drop training duplicates] ->
// retain_top_k -> assign_ranks.
std::shared_ptr<const Resource> BuildResource(
    std::span<const GenerationRecord> records, ResourceId id,
    const PipelineConfig& config, const Resource* training = nullptr);

// For training tables: deduplicate and rank without truncation.
std::shared_ptr<const Resource> BuildTableResource(
    std::vector<Assertion> assertions, ResourceId id);

// Sidecar JSON: resource name, kind, config, counts.
std::string ResourceMetadataJson(const Resource& resource);

}  // namespace cskb

#endif  // CSKB_PIPELINE_H_
