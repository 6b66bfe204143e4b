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

#include "cskb/pipeline.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <nlohmann/json.hpp>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "cskb/error.h"
#include "cskb/text.h"

namespace cskb {
namespace {

struct PairKey {
  std::string_view subject;
  Predicate predicate;
  friend bool operator==(const PairKey&, const PairKey&) = default;
};

struct PairKeyHash {
  std::size_t operator()(const PairKey& k) const {
    return std::hash<std::string_view>{}(k.subject) * 31 +
           PredicateIndex(k.predicate);
  }
};

// True when `a` should replace `b` as the survivor of a duplicate key.
bool BeatsDuplicate(const Assertion& a, const Assertion& b) {
  if (a.score.has_value() != b.score.has_value()) return a.score.has_value();
  if (a.score && *a.score != *b.score) return *a.score > *b.score;
  return a.object < b.object;
}

struct Ordered {
  std::size_t ordinal;
  Assertion assertion;
};

// Deduplicate in place over (ordinal, assertion) items, keeping the first
// occurrence's ordinal.
std::vector<Ordered> DeduplicateOrdered(std::vector<Ordered> items) {
  std::unordered_map<AssertionKey, std::size_t, AssertionKeyHash> slot;
  slot.reserve(items.size());
  std::vector<Ordered> out;
  out.reserve(items.size());
  for (Ordered& item : items) {
    auto [it, inserted] =
        slot.try_emplace(AssertionKey::Of(item.assertion), out.size());
    if (inserted) {
      out.push_back(std::move(item));
    } else if (BeatsDuplicate(item.assertion, out[it->second].assertion)) {
      out[it->second].assertion = std::move(item.assertion);
    }
  }
  return out;
}

std::vector<Ordered> RetainTopKOrdered(std::vector<Ordered> items,
                                       std::uint32_t k) {
  std::unordered_map<PairKey, std::vector<std::size_t>, PairKeyHash> pairs;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Assertion& a = items[i].assertion;
    pairs[{a.subject, a.predicate}].push_back(i);
  }
  std::vector<char> keep(items.size(), 0);
  for (auto& [key, members] : pairs) {
    std::stable_sort(
        members.begin(), members.end(), [&](std::size_t x, std::size_t y) {
          return RanksBefore(items[x].assertion, items[y].assertion);
        });
    std::size_t n = std::min<std::size_t>(members.size(), k);
    for (std::size_t i = 0; i < n; ++i) keep[members[i]] = 1;
  }
  std::vector<Ordered> out;
  out.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (keep[i]) out.push_back(std::move(items[i]));
  }
  return out;
}

std::vector<Ordered> WithOrdinals(std::vector<Assertion> assertions) {
  std::vector<Ordered> items;
  items.reserve(assertions.size());
  for (std::size_t i = 0; i < assertions.size(); ++i) {
    items.push_back({i, std::move(assertions[i])});
  }
  return items;
}

std::vector<Assertion> WithoutOrdinals(std::vector<Ordered> items) {
  std::vector<Assertion> out;
  out.reserve(items.size());
  for (Ordered& item : items) out.push_back(std::move(item.assertion));
  return out;
}

struct PartitionResult {
  std::vector<Ordered> items;
  std::size_t after_deduplicate = 0;
  std::size_t training_dropped = 0;
};

PartitionResult ProcessPartition(
    std::vector<Ordered> items, const PipelineConfig& config,
    const std::unordered_set<AssertionKey, AssertionKeyHash>* training) {
  PartitionResult result;
  items = DeduplicateOrdered(std::move(items));
  result.after_deduplicate = items.size();
  if (training != nullptr) {
    std::erase_if(items, [&](const Ordered& item) {
      bool drop = training->contains(AssertionKey::Of(item.assertion));
      result.training_dropped += drop;
      return drop;
    });
  }
  result.items = RetainTopKOrdered(std::move(items), config.top_k_per_pair);
  return result;
}

}  // namespace

void PipelineConfig::Validate() const {
  if (top_k_per_pair == 0) {
    throw Error(ErrorCode::kInvalidArgument, "top_k_per_pair must be >= 1");
  }
  if (threads == 0) {
    throw Error(ErrorCode::kInvalidArgument, "threads must be >= 1");
  }
}

double ComputeBeamScore(std::span<const double> token_logprobs) {
  if (token_logprobs.empty()) {
    throw Error(ErrorCode::kEmptySequence, "token_logprobs is empty");
  }
  // Shewchuk's exact summation into non-overlapping partials, followed by a
  // correctly rounded collapse (half-even on exact ties).
  std::vector<double> partials;
  for (double x : token_logprobs) {
    if (!std::isfinite(x) || x > 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "token logprob must be finite and <= 0");
    }
    std::size_t i = 0;
    for (double y : partials) {
      if (std::fabs(x) < std::fabs(y)) std::swap(x, y);
      double hi = x + y;
      double lo = y - (hi - x);
      if (lo != 0.0) partials[i++] = lo;
      x = hi;
    }
    partials.resize(i);
    partials.push_back(x);
  }
  std::size_t n = partials.size();
  double hi = partials[--n];
  double lo = 0;
  while (n > 0) {
    double x = hi;
    double y = partials[--n];
    hi = x + y;
    lo = y - (hi - x);
    if (lo != 0.0) break;
  }
  if (n > 0 &&
      ((lo < 0 && partials[n - 1] < 0) || (lo > 0 && partials[n - 1] > 0))) {
    double y = lo * 2;
    double x = hi + y;
    if (y == x - hi) hi = x;
  }
  return hi;
}

bool RanksBefore(const Assertion& a, const Assertion& b) {
  if (a.score.has_value() != b.score.has_value()) return a.score.has_value();
  if (!a.score) return false;
  if (*a.score != *b.score) return *a.score > *b.score;
  if (a.predicate != b.predicate) return a.predicate < b.predicate;
  if (a.object != b.object) return a.object < b.object;
  return a.subject < b.subject;
}

std::vector<Assertion> Deduplicate(std::vector<Assertion> assertions) {
  return WithoutOrdinals(
      DeduplicateOrdered(WithOrdinals(std::move(assertions))));
}

std::vector<Assertion> RetainTopK(std::vector<Assertion> assertions,
                                  const PipelineConfig& config) {
  config.Validate();
  return WithoutOrdinals(RetainTopKOrdered(WithOrdinals(std::move(assertions)),
                                           config.top_k_per_pair));
}

std::vector<Assertion> AssignRanks(std::vector<Assertion> assertions) {
  std::stable_sort(assertions.begin(), assertions.end(), RanksBefore);
  std::unordered_map<std::string_view, std::uint32_t> subject_counter;
  std::unordered_map<PairKey, std::uint32_t, PairKeyHash> pair_counter;
  for (std::size_t i = 0; i < assertions.size(); ++i) {
    Assertion& a = assertions[i];
    a.global_rank = static_cast<std::uint32_t>(i + 1);
    a.subject_rank = ++subject_counter[a.subject];
    a.local_rank = ++pair_counter[{a.subject, a.predicate}];
  }
  return assertions;
}

Assertion ScoreRecord(const GenerationRecord& record,
                      std::shared_ptr<const ResourceId> resource) {
  Assertion a;
  a.subject = NormalizeText(record.subject);
  a.predicate = record.predicate;
  a.object = CleanSurface(record.object_text);
  a.score = ComputeBeamScore(record.token_logprobs);
  a.resource = std::move(resource);
  return a;
}

std::shared_ptr<const Resource> BuildResource(
    std::span<const GenerationRecord> records, ResourceId id,
    const PipelineConfig& config, const Resource* training) {
  config.Validate();
  auto id_ptr = std::make_shared<const ResourceId>(id);

  ResourceMetadata meta;
  meta.top_k_per_pair = config.top_k_per_pair;
  meta.drop_training_duplicates = config.drop_training_duplicates;
  meta.input_records = records.size();
  if (config.drop_training_duplicates) {
    meta.stage_order =
        "score,normalize,deduplicate,drop_training_duplicates,top_k,rank";
  }

  std::unordered_set<AssertionKey, AssertionKeyHash> training_keys;
  const bool drop = config.drop_training_duplicates && training != nullptr;
  if (drop) {
    for (const Assertion& a : training->assertions()) {
      training_keys.insert(AssertionKey::Of(a));
    }
  }

  const std::size_t partitions = config.threads;
  std::vector<std::vector<Ordered>> parts(partitions);
  std::hash<std::string> hasher;
  for (std::size_t i = 0; i < records.size(); ++i) {
    Assertion a = ScoreRecord(records[i], id_ptr);
    if (a.subject.empty() || NormalizeText(a.object).empty()) {
      ++meta.rejected_records;
      continue;
    }
    std::size_t p = partitions == 1 ? 0 : hasher(a.subject) % partitions;
    parts[p].push_back({i, std::move(a)});
  }

  std::vector<PartitionResult> results(partitions);
  const auto* training_set = drop ? &training_keys : nullptr;
  if (partitions == 1) {
    results[0] = ProcessPartition(std::move(parts[0]), config, training_set);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(partitions);
    for (std::size_t p = 0; p < partitions; ++p) {
      workers.emplace_back([&, p] {
        results[p] =
            ProcessPartition(std::move(parts[p]), config, training_set);
      });
    }
    for (auto& w : workers) w.join();
  }

  std::vector<Ordered> merged;
  for (PartitionResult& r : results) {
    meta.after_deduplicate += r.after_deduplicate;
    meta.training_duplicates_dropped += r.training_dropped;
    std::move(r.items.begin(), r.items.end(), std::back_inserter(merged));
  }
  std::sort(
      merged.begin(), merged.end(),
      [](const Ordered& x, const Ordered& y) { return x.ordinal < y.ordinal; });
  meta.after_top_k = merged.size();

  auto ranked = AssignRanks(WithoutOrdinals(std::move(merged)));
  return std::make_shared<const Resource>(std::move(id), std::move(ranked),
                                          std::move(meta));
}

std::shared_ptr<const Resource> BuildTableResource(
    std::vector<Assertion> assertions, ResourceId id) {
  ResourceMetadata meta;
  meta.top_k_per_pair = std::nullopt;
  meta.stage_order = "normalize,deduplicate,rank";
  meta.input_records = assertions.size();
  auto deduplicated = Deduplicate(std::move(assertions));
  meta.after_deduplicate = deduplicated.size();
  meta.after_top_k = deduplicated.size();
  auto ranked = AssignRanks(std::move(deduplicated));
  return std::make_shared<const Resource>(std::move(id), std::move(ranked),
                                          std::move(meta));
}

std::string ResourceMetadataJson(const Resource& resource) {
  const ResourceMetadata& m = resource.metadata();
  nlohmann::ordered_json j;
  j["name"] = resource.name();
  j["kind"] = std::string(ResourceKindName(resource.id().kind));
  j["config"]["top_k_per_pair"] =
      m.top_k_per_pair ? nlohmann::ordered_json(*m.top_k_per_pair)
                       : nlohmann::ordered_json(nullptr);
  j["config"]["drop_training_duplicates"] = m.drop_training_duplicates;
  j["config"]["stage_order"] = m.stage_order;
  j["counts"]["input_records"] = m.input_records;
  j["counts"]["rejected_records"] = m.rejected_records;
  j["counts"]["after_deduplicate"] = m.after_deduplicate;
  j["counts"]["training_duplicates_dropped"] = m.training_duplicates_dropped;
  j["counts"]["after_top_k"] = m.after_top_k;
  j["counts"]["assertions"] = resource.size();
  j["counts"]["subjects"] = resource.index().subjects().size();
  j["counts"]["pairs"] = resource.index().pair_count();
  return j.dump(2);
}

}  // namespace cskb
