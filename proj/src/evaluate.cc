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

#include "cskb/evaluate.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <random>
#include <unordered_map>

#include "cskb/error.h"
#include "cskb/text.h"

namespace cskb {
namespace {

using Id = IndexSet::Id;

const EmbeddingStore::Entry& Require(const EmbeddingStore& store,
                                     const std::string& sentence) {
  const EmbeddingStore::Entry* e = store.Find(sentence);
  if (e == nullptr) {
    throw Error(ErrorCode::kMissingEmbedding,
                "no embedding for sentence '" + sentence + "'");
  }
  return *e;
}

double Dot(std::span<const double> u, std::span<const double> v) {
  double sum = 0;
  for (std::size_t i = 0; i < u.size(); ++i) sum += u[i] * v[i];
  return sum;
}

std::span<const Id> Candidates(const Resource& resource,
                               const std::string& concept_name,
                               std::uint32_t top_n) {
  auto ids = resource.index().BySubject(concept_name);
  return ids.first(std::min<std::size_t>(ids.size(), top_n));
}

// For each ground-truth sentence, the smallest subject_rank among matching
// candidates within `max_n`, or nullopt.
std::vector<std::optional<std::uint32_t>> BestMatchRanks(
    const Resource& resource, std::span<const GroundTruthSentence> ground_truth,
    const EmbeddingStore& embeddings, double threshold, std::uint32_t max_n,
    const TemplateTable& templates) {
  struct Candidate {
    std::uint32_t subject_rank;
    const EmbeddingStore::Entry* entry;
  };
  std::unordered_map<std::string, std::vector<Candidate>> by_concept;
  std::vector<std::optional<std::uint32_t>> best(ground_truth.size());
  for (std::size_t g = 0; g < ground_truth.size(); ++g) {
    const GroundTruthSentence& gt = ground_truth[g];
    const EmbeddingStore::Entry& target = Require(embeddings, gt.sentence);
    auto [it, inserted] = by_concept.try_emplace(gt.concept_name);
    if (inserted) {
      for (Id id : Candidates(resource, gt.concept_name, max_n)) {
        const Assertion& a = resource.at(id);
        it->second.push_back(
            {a.subject_rank, &Require(embeddings, Verbalize(a, templates))});
      }
    }
    for (const Candidate& c : it->second) {
      double sim =
          Dot(target.vector, c.entry->vector) / (target.norm * c.entry->norm);
      if (sim >= threshold - kSimilarityTolerance) {
        best[g] = c.subject_rank;
        break;  // candidates are in subject_rank order
      }
    }
  }
  return best;
}

RecallResult Tally(const Resource& resource,
                   std::span<const GroundTruthSentence> ground_truth,
                   const std::vector<std::optional<std::uint32_t>>& best,
                   std::uint32_t n) {
  RecallResult r;
  r.total = ground_truth.size();
  for (std::size_t g = 0; g < ground_truth.size(); ++g) {
    const std::string& concept_name = ground_truth[g].concept_name;
    bool hit = best[g].has_value() && *best[g] <= n;
    bool covered = !resource.index().BySubject(concept_name).empty();
    auto& pc = r.per_concept[concept_name];
    ++pc.total;
    if (hit) {
      ++pc.matched;
      ++r.matched;
    }
    if (covered) {
      ++r.covered_total;
      if (hit) ++r.covered_matched;
    }
  }
  r.recall = r.total == 0 ? 0.0 : static_cast<double>(r.matched) / r.total;
  r.covered_recall =
      r.covered_total == 0
          ? 0.0
          : static_cast<double>(r.covered_matched) / r.covered_total;
  return r;
}

}  // namespace

double CosineSimilarity(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "vectors of dimension " + std::to_string(u.size()) + " and " +
                    std::to_string(v.size()));
  }
  double nu = EuclideanNorm(u), nv = EuclideanNorm(v);
  if (!(nu > 0) || !(nv > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "zero vector in cosine");
  }
  return std::clamp(Dot(u, v) / (nu * nv), -1.0, 1.0);
}

void RecallConfig::Validate() const {
  if (top_n_per_subject == 0) {
    throw Error(ErrorCode::kInvalidArgument, "top_n_per_subject must be >= 1");
  }
  if (!(threshold >= 0 && threshold <= 1)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must be in [0, 1]");
  }
}

RecallResult RecallAt(const Resource& resource,
                      std::span<const GroundTruthSentence> ground_truth,
                      const EmbeddingStore& embeddings,
                      const RecallConfig& config,
                      const TemplateTable& templates) {
  config.Validate();
  auto best =
      BestMatchRanks(resource, ground_truth, embeddings, config.threshold,
                     config.top_n_per_subject, templates);
  return Tally(resource, ground_truth, best, config.top_n_per_subject);
}

std::vector<std::pair<std::uint32_t, double>> RecallCurve(
    const Resource& resource, std::span<const GroundTruthSentence> ground_truth,
    const EmbeddingStore& embeddings, double threshold,
    std::span<const std::uint32_t> n_values, const TemplateTable& templates) {
  if (n_values.empty()) return {};
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    RecallConfig{n_values[i], threshold}.Validate();
    if (i > 0 && n_values[i] < n_values[i - 1]) {
      throw Error(ErrorCode::kInvalidArgument, "n_values must be ascending");
    }
  }
  auto best = BestMatchRanks(resource, ground_truth, embeddings, threshold,
                             n_values.back(), templates);
  std::vector<std::pair<std::uint32_t, double>> curve;
  for (std::uint32_t n : n_values) {
    curve.emplace_back(n, Tally(resource, ground_truth, best, n).recall);
  }
  return curve;
}

std::vector<std::string> RequiredSentences(
    const Resource& resource, std::span<const GroundTruthSentence> ground_truth,
    std::uint32_t top_n_per_subject, const TemplateTable& templates) {
  std::vector<std::string> out;
  std::vector<std::string> seen_concepts;
  for (const GroundTruthSentence& gt : ground_truth) {
    out.push_back(gt.sentence);
    seen_concepts.push_back(gt.concept_name);
  }
  std::sort(seen_concepts.begin(), seen_concepts.end());
  seen_concepts.erase(std::unique(seen_concepts.begin(), seen_concepts.end()),
                      seen_concepts.end());
  for (const std::string& c : seen_concepts) {
    for (Id id : Candidates(resource, c, top_n_per_subject)) {
      out.push_back(Verbalize(resource.at(id), templates));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SamplingConfig SamplingConfig::For(Dimension dimension, std::uint64_t seed) {
  SamplingConfig c;
  c.dimension = dimension;
  c.sample_size = 500;
  c.top_n_per_subject = dimension == Dimension::kTypicality ? 100 : 10;
  c.seed = seed;
  return c;
}

void SamplingConfig::Validate() const {
  if (sample_size == 0) {
    throw Error(ErrorCode::kInvalidArgument, "sample_size must be >= 1");
  }
  if (top_n_per_subject == 0) {
    throw Error(ErrorCode::kInvalidArgument, "top_n_per_subject must be >= 1");
  }
}

std::uint64_t UniformBelow(std::uint64_t bound, std::mt19937_64& rng) {
  const std::uint64_t threshold = (0 - bound) % bound;
  std::uint64_t r;
  do {
    r = rng();
  } while (r < threshold);
  return r % bound;
}

std::vector<AnnotationTask> SampleForAnnotation(
    const Resource& resource, const SamplingConfig& config,
    const TemplateTable& templates) {
  config.Validate();
  std::vector<Id> pool;
  for (Id id = 0; id < resource.size(); ++id) {
    if (resource.at(id).subject_rank <= config.top_n_per_subject) {
      pool.push_back(id);
    }
  }
  if (pool.size() < config.sample_size) {
    throw Error(ErrorCode::kPoolTooSmall,
                "pool of " + std::to_string(pool.size()) +
                    " assertions is smaller than sample size " +
                    std::to_string(config.sample_size));
  }
  std::mt19937_64 rng(config.seed);
  std::vector<AnnotationTask> tasks;
  tasks.reserve(config.sample_size);
  for (std::size_t i = 0; i < config.sample_size; ++i) {
    std::size_t j = i + UniformBelow(pool.size() - i, rng);
    std::swap(pool[i], pool[j]);
    const Assertion& a = resource.at(pool[i]);
    char id[32];
    std::snprintf(id, sizeof(id), "%c%05zu",
                  config.dimension == Dimension::kTypicality ? 't' : 's',
                  i + 1);
    tasks.push_back({id, a, Verbalize(a, templates), config.dimension});
  }
  return tasks;
}

std::string_view LabelName(Label label, Dimension dimension) {
  bool typ = dimension == Dimension::kTypicality;
  switch (label) {
    case Label::kPositive:
      return typ ? "Typical" : "Salient";
    case Label::kNegative:
      return typ ? "Untypical" : "Unsalient";
    case Label::kUnlabelled:
      return "Unlabelled";
  }
  return "Unlabelled";
}

std::map<AssertionKey, Label> LabelFromJudgements(
    std::span<const JudgementRow> rows, Dimension dimension) {
  std::map<AssertionKey, std::pair<int, int>> votes;
  for (const JudgementRow& row : rows) {
    if (row.dimension != dimension) continue;
    auto& [pos, neg] = votes[row.assertion_key];
    if (!row.rating) continue;
    if (*row.rating >= 3) {
      ++pos;
    } else {
      ++neg;
    }
  }
  std::map<AssertionKey, Label> labels;
  for (const auto& [key, v] : votes) {
    const auto [pos, neg] = v;
    labels[key] = pos > neg   ? Label::kPositive
                  : neg > pos ? Label::kNegative
                              : Label::kUnlabelled;
  }
  return labels;
}

std::string PrecisionReport::Format() const {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%s: %.1f / %s: %.1f / %s: %.1f (n=%zu)",
                std::string(LabelName(Label::kPositive, dimension)).c_str(),
                positive,
                std::string(LabelName(Label::kNegative, dimension)).c_str(),
                negative, "Unlabelled", unlabelled, samples);
  return buf;
}

PrecisionReport MakePrecisionReport(const std::map<AssertionKey, Label>& labels,
                                    Dimension dimension) {
  if (labels.empty()) {
    throw Error(ErrorCode::kEmptySample, "no labelled assertions");
  }
  std::size_t pos = 0, neg = 0, un = 0;
  for (const auto& [key, label] : labels) {
    if (label == Label::kPositive)
      ++pos;
    else if (label == Label::kNegative)
      ++neg;
    else
      ++un;
  }
  auto pct = [&](std::size_t n) {
    return std::round(1000.0 * static_cast<double>(n) / labels.size()) / 10.0;
  };
  PrecisionReport r;
  r.dimension = dimension;
  r.samples = labels.size();
  r.positive = pct(pos);
  r.negative = pct(neg);
  r.unlabelled = pct(un);
  return r;
}

}  // namespace cskb
