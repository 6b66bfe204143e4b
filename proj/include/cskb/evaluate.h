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

#ifndef CSKB_EVALUATE_H_
#define CSKB_EVALUATE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cskb/embedding_store.h"
#include "cskb/resource.h"
#include "cskb/types.h"
#include "cskb/verbalize.h"

namespace cskb {

// Slack applied to the similarity threshold so that identical vectors
// (cosine 1 up to rounding) match at t = 1.0.
inline constexpr double kSimilarityTolerance = 1e-9;

// dot(u, v) / (|u| |v|), clamped to [-1, 1]. Throws kDimensionMismatch on
// differing lengths and kInvalidArgument on a zero vector.
double CosineSimilarity(std::span<const double> u, std::span<const double> v);

inline double CosineSimilarity(const SentenceEmbedding& u,
                               const SentenceEmbedding& v) {
  return CosineSimilarity(u.vector, v.vector);
}

struct RecallConfig {
  std::uint32_t top_n_per_subject = 100;
  double threshold = 0.98;

  void Validate() const;
};

struct RecallResult {
  struct ConceptCount {
    std::size_t matched = 0;
    std::size_t total = 0;
  };

  std::size_t matched = 0;
  // All ground-truth sentences.
  std::size_t total = 0;
  double recall = 0;
  // Only sentences whose concept is a subject of the resource.
  std::size_t covered_matched = 0;
  std::size_t covered_total = 0;
  double covered_recall = 0;
  std::map<std::string, ConceptCount> per_concept;
};

// A ground-truth sentence is matched when some assertion of its concept with
// subject_rank <= top_n verbalizes to a sentence whose embedding has cosine
// similarity >= threshold with it. Missing embeddings throw
// kMissingEmbedding naming the sentence.
RecallResult RecallAt(const Resource& resource,
                      std::span<const GroundTruthSentence> ground_truth,
                      const EmbeddingStore& embeddings,
                      const RecallConfig& config,
                      const TemplateTable& templates);

// RecallAt for every n in `n_values` (ascending) at one threshold.
std::vector<std::pair<std::uint32_t, double>> RecallCurve(
    const Resource& resource, std::span<const GroundTruthSentence> ground_truth,
    const EmbeddingStore& embeddings, double threshold,
    std::span<const std::uint32_t> n_values, const TemplateTable& templates);

// Every sentence RecallAt needs an embedding for, sorted and unique.
std::vector<std::string> RequiredSentences(
    const Resource& resource, std::span<const GroundTruthSentence> ground_truth,
    std::uint32_t top_n_per_subject, const TemplateTable& templates);

struct SamplingConfig {
  Dimension dimension = Dimension::kTypicality;
  std::size_t sample_size = 500;
  std::uint32_t top_n_per_subject = 100;
  std::uint64_t seed = 0;

  // 500 samples from the top-100 (typicality) or top-10 (saliency) per
  // subject.
  static SamplingConfig For(Dimension dimension, std::uint64_t seed);
  void Validate() const;
};

struct AnnotationTask {
  std::string task_id;
  Assertion assertion;
  std::string sentence;
  Dimension dimension = Dimension::kTypicality;
};

// Uniform sample without replacement from the assertions with
// subject_rank <= top_n_per_subject; identical output for identical seeds.
// Throws kPoolTooSmall (message carries the pool size).
std::vector<AnnotationTask> SampleForAnnotation(const Resource& resource,
                                                const SamplingConfig& config,
                                                const TemplateTable& templates);

// Uniform integer in [0, bound) by rejection. Platform independent, unlike
// std::uniform_int_distribution whose algorithm is unspecified.
std::uint64_t UniformBelow(std::uint64_t bound, std::mt19937_64& rng);

enum class Label { kPositive, kNegative, kUnlabelled };

std::string_view LabelName(Label label, Dimension dimension);

// Ratings 3-4 vote positive, 1-2 negative, no-judgement abstains. Strict
// majority decides; ties and zero votes are unlabelled. Rows of the other
// dimension are ignored.
std::map<AssertionKey, Label> LabelFromJudgements(
    std::span<const JudgementRow> rows, Dimension dimension);

struct PrecisionReport {
  Dimension dimension = Dimension::kTypicality;
  std::size_t samples = 0;
  // Percentages rounded to one decimal.
  double positive = 0;
  double negative = 0;
  double unlabelled = 0;

  std::string Format() const;
};

// Throws kEmptySample on an empty label set.
PrecisionReport MakePrecisionReport(const std::map<AssertionKey, Label>& labels,
                                    Dimension dimension);

}  // namespace cskb

#endif  // CSKB_EVALUATE_H_
