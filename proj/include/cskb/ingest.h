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

#ifndef CSKB_INGEST_H_
#define CSKB_INGEST_H_

#include <cstddef>
#include <istream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "cskb/embedding_store.h"
#include "cskb/types.h"

namespace cskb {

// Per-stream account of what was accepted and what was dropped. Line numbers
// are 1-based. Blank lines are skipped; only the ground-truth reader
// reports them, since a missing sentence changes the recall denominator.
struct IngestReport {
  struct Rejection {
    std::size_t line = 0;
    std::string reason;
  };

  std::size_t records_read = 0;
  std::size_t records_rejected = 0;
  std::vector<Rejection> rejections;

  void Reject(std::size_t line, std::string reason);
  // Appends another report's rejections (line numbers are kept as-is).
  void Merge(const IngestReport& other);
};

struct GenerationBatch {
  std::vector<GenerationRecord> records;
  IngestReport report;
};

// JSON-Lines with fields subject, predicate, object_text, token_logprobs,
// model, beam_index. Invalid lines go to the report; only an unreadable
// stream throws (kIoFailure).
GenerationBatch ReadGenerationRecords(std::istream& in);

// Serializes one record as a single JSON line (no trailing newline).
std::string GenerationRecordToJson(const GenerationRecord& record);

struct AssertionTable {
  std::vector<Assertion> assertions;
  IngestReport report;
};

// TSV: subject, predicate, object, optional score. Subjects are normalized,
// objects keep their surface form. Ranks stay 0.
AssertionTable ReadAssertionTable(std::istream& in,
                                  std::shared_ptr<const ResourceId> resource);

// Writes the 3/4-column TSV in the given order. Scores use the shortest
// decimal form that round-trips.
void WriteAssertionTable(std::ostream& out,
                         const std::vector<Assertion>& assertions);

std::string FormatScore(double score);

struct GroundTruthSet {
  std::vector<GroundTruthSentence> sentences;
  IngestReport report;
};

// TSV: concept, sentence. The concept is normalized; the sentence is kept
// verbatim since it is the embedding lookup key.
GroundTruthSet ReadGroundTruth(std::istream& in);

struct EmbeddingLoad {
  EmbeddingStore store;
  IngestReport report;
};

// "sentence<TAB>v1 v2 ... vd". A dimension change across lines throws
// kDimensionMismatch; zero vectors and unparsable rows are reported and
// skipped; a duplicate key replaces the earlier vector and is reported.
EmbeddingLoad ReadEmbeddings(std::istream& in);

// One subject per line; blank lines ignored.
std::vector<std::string> ReadSubjectList(std::istream& in);

// Normalized subjects with at least `min_assertions` assertions, sorted.
std::vector<std::string> SelectSubjects(
    const std::vector<Assertion>& assertions, std::size_t min_assertions);

}  // namespace cskb

#endif  // CSKB_INGEST_H_
