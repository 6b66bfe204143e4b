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

#include "cskb/ingest.h"

#include <charconv>
#include <cmath>
#include <map>
#include <nlohmann/json.hpp>
#include <string_view>

#include "cskb/error.h"
#include "cskb/text.h"

namespace cskb {
namespace {

using nlohmann::json;

// Iterates physical lines, tracking line numbers and stripping the BOM and
// CR. `fn(line_number, line)` is called for every non-blank line; blank
// lines are recorded in `blanks` when given.
template <typename Fn>
void ForEachLine(std::istream& in, Fn&& fn, IngestReport* blanks = nullptr) {
  if (!in) throw Error(ErrorCode::kIoFailure, "input stream is not readable");
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view = StripCarriageReturn(line);
    if (number == 1) view = StripBom(view);
    if (IsBlank(view)) {
      if (blanks != nullptr) blanks->Reject(number, "blank line");
      continue;
    }
    fn(number, view);
  }
  if (in.bad()) throw Error(ErrorCode::kIoFailure, "read error on input");
}

std::optional<double> ParseReal(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0;
  auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    return std::nullopt;
  }
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

// Returns an error reason, or empty on success.
std::string ParseGenerationLine(std::string_view line, GenerationRecord& out) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return "malformed JSON";
  if (!j.is_object()) return "record is not a JSON object";
  for (const char* field : {"subject", "predicate", "object_text",
                            "token_logprobs", "model", "beam_index"}) {
    if (!j.contains(field)) return std::string("missing field ") + field;
  }
  if (!j["subject"].is_string() || !j["predicate"].is_string() ||
      !j["object_text"].is_string() || !j["model"].is_string()) {
    return "subject, predicate, object_text and model must be strings";
  }
  auto predicate = TryParsePredicate(j["predicate"].get<std::string>());
  if (!predicate) {
    return "unknown predicate '" + j["predicate"].get<std::string>() + "'";
  }
  const json& logprobs = j["token_logprobs"];
  if (!logprobs.is_array()) return "token_logprobs must be an array";
  if (logprobs.empty()) return "empty token_logprobs";
  out.token_logprobs.clear();
  out.token_logprobs.reserve(logprobs.size());
  for (const json& v : logprobs) {
    if (!v.is_number()) return "non-numeric token logprob";
    double x = v.get<double>();
    if (!std::isfinite(x)) return "non-finite token logprob";
    if (x > 0) return "token logprob > 0";
    out.token_logprobs.push_back(x);
  }
  const json& beam = j["beam_index"];
  if (!beam.is_number_integer() || beam.get<std::int64_t>() < 0) {
    return "beam_index must be a non-negative integer";
  }
  out.subject = j["subject"].get<std::string>();
  out.predicate = *predicate;
  out.object_text = j["object_text"].get<std::string>();
  out.model = j["model"].get<std::string>();
  out.beam_index = static_cast<std::uint32_t>(beam.get<std::int64_t>());
  if (NormalizeText(out.subject).empty()) return "empty subject";
  if (NormalizeText(out.object_text).empty()) return "empty object_text";
  return {};
}

}  // namespace

void IngestReport::Reject(std::size_t line, std::string reason) {
  ++records_rejected;
  rejections.push_back({line, std::move(reason)});
}

void IngestReport::Merge(const IngestReport& other) {
  records_read += other.records_read;
  records_rejected += other.records_rejected;
  rejections.insert(rejections.end(), other.rejections.begin(),
                    other.rejections.end());
}

GenerationBatch ReadGenerationRecords(std::istream& in) {
  GenerationBatch batch;
  ForEachLine(in, [&](std::size_t number, std::string_view line) {
    GenerationRecord record;
    std::string reason = ParseGenerationLine(line, record);
    if (!reason.empty()) {
      batch.report.Reject(number, std::move(reason));
      return;
    }
    batch.records.push_back(std::move(record));
    ++batch.report.records_read;
  });
  return batch;
}

std::string GenerationRecordToJson(const GenerationRecord& record) {
  json j;
  j["subject"] = record.subject;
  j["predicate"] = std::string(PredicateName(record.predicate));
  j["object_text"] = record.object_text;
  j["token_logprobs"] = record.token_logprobs;
  j["model"] = record.model;
  j["beam_index"] = record.beam_index;
  return j.dump();
}

AssertionTable ReadAssertionTable(std::istream& in,
                                  std::shared_ptr<const ResourceId> resource) {
  AssertionTable table;
  ForEachLine(in, [&](std::size_t number, std::string_view line) {
    auto fields = SplitFields(line, '\t');
    if (fields.size() != 3 && fields.size() != 4) {
      table.report.Reject(number, "expected 3 or 4 columns, got " +
                                      std::to_string(fields.size()));
      return;
    }
    auto predicate = TryParsePredicate(CleanSurface(fields[1]));
    if (!predicate) {
      table.report.Reject(number,
                          "unknown predicate '" + std::string(fields[1]) + "'");
      return;
    }
    Assertion a;
    a.subject = NormalizeText(fields[0]);
    a.predicate = *predicate;
    a.object = CleanSurface(fields[2]);
    if (a.subject.empty() || NormalizeText(a.object).empty()) {
      table.report.Reject(number, "empty subject or object");
      return;
    }
    if (fields.size() == 4 && !IsBlank(fields[3])) {
      auto score = ParseReal(fields[3]);
      if (!score) {
        table.report.Reject(
            number, "unparsable score '" + std::string(fields[3]) + "'");
        return;
      }
      if (*score > 0) {
        table.report.Reject(number, "score > 0");
        return;
      }
      a.score = *score;
    }
    a.resource = resource;
    table.assertions.push_back(std::move(a));
    ++table.report.records_read;
  });
  return table;
}

std::string FormatScore(double score) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), score);
  return std::string(buf, ptr);
}

void WriteAssertionTable(std::ostream& out,
                         const std::vector<Assertion>& assertions) {
  for (const Assertion& a : assertions) {
    out << a.subject << '\t' << PredicateName(a.predicate) << '\t' << a.object;
    if (a.score) out << '\t' << FormatScore(*a.score);
    out << '\n';
  }
}

GroundTruthSet ReadGroundTruth(std::istream& in) {
  GroundTruthSet set;
  ForEachLine(
      in,
      [&](std::size_t number, std::string_view line) {
        auto fields = SplitFields(line, '\t');
        if (fields.size() != 2) {
          set.report.Reject(number, "expected 2 columns, got " +
                                        std::to_string(fields.size()));
          return;
        }
        GroundTruthSentence s{NormalizeText(fields[0]), std::string(fields[1])};
        if (s.concept_name.empty() || IsBlank(s.sentence)) {
          set.report.Reject(number, "empty concept or sentence");
          return;
        }
        set.sentences.push_back(std::move(s));
        ++set.report.records_read;
      },
      &set.report);
  return set;
}

EmbeddingLoad ReadEmbeddings(std::istream& in) {
  EmbeddingLoad load;
  std::map<std::string, std::size_t, std::less<>> first_seen;
  ForEachLine(in, [&](std::size_t number, std::string_view line) {
    std::size_t tab = line.rfind('\t');
    if (tab == std::string_view::npos || tab == 0) {
      load.report.Reject(number, "expected 'sentence<TAB>vector'");
      return;
    }
    SentenceEmbedding e;
    e.key = std::string(line.substr(0, tab));
    std::string_view rest = line.substr(tab + 1);
    for (std::string_view field : SplitFields(rest, ' ')) {
      if (field.empty()) continue;
      auto v = ParseReal(field);
      if (!v) {
        load.report.Reject(number,
                           "unparsable component '" + std::string(field) + "'");
        return;
      }
      e.vector.push_back(*v);
    }
    if (e.vector.empty()) {
      load.report.Reject(number, "empty vector");
      return;
    }
    if (load.store.dimension() != 0 &&
        e.vector.size() != load.store.dimension()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "line " + std::to_string(number) + ": dimension " +
                      std::to_string(e.vector.size()) + " after dimension " +
                      std::to_string(load.store.dimension()) +
                      " was established");
    }
    if (!(EuclideanNorm(e.vector) > 0)) {
      load.report.Reject(number, "zero vector");
      return;
    }
    std::string key = e.key;
    if (load.store.Insert(std::move(e))) {
      load.report.Reject(number, "duplicate key (replaces line " +
                                     std::to_string(first_seen[key]) + ")");
    } else {
      ++load.report.records_read;
    }
    first_seen[key] = number;
  });
  return load;
}

std::vector<std::string> ReadSubjectList(std::istream& in) {
  std::vector<std::string> subjects;
  ForEachLine(in, [&](std::size_t, std::string_view line) {
    subjects.push_back(NormalizeText(line));
  });
  return subjects;
}

std::vector<std::string> SelectSubjects(
    const std::vector<Assertion>& assertions, std::size_t min_assertions) {
  std::map<std::string, std::size_t> counts;
  for (const Assertion& a : assertions) ++counts[a.subject];
  std::vector<std::string> out;
  for (const auto& [subject, count] : counts) {
    if (count >= min_assertions) out.push_back(subject);
  }
  return out;
}

}  // namespace cskb
