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

#include "cskb/annotation_io.h"

#include <algorithm>

#include "cskb/csv.h"
#include "cskb/error.h"
#include "cskb/text.h"

namespace cskb {
namespace {

// Column positions by header name; throws when one is missing.
std::vector<std::size_t> ColumnsOf(
    const CsvRecord& header, std::initializer_list<std::string_view> names) {
  std::vector<std::size_t> cols;
  for (std::string_view name : names) {
    auto it = std::find(header.fields.begin(), header.fields.end(), name);
    if (it == header.fields.end()) {
      throw Error(ErrorCode::kParseError,
                  "CSV header lacks column '" + std::string(name) + "'");
    }
    cols.push_back(it - header.fields.begin());
  }
  return cols;
}

}  // namespace

void WriteAnnotationCsv(std::ostream& out,
                        std::span<const AnnotationTask> tasks) {
  const std::vector<std::string> header = {"task_id", "subject",  "predicate",
                                           "object",  "sentence", "dimension"};
  WriteCsvRow(out, header);
  for (const AnnotationTask& t : tasks) {
    std::vector<std::string> row = {
        t.task_id,
        t.assertion.subject,
        std::string(PredicateName(t.assertion.predicate)),
        t.assertion.object,
        t.sentence,
        std::string(DimensionName(t.dimension))};
    WriteCsvRow(out, row);
  }
}

std::map<std::string, TaskRef> ReadAnnotationTasks(std::istream& in) {
  auto records = ReadCsv(in);
  std::map<std::string, TaskRef> tasks;
  if (records.empty()) return tasks;
  auto cols = ColumnsOf(
      records[0], {"task_id", "subject", "predicate", "object", "dimension"});
  std::size_t width = *std::max_element(cols.begin(), cols.end()) + 1;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const CsvRecord& rec = records[r];
    if (rec.fields.size() < width) {
      throw Error(ErrorCode::kParseError, "annotation row on line " +
                                              std::to_string(rec.line) +
                                              " has too few columns");
    }
    TaskRef ref;
    ref.key.subject = NormalizeText(rec.fields[cols[1]]);
    ref.key.predicate = ParsePredicate(rec.fields[cols[2]]);
    ref.key.object = NormalizeText(rec.fields[cols[3]]);
    ref.dimension = ParseDimension(rec.fields[cols[4]]);
    tasks[rec.fields[cols[0]]] = std::move(ref);
  }
  return tasks;
}

JudgementImport ReadJudgementCsv(std::istream& in,
                                 const std::map<std::string, TaskRef>& tasks) {
  JudgementImport out;
  auto records = ReadCsv(in);
  if (records.empty()) return out;
  auto cols =
      ColumnsOf(records[0], {"task_id", "worker", "dimension", "rating"});
  std::size_t width = *std::max_element(cols.begin(), cols.end()) + 1;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const CsvRecord& rec = records[r];
    if (rec.fields.size() < width) {
      out.report.Reject(rec.line, "too few columns");
      continue;
    }
    auto task = tasks.find(rec.fields[cols[0]]);
    if (task == tasks.end()) {
      out.report.Reject(rec.line,
                        "unknown task_id '" + rec.fields[cols[0]] + "'");
      continue;
    }
    const std::string& dim_text = rec.fields[cols[2]];
    if (dim_text != "typicality" && dim_text != "saliency") {
      out.report.Reject(rec.line, "bad dimension '" + dim_text + "'");
      continue;
    }
    Dimension dim = ParseDimension(dim_text);
    if (dim != task->second.dimension) {
      out.report.Reject(rec.line, "dimension differs from the task's");
      continue;
    }
    const std::string rating_text = CleanSurface(rec.fields[cols[3]]);
    Rating rating;
    if (rating_text == "NA") {
      rating = std::nullopt;
    } else if (rating_text.size() == 1 && rating_text[0] >= '1' &&
               rating_text[0] <= '4') {
      rating = rating_text[0] - '0';
    } else {
      out.report.Reject(rec.line,
                        "rating must be 1-4 or NA, got '" + rating_text + "'");
      continue;
    }
    out.rows.push_back({task->second.key, rec.fields[cols[1]], dim, rating});
    ++out.report.records_read;
  }
  return out;
}

}  // namespace cskb
