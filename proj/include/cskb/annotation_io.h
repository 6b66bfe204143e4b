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

#ifndef CSKB_ANNOTATION_IO_H_
#define CSKB_ANNOTATION_IO_H_

#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "cskb/evaluate.h"
#include "cskb/ingest.h"
#include "cskb/types.h"

namespace cskb {

// Columns: task_id, subject, predicate, object, sentence, dimension.
void WriteAnnotationCsv(std::ostream& out,
                        std::span<const AnnotationTask> tasks);

struct TaskRef {
  AssertionKey key;
  Dimension dimension = Dimension::kTypicality;
};

// Reads an exported annotation file back into task_id -> assertion.
// Throws kParseError on a missing column or bad row.
std::map<std::string, TaskRef> ReadAnnotationTasks(std::istream& in);

struct JudgementImport {
  std::vector<JudgementRow> rows;
  IngestReport report;
};

// Columns: task_id, worker, dimension, rating (1-4 or "NA"). Rows with an
// unknown task, a bad rating or a dimension that disagrees with the task are
// reported and skipped.
JudgementImport ReadJudgementCsv(std::istream& in,
                                 const std::map<std::string, TaskRef>& tasks);

}  // namespace cskb

#endif  // CSKB_ANNOTATION_IO_H_
