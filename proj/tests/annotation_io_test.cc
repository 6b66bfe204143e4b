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

#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include "cskb/csv.h"
#include "cskb/error.h"
#include "cskb/evaluate.h"
#include "cskb/verbalize.h"
#include "test_util.h"

namespace cskb {
namespace {

TEST(CsvTest, QuotesOnlyWhenNeeded) {
  std::ostringstream out;
  std::vector<std::string> row = {"plain", "a,b", "say \"hi\"", "two\nlines",
                                  ""};
  WriteCsvRow(out, row);
  EXPECT_EQ(out.str(), "plain,\"a,b\",\"say \"\"hi\"\"\",\"two\nlines\",\n");
}

TEST(CsvTest, RoundTripWithEmbeddedNewlines) {
  std::ostringstream out;
  std::vector<std::string> a = {"x", "a,b", "two\nlines"};
  std::vector<std::string> b = {"y", "\"", ""};
  WriteCsvRow(out, a);
  WriteCsvRow(out, b);
  std::istringstream in(out.str());
  auto records = ReadCsv(in);
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].fields, a);
  EXPECT_EQ(records[0].line, 1u);
  EXPECT_EQ(records[1].fields, b);
  EXPECT_EQ(records[1].line, 3u);
}

TEST(CsvTest, CrlfAndBlankRecords) {
  std::istringstream in("a,b\r\n\r\nc,d\r\n");
  auto records = ReadCsv(in);
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[1].fields, (std::vector<std::string>{"c", "d"}));
}

TEST(CsvTest, UnterminatedQuoteIsAnError) {
  std::istringstream in("a,\"open\n");
  try {
    ReadCsv(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
  }
}

std::vector<AnnotationTask> SampleTasks() {
  std::vector<Assertion> rows;
  for (int i = 0; i < 12; ++i) {
    rows.push_back(testing::MakeAssertion(
        "s" + std::to_string(i % 3), Predicate::kCapableOf,
        "do, \"thing\" " + std::to_string(i), -0.1 * (i + 1)));
  }
  auto r = testing::TableOf(rows);
  SamplingConfig config = SamplingConfig::For(Dimension::kSaliency, 3);
  config.sample_size = 6;
  return SampleForAnnotation(*r, config, TemplateTable::Defaults());
}

TEST(AnnotationCsvTest, ExportAndReadBack) {
  auto tasks = SampleTasks();
  std::ostringstream out;
  WriteAnnotationCsv(out, tasks);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
            "task_id,subject,predicate,object,sentence,dimension");
  std::istringstream in(out.str());
  auto refs = ReadAnnotationTasks(in);
  ASSERT_EQ(refs.size(), tasks.size());
  for (const AnnotationTask& t : tasks) {
    const TaskRef& ref = refs.at(t.task_id);
    EXPECT_EQ(ref.key, AssertionKey::Of(t.assertion));
    EXPECT_EQ(ref.dimension, Dimension::kSaliency);
  }
}

TEST(AnnotationCsvTest, MissingColumnIsAnError) {
  std::istringstream in("task_id,subject\nx,y\n");
  EXPECT_THROW(ReadAnnotationTasks(in), Error);
}

TEST(JudgementCsvTest, ImportsRatingsAndReportsBadRows) {
  auto tasks = SampleTasks();
  std::ostringstream exported;
  WriteAnnotationCsv(exported, tasks);
  std::istringstream exported_in(exported.str());
  auto refs = ReadAnnotationTasks(exported_in);

  const std::string& id = tasks[0].task_id;
  std::istringstream in(
      "worker,task_id,rating,dimension\n"
      "w1," +
      id +
      ",4,saliency\n"
      "w2," +
      id +
      ",NA,saliency\n"
      "w3," +
      id +
      ",1,saliency\n"
      "w4,nope,3,saliency\n"
      "w5," +
      id +
      ",5,saliency\n"
      "w6," +
      id +
      ",3,typicality\n"
      "w7," +
      id +
      ",3,novelty\n"
      "w8," +
      id + "\n");
  JudgementImport imported = ReadJudgementCsv(in, refs);
  ASSERT_EQ(imported.rows.size(), 3u);
  EXPECT_EQ(imported.rows[0].rating, 4);
  EXPECT_FALSE(imported.rows[1].rating.has_value());
  EXPECT_EQ(imported.rows[2].worker, "w3");
  EXPECT_EQ(imported.rows[0].assertion_key,
            AssertionKey::Of(tasks[0].assertion));
  EXPECT_EQ(imported.report.records_rejected, 5u);
  EXPECT_EQ(imported.report.rejections[0].line, 5u);

  auto labels = LabelFromJudgements(imported.rows, Dimension::kSaliency);
  EXPECT_EQ(labels.at(AssertionKey::Of(tasks[0].assertion)),
            Label::kUnlabelled);
}

}  // namespace
}  // namespace cskb
