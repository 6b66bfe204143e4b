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

#include "cskb/diagnostics.h"

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <set>
#include <string>
#include <vector>

#include "cskb/text.h"
#include "test_util.h"

namespace cskb {
namespace {

using testing::MakeAssertion;
using testing::TableOf;

constexpr Predicate kCap = Predicate::kCapableOf;
constexpr Predicate kHasA = Predicate::kHasA;

// 130 chicken objects, 45 of which contain the word "chicken".
std::shared_ptr<const Resource> ChickenResource() {
  std::vector<Assertion> rows;
  for (int i = 0; i < 130; ++i) {
    std::string object = i < 45 ? "eat chicken " + std::to_string(i)
                                : "lay egg " + std::to_string(i);
    if (i == 44) object = "Chicken Coop";
    if (i == 45) object = "chickens";  // a different token
    rows.push_back(MakeAssertion("chicken", kAllPredicates[i % kNumPredicates],
                                 object, -0.01 * (i + 1)));
  }
  return TableOf(rows, "BART-ConceptNet");
}

TEST(SubjectCopyRateTest, ChickenCounts) {
  auto r = ChickenResource();
  CopyRate c = SubjectCopyRate(*r, "chicken");
  EXPECT_EQ(c.copies, 45u);
  EXPECT_EQ(c.total, 130u);
  EXPECT_NEAR(c.rate, 0.346, 0.0005);
  EXPECT_FALSE(c.undefined);
}

TEST(SubjectCopyRateTest, NoEcho) {
  auto r = TableOf(
      {MakeAssertion("dog", kCap, "bark"), MakeAssertion("dog", kCap, "run")});
  CopyRate c = SubjectCopyRate(*r, "dog");
  EXPECT_EQ(c.copies, 0u);
  EXPECT_EQ(c.total, 2u);
  EXPECT_EQ(c.rate, 0.0);
}

TEST(SubjectCopyRateTest, OneEchoInThree) {
  auto r = TableOf({MakeAssertion("ice cream", kCap, "melt"),
                    MakeAssertion("ice cream", kHasA, "ice cream cone"),
                    MakeAssertion("ice cream", kHasA, "cream")});
  CopyRate c = SubjectCopyRate(*r, "Ice Cream");
  EXPECT_EQ(c.copies, 1u);
  EXPECT_EQ(c.total, 3u);
  EXPECT_NEAR(c.rate, 1.0 / 3.0, 1e-12);
}

TEST(SubjectCopyRateTest, UnknownSubjectIsFlagged) {
  auto r = TableOf({MakeAssertion("dog", kCap, "bark")});
  CopyRate c = SubjectCopyRate(*r, "unicorn");
  EXPECT_EQ(c.copies, 0u);
  EXPECT_EQ(c.total, 0u);
  EXPECT_EQ(c.rate, 0.0);
  EXPECT_TRUE(c.undefined);
}

TEST(NumberValueTest, Lexicon) {
  EXPECT_EQ(NumberValue("4"), 4);
  EXPECT_EQ(NumberValue("9999"), 9999);
  EXPECT_FALSE(NumberValue("10000").has_value());
  EXPECT_EQ(NumberValue("one"), 1);
  EXPECT_EQ(NumberValue("twenty"), 20);
  EXPECT_EQ(NumberValue("dozen"), 12);
  EXPECT_FALSE(NumberValue("hundred").has_value());
  EXPECT_FALSE(NumberValue("").has_value());
}

TEST(QuantityConflictsTest, BikeWheels) {
  auto r = TableOf({MakeAssertion("bike", kHasA, "four wheels", -0.1),
                    MakeAssertion("bike", kHasA, "pedals", -0.2),
                    MakeAssertion("bike", kHasA, "two wheels", -0.3),
                    MakeAssertion("bike", kHasA, "three wheels", -0.4),
                    MakeAssertion("bike", kHasA, "twelve wheels", -0.5),
                    MakeAssertion("bike", kHasA, "a seat", -0.6)},
                   "GPT2-XL-ConceptNet");
  auto groups = QuantityConflicts(*r, "bike", kHasA);
  ASSERT_EQ(groups.size(), 1u);
  const QuantityGroup& g = groups[0];
  EXPECT_EQ(g.masked, "# wheels");
  EXPECT_EQ(g.distinct_values, 4u);
  std::vector<std::string> objects;
  std::vector<std::uint32_t> ranks;
  for (const Assertion& a : g.members) {
    objects.push_back(a.object);
    ranks.push_back(a.local_rank);
  }
  EXPECT_EQ(objects,
            (std::vector<std::string>{"four wheels", "two wheels",
                                      "three wheels", "twelve wheels"}));
  EXPECT_EQ(ranks, (std::vector<std::uint32_t>{1, 3, 4, 5}));
}

TEST(QuantityConflictsTest, NoNumbersNoGroup) {
  auto r = TableOf({MakeAssertion("bike", kHasA, "red wheel"),
                    MakeAssertion("bike", kHasA, "blue wheel")});
  EXPECT_TRUE(QuantityConflicts(*r, "bike", kHasA).empty());
}

TEST(QuantityConflictsTest, DigitAndWordFormsUnify) {
  auto r = TableOf({MakeAssertion("bird", kHasA, "2 legs"),
                    MakeAssertion("bird", kHasA, "two legs")});
  auto groups = QuantityConflicts(*r, "bird", kHasA);
  ASSERT_EQ(groups.size(), 1u);
  EXPECT_EQ(groups[0].members.size(), 2u);
  EXPECT_EQ(groups[0].distinct_values, 1u);
}

TEST(QuantityConflictsTest, OtherPairsAreSeparate) {
  auto r = TableOf({MakeAssertion("bike", kHasA, "two wheels"),
                    MakeAssertion("car", kHasA, "four wheels"),
                    MakeAssertion("bike", kCap, "four wheels")});
  EXPECT_TRUE(QuantityConflicts(*r, "bike", kHasA).empty());
}

TEST(PluralRedundancyTest, VisitPatients) {
  auto r = TableOf({MakeAssertion("doctor", kCap, "visit patient", -0.1),
                    MakeAssertion("doctor", kCap, "Visit Patients", -0.2),
                    MakeAssertion("doctor", kCap, "heal", -0.3)});
  auto pairs = PluralRedundancy(*r, "doctor", kCap);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].first.object, "visit patient");
  EXPECT_EQ(pairs[0].second.object, "Visit Patients");
}

TEST(PluralRedundancyTest, EsFold) {
  auto r = TableOf({MakeAssertion("city", kHasA, "bus"),
                    MakeAssertion("city", kHasA, "buses")});
  EXPECT_EQ(PluralRedundancy(*r, std::nullopt, std::nullopt).size(), 1u);
}

TEST(PluralRedundancyTest, GrassIsNotAPlural) {
  auto r = TableOf({MakeAssertion("lawn", kHasA, "grass"),
                    MakeAssertion("lawn", kHasA, "gras")});
  EXPECT_TRUE(PluralRedundancy(*r, std::nullopt, std::nullopt).empty());
}

TEST(PluralRedundancyTest, ShortWordsAndOtherPredicatesDoNotPair) {
  auto r = TableOf(
      {MakeAssertion("x", kHasA, "as"), MakeAssertion("x", kHasA, "a"),
       MakeAssertion("x", kHasA, "dog"), MakeAssertion("x", kCap, "dogs")});
  EXPECT_TRUE(PluralRedundancy(*r, std::nullopt, std::nullopt).empty());
}

TEST(ResourceStatsTest, EmptyResource) {
  auto r = TableOf({});
  ResourceStats s = ComputeResourceStats(*r);
  EXPECT_EQ(s.total, 0u);
  EXPECT_EQ(s.subjects, 0u);
  EXPECT_EQ(s.pairs, 0u);
  EXPECT_EQ(s.mean_objects_per_pair, 0.0);
  for (std::size_t n : s.per_predicate) EXPECT_EQ(n, 0u);
}

TEST(ResourceStatsTest, SixAssertionHandTally) {
  auto r = TableOf(
      {MakeAssertion("a", kCap, "x", -0.1), MakeAssertion("a", kCap, "y", -0.2),
       MakeAssertion("a", kHasA, "z", -0.3),
       MakeAssertion("b", kCap, "x", -0.4), MakeAssertion("b", kCap, "w", -0.5),
       MakeAssertion("b", kCap, "v", -0.6)});
  ResourceStats s = ComputeResourceStats(*r);
  EXPECT_EQ(s.total, 6u);
  EXPECT_EQ(s.per_predicate[PredicateIndex(kCap)], 5u);
  EXPECT_EQ(s.per_predicate[PredicateIndex(kHasA)], 1u);
  EXPECT_EQ(s.subjects, 2u);
  EXPECT_EQ(s.pairs, 3u);
  EXPECT_DOUBLE_EQ(s.mean_objects_per_pair, 2.0);

  ResourceStats top2 = ComputeResourceStats(*r, 2);
  EXPECT_EQ(top2.total, 4u);
  EXPECT_EQ(top2.per_predicate[PredicateIndex(kHasA)], 0u);
}

TEST(DiagnosticsReportTest, CombinesDetectorsAndCitesRealAssertions) {
  auto r = TableOf({MakeAssertion("bike", kHasA, "four wheels", -0.1),
                    MakeAssertion("bike", kHasA, "two wheels", -0.2),
                    MakeAssertion("bike", kCap, "carry bike", -0.3),
                    MakeAssertion("doctor", kCap, "visit patient", -0.4),
                    MakeAssertion("doctor", kCap, "visit patients", -0.5)});
  DiagnosticsReport report = BuildDiagnosticsReport(*r);
  EXPECT_EQ(report.stats.total, 5u);
  ASSERT_EQ(report.copy_rates.size(), 2u);
  EXPECT_EQ(report.copy_rates[0].subject, "bike");
  EXPECT_EQ(report.copy_rates[0].rate.copies, 1u);
  EXPECT_EQ(report.quantity_groups.size(), 1u);
  ASSERT_EQ(report.plural_pairs.size(), 1u);
  std::set<std::uint32_t> ranks;
  for (const Assertion& a : r->assertions()) ranks.insert(a.global_rank);
  for (const RedundantPair& p : report.plural_pairs) {
    EXPECT_TRUE(ranks.count(p.first.global_rank));
    EXPECT_TRUE(ranks.count(p.second.global_rank));
  }
  for (const SubjectCopy& c : report.copy_rates) {
    EXPECT_GE(c.rate.rate, 0.0);
    EXPECT_LE(c.rate.rate, 1.0);
  }

  auto j = nlohmann::json::parse(DiagnosticsReportJson(report));
  EXPECT_EQ(j["stats"]["total"], 5);
  EXPECT_FALSE(DiagnosticsReportText(report).empty());

  DiagnosticsReport one = BuildDiagnosticsReport(*r, "doctor");
  EXPECT_EQ(one.copy_rates.size(), 1u);
  EXPECT_EQ(one.plural_pairs.size(), 1u);
  EXPECT_TRUE(one.quantity_groups.empty());
}

}  // namespace
}  // namespace cskb
