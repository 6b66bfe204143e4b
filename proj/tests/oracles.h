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

#ifndef CSKB_TESTS_ORACLES_H_
#define CSKB_TESTS_ORACLES_H_

// Naive reference implementations shared by the unit tests and the
// acceptance runner. None of them use the library's indexes.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cskb/evaluate.h"
#include "cskb/ingest.h"
#include "cskb/pipeline.h"
#include "cskb/query.h"
#include "cskb/text.h"
#include "cskb/verbalize.h"
#include "test_util.h"

namespace cskb::testing {

// ---------------------------------------------------------------------------
// Pipeline.

// Everything observable about a resource: rows, scores and all three ranks.
inline std::string Dump(std::span<const Assertion> assertions) {
  std::ostringstream out;
  for (const Assertion& a : assertions) {
    out << a.subject << '\t' << PredicateName(a.predicate) << '\t' << a.object
        << '\t' << (a.score ? FormatScore(*a.score) : "-") << '\t'
        << a.local_rank << '\t' << a.subject_rank << '\t' << a.global_rank
        << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Naive reference: nested loops, no hashing, no partitions.

struct RefRow {
  std::string subject;
  Predicate predicate;
  std::string object;
  double score;
  std::uint32_t local = 0, subject_rank = 0, global = 0;
};

inline bool RefBefore(const RefRow& a, const RefRow& b) {
  return std::make_tuple(-a.score, static_cast<int>(a.predicate), a.object,
                         a.subject) <
         std::make_tuple(-b.score, static_cast<int>(b.predicate), b.object,
                         b.subject);
}

inline std::vector<RefRow> ReferenceBuild(
    const std::vector<GenerationRecord>& records, std::uint32_t k) {
  std::vector<RefRow> kept;
  for (const GenerationRecord& r : records) {
    RefRow row{NormalizeText(r.subject), r.predicate,
               CleanSurface(r.object_text), -0.0};
    for (double x : r.token_logprobs) row.score += x;  // exact: dyadic values
    if (row.subject.empty() || NormalizeText(row.object).empty()) continue;
    bool merged = false;
    for (RefRow& other : kept) {
      if (other.subject == row.subject && other.predicate == row.predicate &&
          NormalizeText(other.object) == NormalizeText(row.object)) {
        if (row.score > other.score ||
            (row.score == other.score && row.object < other.object)) {
          other = row;
        }
        merged = true;
        break;
      }
    }
    if (!merged) kept.push_back(row);
  }
  std::vector<RefRow> top;
  for (const RefRow& row : kept) {
    std::size_t better = 0;
    for (const RefRow& other : kept) {
      if (other.subject == row.subject && other.predicate == row.predicate &&
          RefBefore(other, row)) {
        ++better;
      }
    }
    if (better < k) top.push_back(row);
  }
  std::vector<RefRow> sorted = top;
  for (RefRow& row : sorted) {
    for (const RefRow& other : top) {
      if (RefBefore(other, row)) {
        ++row.global;
        if (other.subject == row.subject) {
          ++row.subject_rank;
          if (other.predicate == row.predicate) ++row.local;
        }
      }
    }
    ++row.global;
    ++row.subject_rank;
    ++row.local;
  }
  std::sort(sorted.begin(), sorted.end(), [](const RefRow& a, const RefRow& b) {
    return a.global < b.global;
  });
  return sorted;
}

inline std::string Dump(const std::vector<RefRow>& rows) {
  std::ostringstream out;
  for (const RefRow& r : rows) {
    out << r.subject << '\t' << PredicateName(r.predicate) << '\t' << r.object
        << '\t' << FormatScore(r.score) << '\t' << r.local << '\t'
        << r.subject_rank << '\t' << r.global << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Query scans.

inline std::vector<Assertion> ScanTopAssertions(const Resource& r,
                                                const std::string& subject,
                                                std::optional<Predicate> p,
                                                std::size_t k) {
  std::vector<Assertion> expected;
  for (const Assertion& a : r.assertions()) {
    if (a.subject == subject && (!p || a.predicate == *p)) {
      expected.push_back(a);
    }
  }
  std::sort(expected.begin(), expected.end(),
            [&](const Assertion& x, const Assertion& y) {
              return p ? x.local_rank < y.local_rank
                       : x.subject_rank < y.subject_rank;
            });
  if (expected.size() > k) expected.resize(k);
  return expected;
}

inline std::vector<ObjectFrequency> ScanAggregate(const Resource& r,
                                                  Predicate p, std::size_t k) {
  std::map<std::string, std::size_t> counts;
  for (const Assertion& a : r.assertions()) {
    if (a.predicate == p) ++counts[NormalizeText(a.object)];
  }
  std::vector<ObjectFrequency> all;
  for (const auto& [o, n] : counts) all.push_back({o, n});
  std::stable_sort(all.begin(), all.end(),
                   [](const ObjectFrequency& a, const ObjectFrequency& b) {
                     return a.frequency > b.frequency;
                   });
  if (all.size() > k) all.resize(k);
  return all;
}

inline std::string PaddedTokens(std::string_view text) {
  std::string out = " ";
  for (const std::string& t : Tokenize(text)) out += t + " ";
  return out;
}

inline std::vector<Assertion> ScanSearch(const Resource& r,
                                         const std::string& needle) {
  std::string probe = PaddedTokens(needle);
  std::vector<Assertion> expected;
  for (const Assertion& a : r.assertions()) {
    if (PaddedTokens(a.subject).find(probe) != std::string::npos ||
        PaddedTokens(a.object).find(probe) != std::string::npos) {
      expected.push_back(a);
    }
  }
  return expected;
}

// Queries over the RandomResource vocabulary: fixed shapes plus
// `random_count` generated ones.
inline std::vector<std::string> OracleQueries(std::mt19937_64& rng,
                                              int random_count) {
  const auto& words = Vocabulary();
  std::vector<std::string> queries = {
      "(?x, CapableOf, eat ?x)",
      "(?x, AtLocation, ?x)",
      "(?x, Causes, big ?x)",
      "(?x, Desires, ?x tree)",
      "COUNT ?c : (?a, CapableOf, ?b) . (?b, CapableOf, ?c)",
      "COUNT ?p : (?a, AtLocation, ?l) . (?l, Causes, ?p)",
      "COUNT ?o : (?a, AtLocation, ?o) . (?b, Desires, ?o)",
      "SELECT ?a : (?a, AtLocation, ?o) . (?o, CapableOf, ?a)",
      "COUNT ?x : (?x, Desires, ?o)",
      "SELECT ?b : (?a, Causes, eat ?b) . (?b, AtLocation, ?l)",
  };
  const char* preds[] = {"AtLocation", "CapableOf", "Causes", "Desires"};
  for (int i = 0; i < random_count; ++i) {
    const std::string& w = words[rng() % words.size()];
    std::string p = preds[rng() % 4];
    switch (i % 5) {
      case 0:
        queries.push_back("(" + w + ", " + p + ", ?o)");
        break;
      case 1:
        queries.push_back("(?s, " + p + ", " + w + ")");
        break;
      case 2:
        queries.push_back("(?x, " + p + ", " + w + " ?x)");
        break;
      case 3:
        queries.push_back("COUNT ?c : (" + w + ", " + p + ", ?b) . (?b, " +
                          preds[rng() % 4] + ", ?c)");
        break;
      default:
        queries.push_back("COUNT ?s : (?s, " + p + ", " + w + " ?x) . (?x, " +
                          preds[rng() % 4] + ", ?y)");
    }
  }
  return queries;
}

// Brute-force conjunctive evaluation over variable maps.
using Env = std::map<std::string, std::string>;

inline bool MatchTerm(const Term& t, const std::string& value, Env& env) {
  if (t.kind == Term::Kind::kConstant) return value == t.value;
  auto it = env.find(t.value);
  if (it != env.end()) return it->second == value;
  env[t.value] = value;
  return true;
}

// Returns (env, folded) pairs for one assertion against one pattern.
inline std::optional<std::pair<Env, bool>> MatchPattern(const Pattern& p,
                                                        const Assertion& a) {
  if (a.predicate != p.predicate) return std::nullopt;
  Env env;
  if (!MatchTerm(p.subject, a.subject, env)) return std::nullopt;
  std::string object = NormalizeText(a.object);
  if (p.object.kind != Term::Kind::kTemplate) {
    if (!MatchTerm(p.object, object, env)) return std::nullopt;
    return std::make_pair(env, false);
  }
  const std::string& pre = p.object.prefix;
  const std::string& suf = p.object.suffix;
  if (object.size() <= pre.size() + suf.size()) return std::nullopt;
  if (object.compare(0, pre.size(), pre) != 0) return std::nullopt;
  if (object.compare(object.size() - suf.size(), suf.size(), suf) != 0) {
    return std::nullopt;
  }
  std::string slot =
      object.substr(pre.size(), object.size() - pre.size() - suf.size());
  auto it = env.find(p.object.value);
  if (it == env.end()) {
    env[p.object.value] = slot;
    return std::make_pair(env, false);
  }
  if (it->second == slot) return std::make_pair(env, false);
  const std::string& s = it->second;
  bool fold = (slot == s + "s") || (slot == s + "es") || (s == slot + "s") ||
              (s == slot + "es");
  if (!fold) return std::nullopt;
  return std::make_pair(env, true);
}

inline std::vector<QueryRow> BruteForceConjunctive(const Resource& r,
                                                   const ConjunctiveQuery& q) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> tally;
  auto add = [&](const Env& env, bool folded) {
    auto& t = tally[env.at(q.projection)];
    ++t.first;
    if (!folded) ++t.second;
  };
  std::vector<std::pair<Env, bool>> first;
  for (const Assertion& a : r.assertions()) {
    if (auto m = MatchPattern(q.patterns[0], a)) first.push_back(*m);
  }
  if (q.patterns.size() == 1) {
    for (const auto& [env, folded] : first) add(env, folded);
  } else {
    std::vector<std::pair<Env, bool>> second;
    for (const Assertion& a : r.assertions()) {
      if (auto m = MatchPattern(q.patterns[1], a)) second.push_back(*m);
    }
    for (const auto& [e1, f1] : first) {
      for (const auto& [e2, f2] : second) {
        bool consistent = true;
        Env merged = e1;
        for (const auto& [k, v] : e2) {
          auto it = merged.find(k);
          if (it != merged.end() && it->second != v) consistent = false;
          merged[k] = v;
        }
        if (consistent) add(merged, f1 || f2);
      }
    }
  }
  std::vector<QueryRow> rows;
  for (const auto& [v, t] : tally) rows.push_back({v, t.first, t.second == 0});
  if (q.aggregate) {
    std::stable_sort(
        rows.begin(), rows.end(),
        [](const QueryRow& a, const QueryRow& b) { return a.count > b.count; });
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Recall.

struct RecallFixture {
  std::shared_ptr<const Resource> resource;
  std::vector<GroundTruthSentence> ground_truth;
  EmbeddingStore store;
};

inline RecallFixture RandomRecallFixture(std::mt19937_64& rng,
                                         std::size_t concepts,
                                         std::size_t per_concept,
                                         std::size_t gt_count,
                                         std::size_t dim) {
  RecallFixture f;
  std::normal_distribution<double> d(0, 1);
  auto vec = [&] {
    std::vector<double> v(dim);
    do {
      for (double& x : v) x = d(rng);
    } while (EuclideanNorm(v) == 0);
    return v;
  };
  std::vector<Assertion> rows;
  for (std::size_t c = 0; c < concepts; ++c) {
    std::size_t n = rng() % (per_concept + 1);
    for (std::size_t i = 0; i < n; ++i) {
      rows.push_back(MakeAssertion(
          "c" + std::to_string(c), kAllPredicates[rng() % kNumPredicates],
          "o" + std::to_string(rng() % 50), -static_cast<double>(rng() % 100)));
    }
  }
  f.resource = TableOf(rows);
  TemplateTable t = TemplateTable::Defaults();
  for (const Assertion& a : f.resource->assertions()) {
    std::string s = Verbalize(a, t);
    if (!f.store.Contains(s)) f.store.Insert({s, vec()});
  }
  std::vector<std::string> keys = f.store.Keys();
  for (std::size_t g = 0; g < gt_count; ++g) {
    std::string s = "ground truth " + std::to_string(g);
    f.ground_truth.push_back({"c" + std::to_string(rng() % (concepts + 2)), s});
    // Some ground-truth sentences reuse an assertion's vector exactly.
    if (!keys.empty() && rng() % 4 == 0) {
      f.store.Insert({s, f.store.Find(keys[rng() % keys.size()])->vector});
    } else {
      f.store.Insert({s, vec()});
    }
  }
  return f;
}

inline std::size_t OracleMatched(const RecallFixture& f, std::uint32_t n,
                                 double t) {
  TemplateTable templates = TemplateTable::Defaults();
  std::size_t matched = 0;
  for (const GroundTruthSentence& gt : f.ground_truth) {
    const auto& g = f.store.Find(gt.sentence)->vector;
    bool hit = false;
    for (const Assertion& a : f.resource->assertions()) {
      if (a.subject != gt.concept_name || a.subject_rank > n) continue;
      const auto& v = f.store.Find(Verbalize(a, templates))->vector;
      double dot = 0, gg = 0, vv = 0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        dot += g[i] * v[i];
        gg += g[i] * g[i];
        vv += v[i] * v[i];
      }
      if (dot / (std::sqrt(gg) * std::sqrt(vv)) >= t - kSimilarityTolerance) {
        hit = true;
      }
    }
    matched += hit;
  }
  return matched;
}

// ---------------------------------------------------------------------------
// Sampling.

// `subjects` subjects with `per_subject` assertions each.
inline std::shared_ptr<const Resource> SaliencyGrid(std::size_t subjects,
                                                    std::size_t per_subject) {
  std::vector<Assertion> rows;
  for (std::size_t s = 0; s < subjects; ++s) {
    for (std::size_t i = 0; i < per_subject; ++i) {
      rows.push_back(MakeAssertion(
          "s" + std::to_string(s), kAllPredicates[i % kNumPredicates],
          "o" + std::to_string(i), -0.01 * static_cast<double>(i + 1)));
    }
  }
  return TableOf(rows);
}

// ---------------------------------------------------------------------------
// Labels: ratings of 3-4 vote positive, 1-2 negative; the larger side wins.

inline Label ExpectedLabel(const std::vector<Rating>& ratings) {
  int pos = 0, neg = 0;
  for (const Rating& r : ratings) {
    if (r && *r >= 3) ++pos;
    if (r && *r <= 2) ++neg;
  }
  return pos > neg   ? Label::kPositive
         : neg > pos ? Label::kNegative
                     : Label::kUnlabelled;
}

inline std::vector<JudgementRow> JudgementRows(
    const AssertionKey& key, const std::vector<Rating>& ratings,
    Dimension dim = Dimension::kTypicality) {
  std::vector<JudgementRow> out;
  for (std::size_t i = 0; i < ratings.size(); ++i) {
    out.push_back({key, "w" + std::to_string(i), dim, ratings[i]});
  }
  return out;
}

}  // namespace cskb::testing

#endif  // CSKB_TESTS_ORACLES_H_
