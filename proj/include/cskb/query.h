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

#ifndef CSKB_QUERY_H_
#define CSKB_QUERY_H_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cskb/predicate.h"
#include "cskb/resource.h"
#include "cskb/types.h"

namespace cskb {

// A pattern position: a constant, a variable, or (object only) constant text
// with one embedded variable such as "eat ?x".
struct Term {
  enum class Kind { kConstant, kVariable, kTemplate };

  Kind kind = Kind::kConstant;
  // Normalized constant text, or the variable name (without '?').
  std::string value;
  // Template only: normalized text before and after the variable.
  std::string prefix;
  std::string suffix;

  static Term Constant(std::string_view text);
  static Term Variable(std::string name);
  static Term Template(std::string prefix, std::string name,
                       std::string suffix);

  bool has_variable() const { return kind != Kind::kConstant; }
  std::string ToString() const;

  friend bool operator==(const Term&, const Term&) = default;
};

struct Pattern {
  Term subject;
  Predicate predicate = Predicate::kAtLocation;
  Term object;

  std::string ToString() const;
  friend bool operator==(const Pattern&, const Pattern&) = default;
};

struct ConjunctiveQuery {
  std::vector<Pattern> patterns;
  std::string projection;
  bool aggregate = false;

  // Throws kMalformedQuery when: not 1-2 patterns; a pattern without a
  // variable; a template in subject position; the projection not bound by
  // any pattern; two patterns not sharing a variable.
  void Validate() const;
  std::string ToString() const;
};

// Text syntax, e.g.
//   (?x, CapableOf, eat ?x)
//   COUNT ?c : (?a, HasSubevent, ?b) . (?b, HasSubevent, ?c)
//   SELECT ?p : (?a, AtLocation, ?l) . (?l, HasA, ?p)
// Without a SELECT/COUNT head the projection is the first variable
// mentioned. Throws kMalformedQuery with the offending column.
ConjunctiveQuery ParseQuery(std::string_view text);

// Parses a single pattern field: "?x", constant text, or (objects only) a
// template such as "eat ?x".
Term ParseTerm(std::string_view text, bool allow_template);

// One projected value of a conjunctive query. `count` is the number of
// solutions (joined assertion combinations) producing the value.
// `plural_folded` is set when every solution needed the plural fold on a
// self-referencing template.
struct QueryRow {
  std::string value;
  std::size_t count = 0;
  bool plural_folded = false;

  friend bool operator==(const QueryRow&, const QueryRow&) = default;
};

// Rows ordered by value when !aggregate, by count descending then value
// when aggregate.
std::vector<QueryRow> EvaluateConjunctive(const Resource& resource,
                                          const ConjunctiveQuery& query);

// Top-k of a subject (by subject_rank) or of a pair (by local_rank). The
// subject is normalized before lookup. Throws kInvalidArgument when k == 0.
std::vector<Assertion> TopAssertions(const Resource& resource,
                                     std::string_view subject,
                                     std::optional<Predicate> predicate,
                                     std::size_t k);

struct ObjectFrequency {
  std::string object;
  std::size_t frequency = 0;

  friend bool operator==(const ObjectFrequency&,
                         const ObjectFrequency&) = default;
};

// Most common normalized objects of a predicate; ties bytewise ascending.
std::vector<ObjectFrequency> AggregateObjects(const Resource& resource,
                                              Predicate predicate,
                                              std::size_t k);

// Assertions whose subject or object contains the needle's tokens as a
// consecutive run, ordered by (resource position in `resources`,
// global_rank). Throws kInvalidArgument when the needle has no tokens.
std::vector<Assertion> SearchText(std::span<const Resource* const> resources,
                                  std::string_view needle);

struct PredicateSlot {
  Predicate predicate = Predicate::kAtLocation;
  std::vector<Assertion> top;
  std::size_t total = 0;
};

struct ResourceSummary {
  std::string resource;
  std::array<PredicateSlot, kNumPredicates> slots;
};

struct SubjectSummary {
  std::string subject;
  std::vector<ResourceSummary> resources;
};

// Per resource and per predicate: the top `k` assertions and the pair's
// total count. All 13 predicates are present, empty or not.
SubjectSummary SummarizeSubject(std::string_view subject,
                                std::span<const Resource* const> resources,
                                std::size_t k = 10);

// True when `a` and `b` are equal or differ by a trailing "s"/"es" on one
// side.
bool PluralFoldEqual(std::string_view a, std::string_view b);

}  // namespace cskb

#endif  // CSKB_QUERY_H_
