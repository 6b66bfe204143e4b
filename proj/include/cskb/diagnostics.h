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

#ifndef CSKB_DIAGNOSTICS_H_
#define CSKB_DIAGNOSTICS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cskb/predicate.h"
#include "cskb/resource.h"
#include "cskb/types.h"

namespace cskb {

struct CopyRate {
  std::size_t copies = 0;
  std::size_t total = 0;
  double rate = 0;
  // Set for a subject with no assertions; `rate` is then reported as 0.
  bool undefined = false;
};

// Counts the subject's objects containing the subject's tokens as a
// consecutive run.
CopyRate SubjectCopyRate(const Resource& resource, std::string_view subject);

// Number lexicon: digit strings 0-9999, the words one..twenty and "dozen".
std::optional<int> NumberValue(std::string_view token);

struct QuantityGroup {
  std::string subject;
  Predicate predicate = Predicate::kAtLocation;
  // Normalized object tokens with number tokens replaced by "#".
  std::string masked;
  // Ordered by local_rank.
  std::vector<Assertion> members;
  // Distinct number-value sequences among the members.
  std::size_t distinct_values = 0;
};

// Objects of one pair that coincide once number tokens are masked. A group
// needs at least two members; digit and word forms of a number mask alike.
std::vector<QuantityGroup> QuantityConflicts(const Resource& resource,
                                             std::string_view subject,
                                             Predicate predicate);

struct RedundantPair {
  Assertion first;  // better local rank
  Assertion second;
};

// Pairs in the same (subject, predicate) whose normalized objects differ
// only by a plural suffix on the final word: the longer final word (more
// than 3 characters) equals the shorter plus "s" (not after another "s") or
// plus "es". Each pair is reported once.
std::vector<RedundantPair> PluralRedundancy(
    const Resource& resource, std::optional<std::string_view> subject,
    std::optional<Predicate> predicate);

struct ResourceStats {
  std::size_t total = 0;
  std::array<std::size_t, kNumPredicates> per_predicate{};
  std::size_t subjects = 0;
  std::size_t pairs = 0;
  double mean_objects_per_pair = 0;
};

// Exact counts, optionally restricted to subject_rank <= top_n_per_subject.
ResourceStats ComputeResourceStats(
    const Resource& resource,
    std::optional<std::uint32_t> top_n_per_subject = std::nullopt);

struct SubjectCopy {
  std::string subject;
  CopyRate rate;
};

struct DiagnosticsReport {
  std::string resource;
  ResourceStats stats;
  std::vector<SubjectCopy> copy_rates;  // sorted by subject
  std::vector<QuantityGroup> quantity_groups;
  std::vector<RedundantPair> plural_pairs;
};

// Runs every detector over the whole resource, or over one subject.
DiagnosticsReport BuildDiagnosticsReport(
    const Resource& resource,
    std::optional<std::string_view> subject = std::nullopt);

std::string DiagnosticsReportJson(const DiagnosticsReport& report);
std::string DiagnosticsReportText(const DiagnosticsReport& report);

}  // namespace cskb

#endif  // CSKB_DIAGNOSTICS_H_
