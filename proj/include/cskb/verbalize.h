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

#ifndef CSKB_VERBALIZE_H_
#define CSKB_VERBALIZE_H_

#include <array>
#include <istream>
#include <string>
#include <string_view>

#include "cskb/predicate.h"
#include "cskb/types.h"

namespace cskb {

// One sentence template per predicate, each holding "{s}" and "{o}" exactly
// once.
class TemplateTable {
 public:
  // The built-in wording.
  static TemplateTable Defaults();

  // Replaces one template. Throws kInvalidArgument unless the template holds
  // each placeholder exactly once.
  void Set(Predicate predicate, std::string text);
  const std::string& Get(Predicate predicate) const;

  // Applies a JSON object {"AtLocation": "...", ...} on top of this table.
  // Unknown predicate names throw kUnknownPredicate; malformed JSON throws
  // kParseError.
  void ApplyOverrides(std::string_view json_text);

 private:
  TemplateTable() = default;
  std::array<std::string, kNumPredicates> templates_;
};

// Literal placeholder substitution followed by whitespace cleanup. The
// object is substituted verbatim, so a "{s}" inside it is not expanded.
std::string Verbalize(std::string_view subject, Predicate predicate,
                      std::string_view object, const TemplateTable& table);

inline std::string Verbalize(const Assertion& a, const TemplateTable& table) {
  return Verbalize(a.subject, a.predicate, a.object, table);
}

}  // namespace cskb

#endif  // CSKB_VERBALIZE_H_
