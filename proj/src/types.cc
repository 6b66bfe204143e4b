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

#include "cskb/types.h"

#include <functional>

#include "cskb/error.h"
#include "cskb/text.h"

namespace cskb {

std::string_view ResourceKindName(ResourceKind kind) {
  return kind == ResourceKind::kTraining ? "training" : "generated";
}

ResourceKind ParseResourceKind(std::string_view text) {
  if (text == "training") return ResourceKind::kTraining;
  if (text == "generated") return ResourceKind::kGenerated;
  throw Error(ErrorCode::kInvalidArgument,
              "resource kind must be 'training' or 'generated', got '" +
                  std::string(text) + "'");
}

ResourceId ResourceId::Make(std::string name, ResourceKind kind) {
  if (name.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "resource name is empty");
  }
  return ResourceId{std::move(name), kind};
}

AssertionKey AssertionKey::Of(const Assertion& a) {
  return AssertionKey{a.subject, a.predicate, NormalizeText(a.object)};
}

std::size_t AssertionKeyHash::operator()(const AssertionKey& key) const {
  std::size_t h = std::hash<std::string>{}(key.subject);
  h ^= std::hash<std::string>{}(key.object) + 0x9e3779b97f4a7c15ULL + (h << 6) +
       (h >> 2);
  h ^= PredicateIndex(key.predicate) * 0x100000001b3ULL;
  return h;
}

std::string_view DimensionName(Dimension d) {
  return d == Dimension::kTypicality ? "typicality" : "saliency";
}

Dimension ParseDimension(std::string_view text) {
  if (text == "typicality") return Dimension::kTypicality;
  if (text == "saliency") return Dimension::kSaliency;
  throw Error(ErrorCode::kInvalidArgument,
              "dimension must be 'typicality' or 'saliency', got '" +
                  std::string(text) + "'");
}

}  // namespace cskb
