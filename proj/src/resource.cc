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

#include "cskb/resource.h"

#include "cskb/error.h"
#include "cskb/text.h"

namespace cskb {

Resource::Resource(ResourceId id, std::vector<Assertion> ranked,
                   ResourceMetadata metadata)
    : id_(std::make_shared<const ResourceId>(std::move(id))),
      assertions_(std::move(ranked)),
      metadata_(std::move(metadata)) {
  if (id_->name.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "resource name is empty");
  }
  normalized_objects_.reserve(assertions_.size());
  for (Assertion& a : assertions_) {
    a.resource = id_;
    normalized_objects_.push_back(NormalizeText(a.object));
  }
  index_ = IndexSet::Build(assertions_);
}

void Catalog::Add(std::shared_ptr<const Resource> resource) {
  if (Find(resource->name()) != nullptr) {
    throw Error(ErrorCode::kInvalidArgument,
                "duplicate resource name '" + resource->name() + "'");
  }
  resources_.push_back(std::move(resource));
}

const Resource* Catalog::Find(std::string_view name) const {
  for (const auto& r : resources_) {
    if (r->name() == name) return r.get();
  }
  return nullptr;
}

const Resource& Catalog::Get(std::string_view name) const {
  if (const Resource* r = Find(name)) return *r;
  throw Error(ErrorCode::kUnknownResource,
              "unknown resource '" + std::string(name) + "'");
}

}  // namespace cskb
