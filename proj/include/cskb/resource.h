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

#ifndef CSKB_RESOURCE_H_
#define CSKB_RESOURCE_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cskb/index.h"
#include "cskb/types.h"

namespace cskb {

// Provenance counts recorded by the pipeline and carried in snapshots and
// sidecar files.
struct ResourceMetadata {
  // nullopt when no per-pair truncation was applied (training tables).
  std::optional<std::uint32_t> top_k_per_pair;
  bool drop_training_duplicates = false;
  std::string stage_order = "score,normalize,deduplicate,top_k,rank";
  std::size_t input_records = 0;
  std::size_t rejected_records = 0;
  std::size_t after_deduplicate = 0;
  std::size_t training_duplicates_dropped = 0;
  std::size_t after_top_k = 0;

  friend bool operator==(const ResourceMetadata&,
                         const ResourceMetadata&) = default;
};

// A finished, ranked, indexed knowledge base. Immutable after construction.
class Resource {
 public:
  // `ranked` must be in global-rank order with ranks assigned and every
  // assertion's `resource` pointing at `id` (the constructor rebinds them).
  Resource(ResourceId id, std::vector<Assertion> ranked,
           ResourceMetadata metadata = {});

  Resource(const Resource&) = delete;
  Resource& operator=(const Resource&) = delete;

  const ResourceId& id() const { return *id_; }
  const std::string& name() const { return id_->name; }
  std::shared_ptr<const ResourceId> id_ptr() const { return id_; }
  std::span<const Assertion> assertions() const { return assertions_; }
  std::size_t size() const { return assertions_.size(); }
  const IndexSet& index() const { return index_; }
  const ResourceMetadata& metadata() const { return metadata_; }

  const Assertion& at(IndexSet::Id id) const { return assertions_[id]; }
  // NormalizeText(at(id).object), precomputed.
  const std::string& normalized_object(IndexSet::Id id) const {
    return normalized_objects_[id];
  }

 private:
  std::shared_ptr<const ResourceId> id_;
  std::vector<Assertion> assertions_;
  ResourceMetadata metadata_;
  std::vector<std::string> normalized_objects_;
  IndexSet index_;
};

// Registry of named resources, in registration order.
class Catalog {
 public:
  // Throws kInvalidArgument when the name is already registered.
  void Add(std::shared_ptr<const Resource> resource);

  // Throws kUnknownResource.
  const Resource& Get(std::string_view name) const;
  const Resource* Find(std::string_view name) const;

  const std::vector<std::shared_ptr<const Resource>>& resources() const {
    return resources_;
  }
  std::size_t size() const { return resources_.size(); }
  bool empty() const { return resources_.empty(); }

 private:
  std::vector<std::shared_ptr<const Resource>> resources_;
};

}  // namespace cskb

#endif  // CSKB_RESOURCE_H_
