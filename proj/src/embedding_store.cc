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

#include "cskb/embedding_store.h"

#include <algorithm>
#include <cmath>

#include "cskb/error.h"

namespace cskb {

double EuclideanNorm(std::span<const double> v) {
  double sum = 0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

bool EmbeddingStore::Insert(SentenceEmbedding embedding) {
  if (embedding.vector.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "empty embedding vector for '" + embedding.key + "'");
  }
  if (dimension_ != 0 && embedding.vector.size() != dimension_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "embedding for '" + embedding.key + "' has dimension " +
                    std::to_string(embedding.vector.size()) + ", expected " +
                    std::to_string(dimension_));
  }
  double norm = EuclideanNorm(embedding.vector);
  if (!(norm > 0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::kInvalidArgument,
                "zero or non-finite embedding for '" + embedding.key + "'");
  }
  dimension_ = embedding.vector.size();
  auto [it, inserted] = entries_.insert_or_assign(
      std::move(embedding.key), Entry{std::move(embedding.vector), norm});
  return !inserted;
}

const EmbeddingStore::Entry* EmbeddingStore::Find(std::string_view key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::string> EmbeddingStore::Keys() const {
  std::vector<std::string> keys;
  keys.reserve(entries_.size());
  for (const auto& [key, entry] : entries_) keys.push_back(key);
  std::sort(keys.begin(), keys.end());
  return keys;
}

}  // namespace cskb
