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

#ifndef CSKB_EMBEDDING_STORE_H_
#define CSKB_EMBEDDING_STORE_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cskb/types.h"

namespace cskb {

// Sentence text -> dense vector, all of one dimension. Vectors are kept as
// given; the Euclidean norm is cached alongside for cosine similarity.
class EmbeddingStore {
 public:
  struct Entry {
    std::vector<double> vector;
    double norm = 0;
  };

  EmbeddingStore() = default;

  // Inserts or replaces `embedding`. Returns true when a previous entry with
  // the same key was replaced. Throws kDimensionMismatch when the dimension
  // differs from the established one and kInvalidArgument for a zero vector
  // or an empty vector.
  bool Insert(SentenceEmbedding embedding);

  const Entry* Find(std::string_view key) const;
  bool Contains(std::string_view key) const { return Find(key) != nullptr; }

  // 0 until the first insertion.
  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Sorted keys, for deterministic output.
  std::vector<std::string> Keys() const;

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::size_t dimension_ = 0;
  std::unordered_map<std::string, Entry, StringHash, std::equal_to<>> entries_;
};

double EuclideanNorm(std::span<const double> v);

}  // namespace cskb

#endif  // CSKB_EMBEDDING_STORE_H_
