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

#ifndef CSKB_EMBEDDING_CLIENT_H_
#define CSKB_EMBEDDING_CLIENT_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cskb/embedding_store.h"

namespace cskb {

// Client for an external sentence-embedding service:
//   POST {base_url}/embed  {"sentences": [...]}  ->  {"vectors": [[...], ...]}
class EmbeddingClient {
 public:
  // `base_url` like "http://localhost:8000".
  explicit EmbeddingClient(std::string base_url, std::size_t batch_size = 256);

  // One vector per sentence, in order. Throws kIoFailure on transport or
  // HTTP errors and kParseError on a malformed response.
  std::vector<std::vector<double>> Embed(
      std::span<const std::string> sentences) const;

 private:
  std::string base_url_;
  std::size_t batch_size_;
};

// Embeds every sentence absent from `store` and inserts the result. Returns
// the number of sentences fetched.
std::size_t FillMissingEmbeddings(EmbeddingStore& store,
                                  std::span<const std::string> sentences,
                                  const EmbeddingClient& client);

}  // namespace cskb

#endif  // CSKB_EMBEDDING_CLIENT_H_
