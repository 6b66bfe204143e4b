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

#include "cskb/embedding_client.h"

#include <httplib.h>

#include <nlohmann/json.hpp>

#include "cskb/error.h"

namespace cskb {

EmbeddingClient::EmbeddingClient(std::string base_url, std::size_t batch_size)
    : base_url_(std::move(base_url)), batch_size_(batch_size) {
  if (batch_size_ == 0) {
    throw Error(ErrorCode::kInvalidArgument, "batch_size must be >= 1");
  }
}

std::vector<std::vector<double>> EmbeddingClient::Embed(
    std::span<const std::string> sentences) const {
  httplib::Client client(base_url_);
  client.set_read_timeout(120, 0);
  std::vector<std::vector<double>> vectors;
  vectors.reserve(sentences.size());
  for (std::size_t start = 0; start < sentences.size(); start += batch_size_) {
    auto batch = sentences.subspan(
        start, std::min(batch_size_, sentences.size() - start));
    nlohmann::json body;
    body["sentences"] = std::vector<std::string>(batch.begin(), batch.end());
    auto res = client.Post("/embed", body.dump(), "application/json");
    if (!res) {
      throw Error(ErrorCode::kIoFailure,
                  "embedding service " + base_url_ +
                      " unreachable: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
      throw Error(ErrorCode::kIoFailure, "embedding service returned HTTP " +
                                             std::to_string(res->status));
    }
    auto j = nlohmann::json::parse(res->body, nullptr, false);
    if (j.is_discarded() || !j.contains("vectors") ||
        !j["vectors"].is_array() || j["vectors"].size() != batch.size()) {
      throw Error(ErrorCode::kParseError,
                  "embedding service response lacks one vector per sentence");
    }
    for (const auto& v : j["vectors"]) {
      if (!v.is_array()) {
        throw Error(ErrorCode::kParseError, "vector is not an array");
      }
      std::vector<double> vec;
      vec.reserve(v.size());
      for (const auto& x : v) {
        if (!x.is_number()) {
          throw Error(ErrorCode::kParseError, "non-numeric vector component");
        }
        vec.push_back(x.get<double>());
      }
      vectors.push_back(std::move(vec));
    }
  }
  return vectors;
}

std::size_t FillMissingEmbeddings(EmbeddingStore& store,
                                  std::span<const std::string> sentences,
                                  const EmbeddingClient& client) {
  std::vector<std::string> missing;
  for (const std::string& s : sentences) {
    if (!store.Contains(s)) missing.push_back(s);
  }
  auto vectors = client.Embed(missing);
  for (std::size_t i = 0; i < missing.size(); ++i) {
    store.Insert({missing[i], std::move(vectors[i])});
  }
  return missing.size();
}

}  // namespace cskb
