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

#include "cskb/error.h"

namespace cskb {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownPredicate:
      return "unknown_predicate";
    case ErrorCode::kEmptySequence:
      return "empty_sequence";
    case ErrorCode::kInvalidArgument:
      return "invalid_argument";
    case ErrorCode::kUnknownResource:
      return "unknown_resource";
    case ErrorCode::kUnknownFamily:
      return "unknown_family";
    case ErrorCode::kMalformedQuery:
      return "malformed_query";
    case ErrorCode::kDimensionMismatch:
      return "dimension_mismatch";
    case ErrorCode::kMissingEmbedding:
      return "missing_embedding";
    case ErrorCode::kPoolTooSmall:
      return "pool_too_small";
    case ErrorCode::kEmptySample:
      return "empty_sample";
    case ErrorCode::kParseError:
      return "parse_error";
    case ErrorCode::kChecksumMismatch:
      return "checksum_mismatch";
    case ErrorCode::kVersionMismatch:
      return "version_mismatch";
    case ErrorCode::kIoFailure:
      return "io_failure";
    case ErrorCode::kNotFound:
      return "not_found";
  }
  return "unknown";
}

}  // namespace cskb
