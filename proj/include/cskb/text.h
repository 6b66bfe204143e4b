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

#ifndef CSKB_TEXT_H_
#define CSKB_TEXT_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cskb {

// Case-folds ASCII letters, trims, collapses internal whitespace runs to a
// single space and strips trailing sentence periods. Bytes >= 0x80 (UTF-8
// continuation and lead bytes) pass through unchanged.
std::string NormalizeText(std::string_view text);

// Trims and collapses whitespace runs (including tabs and newlines) but keeps
// the original casing and punctuation.
std::string CleanSurface(std::string_view text);

// Splits normalized text into tokens. Separators are whitespace and ASCII
// punctuation other than apostrophe and hyphen.
std::vector<std::string> Tokenize(std::string_view text);

// True when `needle` occurs as a run of consecutive tokens in `haystack`.
// An empty needle never matches.
bool ContainsTokenRun(std::span<const std::string> haystack,
                      std::span<const std::string> needle);

// Removes a leading UTF-8 byte-order mark, if any.
std::string_view StripBom(std::string_view line);

// Splits on a single-character delimiter, keeping empty fields.
std::vector<std::string_view> SplitFields(std::string_view line, char delim);

// Removes a trailing '\r' (CRLF input).
std::string_view StripCarriageReturn(std::string_view line);

bool IsBlank(std::string_view line);

}  // namespace cskb

#endif  // CSKB_TEXT_H_
