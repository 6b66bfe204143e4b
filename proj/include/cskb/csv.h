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

#ifndef CSKB_CSV_H_
#define CSKB_CSV_H_

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cskb {

// RFC 4180 style: fields containing a comma, quote, CR or LF are quoted and
// inner quotes doubled. Rows end with LF.
void WriteCsvRow(std::ostream& out, std::span<const std::string> fields);

struct CsvRecord {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

// Parses quoted fields (including embedded newlines). Skips blank records.
// Throws kParseError on an unterminated quote.
std::vector<CsvRecord> ReadCsv(std::istream& in);

}  // namespace cskb

#endif  // CSKB_CSV_H_
