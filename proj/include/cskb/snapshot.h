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

#ifndef CSKB_SNAPSHOT_H_
#define CSKB_SNAPSHOT_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>

#include "cskb/resource.h"

namespace cskb {

// Single-file binary snapshot of a catalog:
//
//   "CSKBSNAP" | u32 version | u32 reserved | u32 resource count
//   per resource:
//     str name | u8 kind | str metadata JSON
//     u32 n strings | u32 offsets[n + 1] | bytes      (sorted string table)
//     u32 n rows | rows of 32 bytes:
//       u32 subject sid | u32 object sid | u8 predicate | u8 has score |
//       u16 0 | f64 score | u32 local | u32 subject | u32 global rank
//   u32 CRC-32 of everything above | "CSKBEND!"
//
// Integers are little-endian; str is u32 length + bytes. Rows are stored in
// global-rank order; indexes are rebuilt on load.
inline constexpr std::uint32_t kSnapshotVersion = 1;

// Writes atomically (temp file + rename). Returns the CRC-32. Throws
// kIoFailure.
std::uint32_t SaveSnapshot(const Catalog& catalog,
                           const std::filesystem::path& path);

// Verifies the checksum before anything else, then the version. Throws
// kChecksumMismatch (truncation or corruption), kVersionMismatch (naming
// both versions) or kIoFailure.
Catalog LoadSnapshot(const std::filesystem::path& path);

std::uint32_t Crc32(std::span<const std::byte> bytes);

}  // namespace cskb

#endif  // CSKB_SNAPSHOT_H_
