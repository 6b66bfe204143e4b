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

#include "cskb/snapshot.h"

#include <fcntl.h>
#include <sys/mman.h>
#include <sys/stat.h>
#include <unistd.h>
#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cskb/error.h"

namespace cskb {
namespace {

static_assert(std::endian::native == std::endian::little,
              "snapshot encoding assumes a little-endian host");

constexpr std::string_view kMagic = "CSKBSNAP";
constexpr std::string_view kFooter = "CSKBEND!";
constexpr std::size_t kRowBytes = 32;
constexpr std::size_t kTrailerBytes = 4 + 8;

class Writer {
 public:
  template <typename T>
  void Put(T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    const auto* p = reinterpret_cast<const char*>(&value);
    buf_.append(p, sizeof(T));
  }
  void PutBytes(std::string_view s) { buf_.append(s); }
  void PutString(std::string_view s) {
    Put(static_cast<std::uint32_t>(s.size()));
    PutBytes(s);
  }
  std::string& buffer() { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}

  template <typename T>
  T Get() {
    Need(sizeof(T));
    T value;
    std::memcpy(&value, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  std::string_view GetBytes(std::size_t n) {
    Need(n);
    std::string_view s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::string_view GetString() { return GetBytes(Get<std::uint32_t>()); }
  std::size_t position() const { return pos_; }

 private:
  void Need(std::size_t n) const {
    if (data_.size() - pos_ < n) {
      throw Error(ErrorCode::kChecksumMismatch,
                  "snapshot payload ends prematurely");
    }
  }

  std::string_view data_;
  std::size_t pos_ = 0;
};

// Read-only mapping of a whole file.
class MappedFile {
 public:
  explicit MappedFile(const std::filesystem::path& path) {
    int fd = ::open(path.c_str(), O_RDONLY);
    if (fd < 0) {
      throw Error(ErrorCode::kIoFailure, "cannot open snapshot " +
                                             path.string() + ": " +
                                             std::strerror(errno));
    }
    struct stat st;
    if (::fstat(fd, &st) != 0) {
      ::close(fd);
      throw Error(ErrorCode::kIoFailure, "cannot stat " + path.string());
    }
    size_ = static_cast<std::size_t>(st.st_size);
    if (size_ > 0) {
      void* p = ::mmap(nullptr, size_, PROT_READ, MAP_PRIVATE, fd, 0);
      if (p == MAP_FAILED) {
        ::close(fd);
        throw Error(ErrorCode::kIoFailure, "cannot map " + path.string());
      }
      data_ = static_cast<const char*>(p);
    }
    ::close(fd);
  }
  ~MappedFile() {
    if (data_ != nullptr) ::munmap(const_cast<char*>(data_), size_);
  }
  MappedFile(const MappedFile&) = delete;
  MappedFile& operator=(const MappedFile&) = delete;

  std::string_view view() const { return {data_, size_}; }

 private:
  const char* data_ = nullptr;
  std::size_t size_ = 0;
};

std::string MetadataToJson(const ResourceMetadata& m) {
  nlohmann::json j;
  j["top_k_per_pair"] = m.top_k_per_pair ? nlohmann::json(*m.top_k_per_pair)
                                         : nlohmann::json(nullptr);
  j["drop_training_duplicates"] = m.drop_training_duplicates;
  j["stage_order"] = m.stage_order;
  j["input_records"] = m.input_records;
  j["rejected_records"] = m.rejected_records;
  j["after_deduplicate"] = m.after_deduplicate;
  j["training_duplicates_dropped"] = m.training_duplicates_dropped;
  j["after_top_k"] = m.after_top_k;
  return j.dump();
}

ResourceMetadata MetadataFromJson(std::string_view text) {
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::kParseError, "snapshot metadata is not JSON");
  }
  ResourceMetadata m;
  if (!j["top_k_per_pair"].is_null()) {
    m.top_k_per_pair = j["top_k_per_pair"].get<std::uint32_t>();
  }
  m.drop_training_duplicates = j.value("drop_training_duplicates", false);
  m.stage_order = j.value("stage_order", std::string());
  m.input_records = j.value("input_records", std::size_t{0});
  m.rejected_records = j.value("rejected_records", std::size_t{0});
  m.after_deduplicate = j.value("after_deduplicate", std::size_t{0});
  m.training_duplicates_dropped =
      j.value("training_duplicates_dropped", std::size_t{0});
  m.after_top_k = j.value("after_top_k", std::size_t{0});
  return m;
}

void EncodeResource(const Resource& resource, Writer& w) {
  w.PutString(resource.name());
  w.Put(static_cast<std::uint8_t>(resource.id().kind));
  w.PutString(MetadataToJson(resource.metadata()));

  std::vector<std::string_view> strings;
  strings.reserve(resource.size() * 2);
  for (const Assertion& a : resource.assertions()) {
    strings.push_back(a.subject);
    strings.push_back(a.object);
  }
  std::sort(strings.begin(), strings.end());
  strings.erase(std::unique(strings.begin(), strings.end()), strings.end());
  std::unordered_map<std::string_view, std::uint32_t> sid;
  sid.reserve(strings.size());
  w.Put(static_cast<std::uint32_t>(strings.size()));
  std::uint32_t offset = 0;
  w.Put(offset);
  for (std::size_t i = 0; i < strings.size(); ++i) {
    sid.emplace(strings[i], static_cast<std::uint32_t>(i));
    offset += static_cast<std::uint32_t>(strings[i].size());
    w.Put(offset);
  }
  for (std::string_view s : strings) w.PutBytes(s);

  w.Put(static_cast<std::uint32_t>(resource.size()));
  for (const Assertion& a : resource.assertions()) {
    w.Put(sid.at(a.subject));
    w.Put(sid.at(a.object));
    w.Put(static_cast<std::uint8_t>(a.predicate));
    w.Put(static_cast<std::uint8_t>(a.score.has_value()));
    w.Put(std::uint16_t{0});
    w.Put(a.score.value_or(0.0));
    w.Put(a.local_rank);
    w.Put(a.subject_rank);
    w.Put(a.global_rank);
  }
}

std::shared_ptr<const Resource> DecodeResource(Reader& r) {
  std::string name(r.GetString());
  auto kind_byte = r.Get<std::uint8_t>();
  if (kind_byte > 1) throw Error(ErrorCode::kParseError, "bad resource kind");
  ResourceMetadata meta = MetadataFromJson(r.GetString());

  auto n_strings = r.Get<std::uint32_t>();
  std::string_view offsets_raw =
      r.GetBytes((static_cast<std::size_t>(n_strings) + 1) * 4);
  std::vector<std::uint32_t> offsets(n_strings + 1);
  std::memcpy(offsets.data(), offsets_raw.data(), offsets_raw.size());
  std::string_view blob = r.GetBytes(offsets.back());
  auto string_at = [&](std::uint32_t id) {
    if (id >= n_strings || offsets[id] > offsets[id + 1]) {
      throw Error(ErrorCode::kParseError, "bad string id in snapshot");
    }
    return blob.substr(offsets[id], offsets[id + 1] - offsets[id]);
  };

  auto n_rows = r.Get<std::uint32_t>();
  std::string_view rows =
      r.GetBytes(static_cast<std::size_t>(n_rows) * kRowBytes);
  std::vector<Assertion> assertions(n_rows);
  for (std::size_t i = 0; i < n_rows; ++i) {
    Reader row(rows.substr(i * kRowBytes, kRowBytes));
    Assertion& a = assertions[i];
    a.subject = string_at(row.Get<std::uint32_t>());
    a.object = string_at(row.Get<std::uint32_t>());
    auto predicate = PredicateFromIndex(row.Get<std::uint8_t>());
    if (!predicate) throw Error(ErrorCode::kParseError, "bad predicate byte");
    a.predicate = *predicate;
    bool has_score = row.Get<std::uint8_t>() != 0;
    row.Get<std::uint16_t>();
    double score = row.Get<double>();
    if (has_score) a.score = score;
    a.local_rank = row.Get<std::uint32_t>();
    a.subject_rank = row.Get<std::uint32_t>();
    a.global_rank = row.Get<std::uint32_t>();
  }
  return std::make_shared<const Resource>(
      ResourceId::Make(std::move(name), static_cast<ResourceKind>(kind_byte)),
      std::move(assertions), std::move(meta));
}

}  // namespace

std::uint32_t Crc32(std::span<const std::byte> bytes) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  const auto* p = reinterpret_cast<const Bytef*>(bytes.data());
  std::size_t left = bytes.size();
  while (left > 0) {
    auto chunk = static_cast<uInt>(std::min<std::size_t>(left, 1u << 30));
    crc = ::crc32(crc, p, chunk);
    p += chunk;
    left -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

std::uint32_t SaveSnapshot(const Catalog& catalog,
                           const std::filesystem::path& path) {
  Writer w;
  w.PutBytes(kMagic);
  w.Put(kSnapshotVersion);
  w.Put(std::uint32_t{0});
  w.Put(static_cast<std::uint32_t>(catalog.size()));
  for (const auto& resource : catalog.resources()) EncodeResource(*resource, w);
  std::string& buf = w.buffer();
  std::uint32_t crc = Crc32(std::as_bytes(std::span(buf.data(), buf.size())));
  w.Put(crc);
  w.PutBytes(kFooter);

  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorCode::kIoFailure, "cannot write " + tmp.string());
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out.flush()) {
      throw Error(ErrorCode::kIoFailure, "write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw Error(ErrorCode::kIoFailure,
                "cannot rename " + tmp.string() + ": " + ec.message());
  }
  return crc;
}

Catalog LoadSnapshot(const std::filesystem::path& path) {
  MappedFile file(path);
  std::string_view data = file.view();
  const std::size_t header = kMagic.size() + 12;
  if (data.size() < header + kTrailerBytes) {
    throw Error(ErrorCode::kChecksumMismatch,
                "snapshot " + path.string() + " is truncated");
  }
  std::string_view body = data.substr(0, data.size() - kTrailerBytes);
  std::uint32_t stored;
  std::memcpy(&stored, data.data() + body.size(), 4);
  std::uint32_t actual =
      Crc32(std::as_bytes(std::span(body.data(), body.size())));
  if (stored != actual || data.substr(data.size() - 8) != kFooter) {
    throw Error(ErrorCode::kChecksumMismatch,
                "snapshot " + path.string() + " fails its checksum");
  }
  Reader r(body);
  if (r.GetBytes(kMagic.size()) != kMagic) {
    throw Error(ErrorCode::kChecksumMismatch,
                path.string() + " is not a snapshot file");
  }
  auto version = r.Get<std::uint32_t>();
  if (version != kSnapshotVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "snapshot " + path.string() + " has format version " +
                    std::to_string(version) + ", this build reads version " +
                    std::to_string(kSnapshotVersion));
  }
  r.Get<std::uint32_t>();
  auto count = r.Get<std::uint32_t>();
  Catalog catalog;
  for (std::uint32_t i = 0; i < count; ++i) catalog.Add(DecodeResource(r));
  if (r.position() != body.size()) {
    throw Error(ErrorCode::kParseError, "trailing bytes in snapshot payload");
  }
  return catalog;
}

}  // namespace cskb
