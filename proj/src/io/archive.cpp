// io/archive.cpp

// Copyright 2026  tfgen authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "tfg/io/archive.hpp"

#include <zlib.h>

#include <cstdio>
#include <cstring>

#include "tfg/core/common.hpp"

namespace tfg {

namespace {

constexpr char kMagic[4] = {'T', 'F', 'A', 'R'};
constexpr char kFooter[4] = {'R', 'A', 'F', 'T'};
constexpr uint32_t kVersion = 1;

void fwrite_all(FILE *f, const void *p, size_t n, const std::string &path) {
  TFG_CHECK(std::fwrite(p, 1, n, f) == n, "short write: ", path);
}
void fread_all(FILE *f, void *p, size_t n, const std::string &path) {
  TFG_CHECK(std::fread(p, 1, n, f) == n, "short read: ", path);
}
void wr_u32(FILE *f, uint32_t v, const std::string &path) {
  uint8_t b[4] = {uint8_t(v), uint8_t(v >> 8), uint8_t(v >> 16), uint8_t(v >> 24)};
  fwrite_all(f, b, 4, path);
}
void wr_u64(FILE *f, uint64_t v, const std::string &path) {
  uint8_t b[8];
  for (int i = 0; i < 8; ++i) b[i] = uint8_t(v >> (8 * i));
  fwrite_all(f, b, 8, path);
}
uint32_t rd_u32(FILE *f, const std::string &path) {
  uint8_t b[4];
  fread_all(f, b, 4, path);
  return uint32_t(b[0]) | uint32_t(b[1]) << 8 | uint32_t(b[2]) << 16 | uint32_t(b[3]) << 24;
}
uint64_t rd_u64(FILE *f, const std::string &path) {
  uint8_t b[8];
  fread_all(f, b, 8, path);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= uint64_t(b[i]) << (8 * i);
  return v;
}

}  // namespace

std::vector<uint8_t> zlib_deflate(const void *data, size_t size) {
  uLongf bound = compressBound(uLong(size));
  std::vector<uint8_t> out(bound);
  int rc = compress2(out.data(), &bound, static_cast<const Bytef *>(data), uLong(size), 6);
  TFG_CHECK(rc == Z_OK, "zlib deflate failed, rc=", rc);
  out.resize(bound);
  return out;
}

std::vector<uint8_t> zlib_inflate(const void *data, size_t size, size_t raw_size) {
  std::vector<uint8_t> out(raw_size);
  uLongf n = uLongf(raw_size);
  int rc = uncompress(out.data(), &n, static_cast<const Bytef *>(data), uLong(size));
  TFG_CHECK(rc == Z_OK && n == raw_size, "zlib inflate failed, rc=", rc);
  return out;
}

ArchiveWriter::ArchiveWriter(const std::string &path) : path_(path) {
  FILE *f = std::fopen(path.c_str(), "wb");
  TFG_CHECK(f != nullptr, "cannot create archive: ", path);
  file_ = f;
  fwrite_all(f, kMagic, 4, path_);
  wr_u32(f, kVersion, path_);
}

ArchiveWriter::~ArchiveWriter() {
  try {
    finish();
  } catch (...) {
    // destructor swallows IO failures; call finish() directly to observe them
  }
}

void ArchiveWriter::add(const std::string &name, const void *data, size_t size) {
  TFG_CHECK(!finished_, "archive already finished: ", path_);
  TFG_CHECK(!name.empty(), "empty entry name");
  FILE *f = static_cast<FILE *>(file_);
  Entry e;
  e.name = name;
  e.offset = uint64_t(std::ftell(f));
  e.raw_size = size;
  std::vector<uint8_t> packed = zlib_deflate(data, size);
  e.stored_size = packed.size();
  fwrite_all(f, packed.data(), packed.size(), path_);
  entries_.push_back(std::move(e));
}

void ArchiveWriter::add_string(const std::string &name, const std::string &text) {
  add(name, text.data(), text.size());
}

void ArchiveWriter::add_bytes(const std::string &name, const std::vector<uint8_t> &bytes) {
  add(name, bytes.data(), bytes.size());
}

void ArchiveWriter::finish() {
  if (finished_ || file_ == nullptr) return;
  FILE *f = static_cast<FILE *>(file_);
  const uint64_t dir_offset = uint64_t(std::ftell(f));
  wr_u64(f, uint64_t(entries_.size()), path_);
  for (const Entry &e : entries_) {
    wr_u32(f, uint32_t(e.name.size()), path_);
    fwrite_all(f, e.name.data(), e.name.size(), path_);
    wr_u64(f, e.offset, path_);
    wr_u64(f, e.raw_size, path_);
    wr_u64(f, e.stored_size, path_);
  }
  wr_u64(f, dir_offset, path_);
  fwrite_all(f, kFooter, 4, path_);
  TFG_CHECK(std::fclose(f) == 0, "close failed: ", path_);
  file_ = nullptr;
  finished_ = true;
}

ArchiveReader::ArchiveReader(const std::string &path) : path_(path) {
  FILE *f = std::fopen(path.c_str(), "rb");
  TFG_CHECK(f != nullptr, "cannot open archive: ", path);
  file_ = f;

  char magic[4];
  fread_all(f, magic, 4, path_);
  TFG_CHECK(std::memcmp(magic, kMagic, 4) == 0, "not a TFAR archive: ", path);
  const uint32_t version = rd_u32(f, path_);
  TFG_CHECK(version == kVersion, "unsupported archive version ", version, ": ", path);

  TFG_CHECK(std::fseek(f, -12, SEEK_END) == 0, "seek failed: ", path);
  const uint64_t dir_offset = rd_u64(f, path_);
  char footer[4];
  fread_all(f, footer, 4, path_);
  TFG_CHECK(std::memcmp(footer, kFooter, 4) == 0, "corrupt archive footer: ", path);

  TFG_CHECK(std::fseek(f, long(dir_offset), SEEK_SET) == 0, "seek failed: ", path);
  const uint64_t count = rd_u64(f, path_);
  for (uint64_t i = 0; i < count; ++i) {
    const uint32_t name_len = rd_u32(f, path_);
    std::string name(name_len, '\0');
    fread_all(f, name.data(), name_len, path_);
    Entry e;
    e.offset = rd_u64(f, path_);
    e.raw_size = rd_u64(f, path_);
    e.stored_size = rd_u64(f, path_);
    entries_[name] = e;
    order_.push_back(name);
  }
}

ArchiveReader::~ArchiveReader() {
  if (file_) std::fclose(static_cast<FILE *>(file_));
}

bool ArchiveReader::contains(const std::string &name) const { return entries_.count(name) > 0; }

std::vector<uint8_t> ArchiveReader::read(const std::string &name) const {
  auto it = entries_.find(name);
  TFG_CHECK(it != entries_.end(), "archive entry missing: ", name, " in ", path_);
  FILE *f = static_cast<FILE *>(file_);
  TFG_CHECK(std::fseek(f, long(it->second.offset), SEEK_SET) == 0, "seek failed: ", path_);
  std::vector<uint8_t> packed(it->second.stored_size);
  fread_all(f, packed.data(), packed.size(), path_);
  return zlib_inflate(packed.data(), packed.size(), it->second.raw_size);
}

std::string ArchiveReader::read_string(const std::string &name) const {
  std::vector<uint8_t> b = read(name);
  return std::string(b.begin(), b.end());
}

}  // namespace tfg
