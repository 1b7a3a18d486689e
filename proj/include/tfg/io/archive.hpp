// io/archive.hpp

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

#ifndef TFG_IO_ARCHIVE_HPP_
#define TFG_IO_ARCHIVE_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tfg {

// Single-file container used for synthetic corpora and checkpoints.
//
// Layout (all integers little-endian):
//   "TFAR" | u32 version | entry payloads... | directory | u64 dir_offset | "RAFT"
// Each payload is a zlib stream; the directory lists, per entry and in
// insertion order: u32 name_len, name bytes, u64 offset, u64 raw_size,
// u64 stored_size. Fixed compression settings keep equal input bytes mapping
// to equal archive bytes.
class ArchiveWriter {
 public:
  explicit ArchiveWriter(const std::string &path);
  ~ArchiveWriter();

  ArchiveWriter(const ArchiveWriter &) = delete;
  ArchiveWriter &operator=(const ArchiveWriter &) = delete;

  void add(const std::string &name, const void *data, size_t size);
  void add_string(const std::string &name, const std::string &text);
  void add_bytes(const std::string &name, const std::vector<uint8_t> &bytes);

  // Writes the directory and closes the file. Called by the destructor if
  // not invoked explicitly; explicit use surfaces IO errors.
  void finish();

 private:
  struct Entry {
    std::string name;
    uint64_t offset = 0, raw_size = 0, stored_size = 0;
  };
  std::string path_;
  void *file_ = nullptr;  // FILE*
  std::vector<Entry> entries_;
  bool finished_ = false;
};

class ArchiveReader {
 public:
  explicit ArchiveReader(const std::string &path);
  ~ArchiveReader();

  ArchiveReader(const ArchiveReader &) = delete;
  ArchiveReader &operator=(const ArchiveReader &) = delete;

  bool contains(const std::string &name) const;
  std::vector<uint8_t> read(const std::string &name) const;
  std::string read_string(const std::string &name) const;
  const std::vector<std::string> &names() const { return order_; }

 private:
  struct Entry {
    uint64_t offset = 0, raw_size = 0, stored_size = 0;
  };
  std::string path_;
  void *file_ = nullptr;  // FILE*
  std::map<std::string, Entry> entries_;
  std::vector<std::string> order_;
};

// zlib helpers shared with the feature cache
std::vector<uint8_t> zlib_deflate(const void *data, size_t size);
std::vector<uint8_t> zlib_inflate(const void *data, size_t size, size_t raw_size);

}  // namespace tfg

#endif  // TFG_IO_ARCHIVE_HPP_
