/*
Copyright 2026 The apkleak Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace apkleak {

struct ZipEntry {
    std::string name;
    std::uint16_t method = 0;
    std::uint32_t crc32 = 0;
    std::uint64_t compressed_size = 0;
    std::uint64_t uncompressed_size = 0;
    std::uint64_t local_header_offset = 0;
};

// Read-only view of a ZIP archive. The central directory is parsed eagerly;
// entry data is read on demand. Supports stored and deflated entries and the
// ZIP64 extensions needed for large archives.
class ZipArchive {
public:
    // Throws Error{CorruptArchive} when the central directory cannot be read.
    static ZipArchive open(const std::filesystem::path& path);

    const std::vector<ZipEntry>& entries() const { return entries_; }

    // Throws Error{CorruptArchive} on bad local header, unsupported method,
    // inflate failure or CRC mismatch.
    std::vector<std::uint8_t> read(const ZipEntry& entry) const;

    static constexpr std::uint64_t max_entry_size = std::uint64_t{1} << 30;

private:
    explicit ZipArchive(std::filesystem::path path) : path_(std::move(path)) {}

    std::filesystem::path path_;
    std::vector<ZipEntry> entries_;
};

// True when the file starts with the local-file-header magic "PK\3\4".
bool has_zip_magic(const std::filesystem::path& path);

} // namespace apkleak
