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

#include "apkleak/zip_archive.hpp"

#include "apkleak/error.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <fstream>

namespace apkleak {

namespace {

constexpr std::uint32_t kLocalHeaderSig = 0x04034b50;
constexpr std::uint32_t kCentralHeaderSig = 0x02014b50;
constexpr std::uint32_t kEndOfCentralDirSig = 0x06054b50;
constexpr std::uint32_t kZip64LocatorSig = 0x07064b50;
constexpr std::uint32_t kZip64EndSig = 0x06064b50;

std::uint16_t le16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t le32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint64_t le64(const std::uint8_t* p) {
    return static_cast<std::uint64_t>(le32(p)) | (static_cast<std::uint64_t>(le32(p + 4)) << 32);
}

[[noreturn]] void corrupt(const std::filesystem::path& path, const std::string& why) {
    throw Error(ErrorCode::CorruptArchive, path.string() + ": " + why);
}

std::vector<std::uint8_t> read_at(std::ifstream& in, std::uint64_t offset, std::uint64_t size,
                                  const std::filesystem::path& path) {
    std::vector<std::uint8_t> buf(size);
    in.clear();
    in.seekg(static_cast<std::streamoff>(offset));
    if (!in || !in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(size)))
        corrupt(path, "read past end of file");
    return buf;
}

void apply_zip64_extra(ZipEntry& e, const std::uint8_t* extra, std::size_t len, bool need_usize,
                       bool need_csize, bool need_offset) {
    std::size_t pos = 0;
    while (pos + 4 <= len) {
        const std::uint16_t id = le16(extra + pos);
        const std::uint16_t size = le16(extra + pos + 2);
        if (pos + 4 + size > len) return;
        if (id == 0x0001) {
            const std::uint8_t* p = extra + pos + 4;
            const std::uint8_t* end = p + size;
            if (need_usize && p + 8 <= end) { e.uncompressed_size = le64(p); p += 8; }
            if (need_csize && p + 8 <= end) { e.compressed_size = le64(p); p += 8; }
            if (need_offset && p + 8 <= end) { e.local_header_offset = le64(p); }
            return;
        }
        pos += 4 + size;
    }
}

} // namespace

bool has_zip_magic(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::array<char, 4> magic{};
    if (!in.read(magic.data(), magic.size())) return false;
    return magic == std::array<char, 4>{'P', 'K', '\x03', '\x04'};
}

ZipArchive ZipArchive::open(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    in.seekg(0, std::ios::end);
    const auto file_size = static_cast<std::uint64_t>(in.tellg());
    if (file_size < 22) corrupt(path, "too small for an end-of-central-directory record");

    // The EOCD record sits in the last 22 + 65535 (max comment) bytes.
    const std::uint64_t tail_size = std::min<std::uint64_t>(file_size, 22 + 0xFFFF);
    const auto tail = read_at(in, file_size - tail_size, tail_size, path);
    std::int64_t eocd = -1;
    for (std::int64_t i = static_cast<std::int64_t>(tail_size) - 22; i >= 0; --i) {
        if (le32(tail.data() + i) == kEndOfCentralDirSig) {
            eocd = i;
            break;
        }
    }
    if (eocd < 0) corrupt(path, "end-of-central-directory record not found");

    const std::uint8_t* e = tail.data() + eocd;
    std::uint64_t entry_count = le16(e + 10);
    std::uint64_t cd_size = le32(e + 12);
    std::uint64_t cd_offset = le32(e + 16);

    const std::uint64_t eocd_abs = file_size - tail_size + static_cast<std::uint64_t>(eocd);
    if ((entry_count == 0xFFFF || cd_size == 0xFFFFFFFF || cd_offset == 0xFFFFFFFF) && eocd_abs >= 20) {
        const auto locator = read_at(in, eocd_abs - 20, 20, path);
        if (le32(locator.data()) == kZip64LocatorSig) {
            const std::uint64_t z64_off = le64(locator.data() + 8);
            const auto z64 = read_at(in, z64_off, 56, path);
            if (le32(z64.data()) != kZip64EndSig) corrupt(path, "bad ZIP64 end record");
            entry_count = le64(z64.data() + 32);
            cd_size = le64(z64.data() + 40);
            cd_offset = le64(z64.data() + 48);
        }
    }
    if (cd_offset > file_size || cd_size > file_size - cd_offset)
        corrupt(path, "central directory lies outside the file");

    const auto cd = read_at(in, cd_offset, cd_size, path);
    ZipArchive archive(path);
    archive.entries_.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(entry_count, 1 << 20)));
    std::size_t pos = 0;
    for (std::uint64_t i = 0; i < entry_count; ++i) {
        if (pos + 46 > cd.size() || le32(cd.data() + pos) != kCentralHeaderSig)
            corrupt(path, "truncated central directory entry " + std::to_string(i));
        const std::uint8_t* h = cd.data() + pos;
        ZipEntry entry;
        entry.method = le16(h + 10);
        entry.crc32 = le32(h + 16);
        entry.compressed_size = le32(h + 20);
        entry.uncompressed_size = le32(h + 24);
        const std::uint16_t name_len = le16(h + 28);
        const std::uint16_t extra_len = le16(h + 30);
        const std::uint16_t comment_len = le16(h + 32);
        entry.local_header_offset = le32(h + 42);
        if (pos + 46 + name_len + extra_len + comment_len > cd.size())
            corrupt(path, "central directory entry overruns directory");
        entry.name.assign(reinterpret_cast<const char*>(h + 46), name_len);
        apply_zip64_extra(entry, h + 46 + name_len, extra_len, entry.uncompressed_size == 0xFFFFFFFF,
                          entry.compressed_size == 0xFFFFFFFF, entry.local_header_offset == 0xFFFFFFFF);
        archive.entries_.push_back(std::move(entry));
        pos += 46 + name_len + extra_len + comment_len;
    }
    return archive;
}

std::vector<std::uint8_t> ZipArchive::read(const ZipEntry& entry) const {
    std::ifstream in(path_, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path_.string());
    if (entry.uncompressed_size > max_entry_size || entry.compressed_size > max_entry_size)
        corrupt(path_, entry.name + ": entry too large");

    const auto header = read_at(in, entry.local_header_offset, 30, path_);
    if (le32(header.data()) != kLocalHeaderSig) corrupt(path_, entry.name + ": bad local header");
    const std::uint64_t data_offset = entry.local_header_offset + 30 + le16(header.data() + 26) +
                                      le16(header.data() + 28);
    auto raw = read_at(in, data_offset, entry.compressed_size, path_);

    std::vector<std::uint8_t> out;
    if (entry.method == 0) {
        out = std::move(raw);
    } else if (entry.method == 8) {
        out.resize(static_cast<std::size_t>(entry.uncompressed_size));
        z_stream zs{};
        if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) corrupt(path_, entry.name + ": inflateInit failed");
        zs.next_in = raw.data();
        zs.avail_in = static_cast<uInt>(raw.size());
        zs.next_out = out.data();
        zs.avail_out = static_cast<uInt>(out.size());
        const int rc = inflate(&zs, Z_FINISH);
        const auto produced = zs.total_out;
        inflateEnd(&zs);
        if (rc != Z_STREAM_END || produced != out.size())
            corrupt(path_, entry.name + ": inflate failed");
    } else {
        corrupt(path_, entry.name + ": unsupported compression method " + std::to_string(entry.method));
    }

    const auto crc = ::crc32(0L, out.data(), static_cast<uInt>(out.size()));
    if (crc != entry.crc32) corrupt(path_, entry.name + ": CRC mismatch");
    return out;
}

} // namespace apkleak
