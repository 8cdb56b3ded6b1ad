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

#include "apkleak/dex.hpp"

#include "apkleak/error.hpp"
#include "apkleak/text.hpp"

#include <algorithm>
#include <array>
#include <string_view>

namespace apkleak {

namespace {

std::uint32_t le32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

bool is_high_surrogate(std::uint32_t u) { return u >= 0xD800 && u <= 0xDBFF; }
bool is_low_surrogate(std::uint32_t u) { return u >= 0xDC00 && u <= 0xDFFF; }

} // namespace

bool is_dex_magic(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 8) return false;
    if (bytes[0] != 'd' || bytes[1] != 'e' || bytes[2] != 'x' || bytes[3] != '\n' || bytes[7] != 0)
        return false;
    const std::string_view version(reinterpret_cast<const char*>(bytes.data() + 4), 3);
    constexpr std::array<std::string_view, 4> supported{"035", "037", "038", "039"};
    return std::find(supported.begin(), supported.end(), version) != supported.end();
}

Mutf8Result decode_mutf8(std::span<const std::uint8_t> bytes) {
    // First pass: bytes -> UTF-16 code units (U+FFFD for bad sequences).
    std::vector<std::uint32_t> units;
    units.reserve(bytes.size());
    bool malformed = false;
    std::size_t i = 0;
    const auto cont = [&](std::size_t k) {
        return k < bytes.size() && (bytes[k] & 0xC0) == 0x80;
    };
    while (i < bytes.size()) {
        const std::uint8_t b = bytes[i];
        if (b < 0x80 && b != 0) {
            units.push_back(b);
            i += 1;
        } else if ((b & 0xE0) == 0xC0 && cont(i + 1)) {
            units.push_back(((b & 0x1Fu) << 6) | (bytes[i + 1] & 0x3Fu));
            i += 2;
        } else if ((b & 0xF0) == 0xE0 && cont(i + 1) && cont(i + 2)) {
            units.push_back(((b & 0x0Fu) << 12) | ((bytes[i + 1] & 0x3Fu) << 6) | (bytes[i + 2] & 0x3Fu));
            i += 3;
        } else {
            units.push_back(0xFFFD);
            malformed = true;
            i += 1;
        }
    }

    // Second pass: recombine surrogate pairs and emit UTF-8.
    Mutf8Result out;
    out.utf8.reserve(units.size());
    for (std::size_t k = 0; k < units.size(); ++k) {
        std::uint32_t u = units[k];
        if (is_high_surrogate(u) && k + 1 < units.size() && is_low_surrogate(units[k + 1])) {
            u = 0x10000 + ((u - 0xD800) << 10) + (units[k + 1] - 0xDC00);
            ++k;
        } else if (is_high_surrogate(u) || is_low_surrogate(u)) {
            u = 0xFFFD;
            malformed = true;
        }
        append_utf8(out.utf8, u);
    }
    out.malformed = malformed;
    return out;
}

DexStringPool parse_dex_string_pool(std::span<const std::uint8_t> bytes) {
    if (!is_dex_magic(bytes)) throw Error(ErrorCode::BadMagic, "not a dex file (bad magic)");
    if (bytes.size() < kDexStringIdsOffOffset + 4)
        throw Error(ErrorCode::TruncatedPool, "dex header truncated");

    DexStringPool pool;
    pool.string_count = le32(bytes.data() + kDexStringIdsSizeOffset);
    const std::uint64_t ids_off = le32(bytes.data() + kDexStringIdsOffOffset);
    const std::uint64_t ids_end = ids_off + std::uint64_t{pool.string_count} * 4;
    if (pool.string_count > 0 && ids_end > bytes.size())
        throw Error(ErrorCode::TruncatedPool, "string_ids table extends past end of buffer");

    pool.entries.reserve(pool.string_count);
    for (std::uint32_t idx = 0; idx < pool.string_count; ++idx) {
        std::size_t pos = le32(bytes.data() + ids_off + std::uint64_t{idx} * 4);
        if (pos >= bytes.size())
            throw Error(ErrorCode::TruncatedPool, "string_data_off of entry " + std::to_string(idx) +
                                                      " is past end of buffer");
        // utf16_size (ULEB128, at most 5 bytes). Only skipped; the NUL
        // terminator bounds the data.
        int shift_bytes = 0;
        while (true) {
            if (pos >= bytes.size() || shift_bytes == 5)
                throw Error(ErrorCode::TruncatedPool, "bad ULEB128 length at entry " + std::to_string(idx));
            const std::uint8_t b = bytes[pos++];
            ++shift_bytes;
            if ((b & 0x80) == 0) break;
        }
        const auto start = bytes.begin() + static_cast<std::ptrdiff_t>(pos);
        const auto nul = std::find(start, bytes.end(), std::uint8_t{0});
        if (nul == bytes.end())
            throw Error(ErrorCode::TruncatedPool, "unterminated string data at entry " + std::to_string(idx));
        auto decoded = decode_mutf8(std::span<const std::uint8_t>(start, nul));
        if (decoded.malformed) pool.malformed.push_back(idx);
        pool.entries.push_back(std::move(decoded.utf8));
    }
    return pool;
}

} // namespace apkleak
