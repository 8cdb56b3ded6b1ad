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
#include <span>
#include <string>
#include <vector>

namespace apkleak {

// Header layout (little-endian).
inline constexpr std::size_t kDexStringIdsSizeOffset = 0x38;
inline constexpr std::size_t kDexStringIdsOffOffset = 0x3C;
inline constexpr std::size_t kDexHeaderSize = 0x70;

struct DexStringPool {
    std::uint32_t string_count = 0;
    // UTF-8 re-encoding of each pool entry, in pool order.
    std::vector<std::string> entries;
    // Pool indices whose MUTF-8 bytes were malformed; offending sequences
    // were replaced by U+FFFD.
    std::vector<std::uint32_t> malformed;
};

// Accepts versions 035, 037, 038 and 039.
bool is_dex_magic(std::span<const std::uint8_t> bytes);

// Throws Error{BadMagic} or Error{TruncatedPool}. Never reads outside `bytes`.
DexStringPool parse_dex_string_pool(std::span<const std::uint8_t> bytes);

struct Mutf8Result {
    std::string utf8;
    bool malformed = false;
};

// Decodes one NUL-free MUTF-8 byte run into standard UTF-8.
Mutf8Result decode_mutf8(std::span<const std::uint8_t> bytes);

} // namespace apkleak
