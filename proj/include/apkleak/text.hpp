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
#include <string>
#include <string_view>
#include <vector>

namespace apkleak {

void append_utf8(std::string& out, std::uint32_t code_point);

// Lenient decode: each invalid byte becomes U+FFFD.
std::vector<std::uint32_t> utf8_code_points(std::string_view s);

std::size_t utf8_length(std::string_view s);

std::string to_lower_ascii(std::string_view s);

bool contains_icase(std::string_view haystack, std::string_view needle);

// Splits on '\n', strips a trailing '\r' per line, drops the empty tail
// after a final newline.
std::vector<std::string> split_lines(std::string_view text);

std::string hex_encode(std::string_view bytes);

} // namespace apkleak
