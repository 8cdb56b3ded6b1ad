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

#include "apkleak/error.hpp"
#include "apkleak/ingest.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace apkleak {

std::vector<std::string> default_keywords();

struct KeywordConfig {
    std::vector<std::string> keywords = default_keywords();
    // "Length over ten": literals need at least this many code points.
    std::size_t min_literal_length = 11;
    bool case_insensitive = true;
    // Pair dex pool strings with keyword-bearing identifiers at most two
    // pool slots away. Off by default.
    bool dex_adjacency = false;

    // Throws Error{Config}.
    void validate() const;
    bool name_matches(std::string_view name) const;
};

// A name = "literal" definition found in a unit, before any keyword or
// length filtering.
struct Definition {
    std::string name;
    std::string value;
    std::uint32_t line = 0;
};

struct SecretCandidate {
    AppRef app;
    std::string rel_path;
    std::uint32_t line = 0;
    std::string variable_name;
    std::string value;
    bool numeric_only = false;
};

// Smali fields, const-string + sput/iput pairs, manifest meta-data, XML
// string resources, JSON and properties pairs; dex pool adjacency when
// `config.dex_adjacency` is set. Output is in line order.
std::vector<Definition> extract_definitions(const ScanUnit& unit, const KeywordConfig& config,
                                            const WarningSink& warnings = {});

std::vector<SecretCandidate> extract_candidates(const ScanUnit& unit, const KeywordConfig& config,
                                                const WarningSink& warnings = {});

bool is_numeric_only(std::string_view value) noexcept;

SecretCandidate flag_numeric_only(SecretCandidate candidate);

// Decodes smali string escapes (\" \\ \' \n \t \r \b \f \uXXXX, with
// surrogate pairs recombined). Unknown escapes are kept verbatim.
std::string decode_smali_literal(std::string_view body, const WarningSink& warnings = {});

std::string decode_xml_entities(std::string_view text);

} // namespace apkleak
