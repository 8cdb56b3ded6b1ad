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
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace apkleak::testing {

class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

void write_file(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

// ---- dex fixtures ----

std::vector<std::uint8_t> encode_mutf8(std::u16string_view units);
std::vector<std::uint8_t> encode_mutf8(std::string_view ascii);

// A dex image with only a header and a string pool. Each entry is raw
// MUTF-8 bytes plus its UTF-16 length.
struct RawDexString {
    std::vector<std::uint8_t> bytes;
    std::uint32_t utf16_length = 0;
};
std::vector<std::uint8_t> build_dex(const std::vector<RawDexString>& strings, const char* version = "035");
std::vector<std::uint8_t> build_dex_ascii(const std::vector<std::string>& strings);

// Independent decoder: MUTF-8 bytes -> UTF-16 units -> code points ->
// UTF-8, with U+FFFD for anything malformed.
std::string reference_mutf8_to_utf8(const std::vector<std::uint8_t>& bytes);

// ---- zip fixtures ----

struct ZipFixtureEntry {
    std::string name;
    std::string data;
    bool deflate = false;
};
void write_zip(const std::filesystem::path& path, const std::vector<ZipFixtureEntry>& entries);

// ---- oracles ----

std::vector<std::uint32_t> reference_code_points(std::string_view utf8);
double naive_stddev(std::string_view utf8);

std::vector<std::string> reference_split(const std::string& s);
std::set<std::string> load_word_set(const std::filesystem::path& path);
double reference_word_score(const std::string& s, const std::set<std::string>& words);

// A regex made of literal and character-class segments, checked by hand.
struct Segment {
    std::string literal;     // non-empty for a literal segment
    std::string class_chars; // otherwise: the allowed characters
    std::size_t min = 0;
    std::size_t max = 0;
};
struct ShapeOracle {
    std::vector<std::vector<Segment>> alternatives;
    std::string boundary_chars;

    bool matches_exactly(const std::string& s) const;
    // All non-overlapping leftmost matches with class-boundary anchoring.
    std::vector<std::string> find_all(const std::string& text) const;
};

std::string chars_of(const std::string& ranges); // "A-Za-z0-9_-" -> explicit set

struct PatternCase {
    std::string service;
    std::string role;
    ShapeOracle oracle;
};
// The built-in service table, described independently as shapes.
std::vector<PatternCase> reference_pattern_table();

std::string random_conforming(const ShapeOracle& oracle, std::mt19937_64& rng);
// Near misses: each is one edit away from a conforming value.
std::vector<std::string> near_miss_mutants(const ShapeOracle& oracle, std::mt19937_64& rng);

// ---- planted corpus ----

struct PlantedSecret {
    std::string kind;
    std::string value;
    std::string rel_path;
    std::uint32_t line = 0;
};

struct PlantedCorpus {
    std::filesystem::path root;
    std::string package_id;
    std::vector<PlantedSecret> secrets;
    // service -> (client_id value, client_secret value)
    std::map<std::string, std::pair<std::string, std::string>> pairs;
    std::size_t noise_lines = 0;
    // rel_path -> lines holding planted secrets
    std::map<std::string, std::set<std::uint32_t>> planted_lines;
};

PlantedCorpus build_planted_corpus(const std::filesystem::path& dir);

} // namespace apkleak::testing
