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

#include "apkleak/extraction.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace apkleak {

// Case-insensitive English word list.
class Dictionary {
public:
    Dictionary() = default;

    // One word per line, UTF-8. Throws Error{Io}.
    static Dictionary load(const std::filesystem::path& path);
    static Dictionary from_words(std::span<const std::string> words);

    bool contains(std::string_view word) const;
    std::size_t size() const { return words_.size(); }

private:
    std::unordered_set<std::string> words_;
};

struct RankScore {
    double diversity = 0.0;
    double words = 0.0;
    double total = 0.0;
};

// Population standard deviation of the code points of `s`.
// Throws Error{EmptyString}.
double diversity_score(std::string_view s);

// Splits on non-letters, then at camel-case boundaries: lower->upper, and
// before the last capital of an upper-case run followed by lower case
// ("APIKey" -> "API", "Key").
std::vector<std::string> split_words(std::string_view s);

// Fraction of substrings from split_words() that are not dictionary words;
// 1.0 when there are no substrings. Throws Error{EmptyString}.
double word_score(std::string_view s, const Dictionary& dictionary);

RankScore rank(const SecretCandidate& candidate, const Dictionary& dictionary);

struct RankedCandidate {
    SecretCandidate candidate;
    RankScore score;
};

struct SampleSpec {
    std::size_t sample_size = 300;
    bool include_numeric_only = true;
    std::uint64_t seed = 0;
};

inline constexpr double kMinSampleWeight = 1e-9;

// Weighted draw without replacement (exponential keys, weight = total
// score clamped to kMinSampleWeight), then the union with every
// numeric-only candidate. Result is de-duplicated and sorted by
// (package, path, line). Throws Error{SampleTooLarge}.
std::vector<SecretCandidate> weighted_sample(std::span<const RankedCandidate> population, const SampleSpec& spec);

// z(confidence) * sqrt(0.25 / n). Throws Error{BadConfidence} or
// Error{InvalidArgument} for n == 0.
double margin_of_error(std::uint64_t n, double confidence);

} // namespace apkleak
