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

#include "apkleak/ranking.hpp"

#include "apkleak/text.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <tuple>

namespace apkleak {

namespace {

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_letter(char c) { return is_upper(c) || is_lower(c); }

void split_camel(std::string_view run, std::vector<std::string>& out) {
    std::size_t start = 0;
    for (std::size_t i = 1; i < run.size(); ++i) {
        const bool lower_to_upper = is_lower(run[i - 1]) && is_upper(run[i]);
        const bool acronym_end = is_upper(run[i - 1]) && is_upper(run[i]) && i + 1 < run.size() && is_lower(run[i + 1]);
        if (lower_to_upper || acronym_end) {
            out.emplace_back(run.substr(start, i - start));
            start = i;
        }
    }
    out.emplace_back(run.substr(start));
}

// Uniform double in (0, 1] from the top 53 bits.
double unit_interval(std::mt19937_64& rng) {
    return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

auto sample_order(const SecretCandidate& c) {
    return std::tie(c.app->package_id, c.rel_path, c.line, c.variable_name, c.value);
}

} // namespace

Dictionary Dictionary::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot read dictionary " + path.string());
    Dictionary dict;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) dict.words_.insert(to_lower_ascii(line));
    }
    return dict;
}

Dictionary Dictionary::from_words(std::span<const std::string> words) {
    Dictionary dict;
    for (const auto& w : words)
        if (!w.empty()) dict.words_.insert(to_lower_ascii(w));
    return dict;
}

bool Dictionary::contains(std::string_view word) const {
    return words_.count(to_lower_ascii(word)) != 0;
}

double diversity_score(std::string_view s) {
    if (s.empty()) throw Error(ErrorCode::EmptyString, "diversity_score of empty string");
    // Welford's running mean/variance.
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t n = 0;
    for (std::uint32_t cp : utf8_code_points(s)) {
        ++n;
        const double x = static_cast<double>(cp);
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }
    return std::sqrt(std::max(0.0, m2 / static_cast<double>(n)));
}

std::vector<std::string> split_words(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && !is_letter(s[i])) ++i;
        const std::size_t start = i;
        while (i < s.size() && is_letter(s[i])) ++i;
        if (i > start) split_camel(s.substr(start, i - start), out);
    }
    return out;
}

double word_score(std::string_view s, const Dictionary& dictionary) {
    if (s.empty()) throw Error(ErrorCode::EmptyString, "word_score of empty string");
    const auto parts = split_words(s);
    if (parts.empty()) return 1.0;
    const auto non_words = std::count_if(parts.begin(), parts.end(),
                                         [&](const std::string& p) { return !dictionary.contains(p); });
    return static_cast<double>(non_words) / static_cast<double>(parts.size());
}

RankScore rank(const SecretCandidate& candidate, const Dictionary& dictionary) {
    RankScore score;
    score.diversity = diversity_score(candidate.value);
    score.words = word_score(candidate.value, dictionary);
    score.total = score.diversity + score.words;
    return score;
}

std::vector<SecretCandidate> weighted_sample(std::span<const RankedCandidate> population, const SampleSpec& spec) {
    if (spec.sample_size > population.size())
        throw Error(ErrorCode::SampleTooLarge, "sample size " + std::to_string(spec.sample_size) +
                                                   " exceeds population of " + std::to_string(population.size()));

    // Efraimidis-Spirakis: key = ln(u) / w, keep the k largest keys.
    std::mt19937_64 rng(spec.seed);
    std::vector<std::pair<double, std::size_t>> keys;
    keys.reserve(population.size());
    for (std::size_t i = 0; i < population.size(); ++i) {
        const double w = std::max(population[i].score.total, kMinSampleWeight);
        keys.emplace_back(std::log(unit_interval(rng)) / w, i);
    }
    const auto by_key = [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    };
    const auto k = static_cast<std::ptrdiff_t>(spec.sample_size);
    std::partial_sort(keys.begin(), keys.begin() + k, keys.end(), by_key);

    std::vector<SecretCandidate> out;
    out.reserve(spec.sample_size);
    for (std::ptrdiff_t i = 0; i < k; ++i) out.push_back(population[keys[static_cast<std::size_t>(i)].second].candidate);
    if (spec.include_numeric_only)
        for (const auto& rc : population)
            if (rc.candidate.numeric_only) out.push_back(rc.candidate);

    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return sample_order(a) < sample_order(b); });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const auto& a, const auto& b) { return sample_order(a) == sample_order(b); }),
              out.end());
    return out;
}

double margin_of_error(std::uint64_t n, double confidence) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "sample size must be positive");
    if (!(confidence > 0.0 && confidence < 1.0))
        throw Error(ErrorCode::BadConfidence, "confidence must lie in (0, 1)");
    const boost::math::normal standard;
    const double z = boost::math::quantile(standard, 1.0 - (1.0 - confidence) / 2.0);
    return z * std::sqrt(0.25 / static_cast<double>(n));
}

} // namespace apkleak
