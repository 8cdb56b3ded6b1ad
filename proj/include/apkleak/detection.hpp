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
#include "apkleak/ingest.hpp"

#include <boost/regex.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace apkleak {

namespace services {
inline constexpr std::string_view google_maps = "google_maps";
inline constexpr std::string_view google_translation = "google_translation";
inline constexpr std::string_view google_cloud_vision = "google_cloud_vision";
inline constexpr std::string_view youtube = "youtube";
inline constexpr std::string_view fcm = "fcm";
inline constexpr std::string_view twitter = "twitter";
inline constexpr std::string_view facebook = "facebook";
} // namespace services

// Report order for the built-in services; unknown ids sort after them.
int service_order(std::string_view service) noexcept;
bool service_less(std::string_view a, std::string_view b) noexcept;

enum class FactorRole { single_key, server_key, client_id, client_secret };

const char* to_string(FactorRole role) noexcept;
FactorRole parse_factor_role(std::string_view text); // throws Error{Config}

constexpr bool is_multi_factor(FactorRole role) noexcept {
    return role == FactorRole::client_id || role == FactorRole::client_secret;
}

constexpr FactorRole counterpart_of(FactorRole role) noexcept {
    return role == FactorRole::client_id ? FactorRole::client_secret : FactorRole::client_id;
}

struct PatternMatch {
    std::string value;
    std::size_t offset = 0;
};

// One row of the pattern file. Matches are anchored on character class:
// the character before and after a match must not belong to
// `boundary_class` (by default the last bracket expression of the regex).
class ServicePattern {
public:
    // Throws Error{Config} when the regex does not compile or a
    // multi-factor role has no name hints.
    ServicePattern(std::string service, FactorRole role, std::string regex, std::vector<std::string> name_hints = {},
                   std::vector<std::string> role_keywords = {}, std::string boundary_class = {});

    const std::string& service() const { return service_; }
    FactorRole role() const { return role_; }
    const std::string& source() const { return source_; }
    const std::string& boundary_class() const { return boundary_class_; }
    const std::vector<std::string>& name_hints() const { return name_hints_; }
    const std::vector<std::string>& role_keywords() const { return role_keywords_; }

    std::vector<PatternMatch> find_all(std::string_view text) const;

    // Whole-string match under the same anchoring rule.
    bool matches_exactly(std::string_view text) const;

    // True when a service hint occurs in the variable name or the file path.
    bool hint_matches(std::string_view variable_name, std::string_view rel_path) const;

private:
    std::string service_;
    FactorRole role_;
    std::string source_;
    std::string boundary_class_;
    std::vector<std::string> name_hints_;
    std::vector<std::string> role_keywords_;
    boost::regex anchored_;
};

class PatternSet {
public:
    PatternSet() = default;
    explicit PatternSet(std::vector<ServicePattern> patterns) : patterns_(std::move(patterns)) {}

    // The built-in table (same content as data/patterns.json).
    static PatternSet defaults();
    static PatternSet load(const std::filesystem::path& path);
    static PatternSet from_json_text(std::string_view text);

    const std::vector<ServicePattern>& patterns() const { return patterns_; }
    std::vector<const ServicePattern*> for_service(std::string_view service) const;
    std::vector<const ServicePattern*> for_role(std::string_view service, FactorRole role) const;
    // Services with client_id/client_secret rows, in report order.
    std::vector<std::string> multi_factor_services() const;

private:
    std::vector<ServicePattern> patterns_;
};

struct FactorEvidence {
    std::string value;
    std::string rel_path;
    std::uint32_t line = 0;

    bool operator==(const FactorEvidence&) const = default;
};

struct DetectedCredential {
    std::string service;
    std::map<FactorRole, FactorEvidence> factors;
    AppRef app;
    std::string dataset_tag;
};

// Google-family keys yield one credential per google service plus FCM,
// because each row of the pattern set is matched independently.
std::vector<DetectedCredential> match_single_factor(const ScanUnit& unit, const PatternSet& patterns);

struct Seed {
    FactorRole role = FactorRole::client_id;
    std::string value;
    std::uint32_t line = 0;
    std::string variable_name;
};

// A definition is a seed when (1) its value matches the role's regex,
// (2) its name has a keyword (global or the row's role keyword), and
// (3) its name or the file path has a service hint.
std::vector<Seed> find_multi_factor_seeds(const ScanUnit& unit, std::string_view service, const PatternSet& patterns,
                                          const KeywordConfig& keywords, const WarningSink& warnings = {});

struct LocatedValue {
    std::string value;
    std::uint32_t line = 0;
};

// Regex-only search for `missing_role` values within this one unit.
std::vector<LocatedValue> counterpart_search(const ScanUnit& unit, std::string_view service, FactorRole missing_role,
                                             const PatternSet& patterns);

struct LocatedFactor {
    AppRef app;
    FactorEvidence evidence;
};

// Cartesian product of ids and secrets. Throws Error{InvalidArgument} if any
// factor belongs to another app.
std::vector<DetectedCredential> pair_credentials(std::string_view service, std::span<const LocatedFactor> ids,
                                                 std::span<const LocatedFactor> secrets, const AppRef& app);

// Full detection over every unit of one app.
std::vector<DetectedCredential> detect_app(std::span<const ScanUnit> units, const PatternSet& patterns,
                                           const KeywordConfig& keywords, const WarningSink& warnings = {});

// prefix + "***" + suffix, counted in code points. Throws
// Error{RedactionTooWide} unless keep_prefix + keep_suffix < length.
std::string redact(std::string_view value, std::size_t keep_prefix, std::size_t keep_suffix);

// Report form: at most four leading code points, then "***".
std::string redact_for_report(std::string_view value);

} // namespace apkleak
