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

#include "apkleak/detection.hpp"
#include "apkleak/extraction.hpp"

#include <compare>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace apkleak {

// Service plus sorted (role, value) factors. Equal keys are the same
// credential whatever app or dataset carried them.
struct DedupKey {
    std::string service;
    std::vector<std::pair<FactorRole, std::string>> factors;

    auto operator<=>(const DedupKey&) const = default;
};

DedupKey dedup_key(const DetectedCredential& credential);

// Factor values only. One google key reported under several google
// services collapses to a single ValueKey.
struct ValueKey {
    std::vector<std::string> values;

    auto operator<=>(const ValueKey&) const = default;
};

ValueKey value_key(const DetectedCredential& credential);

struct SummaryRow {
    std::string label;
    std::uint64_t count_a = 0;
    std::uint64_t count_b = 0;
    std::uint64_t total = 0;
    std::uint64_t overlap = 0;
};

// One row per service present (report order), then a "Total" row that sums
// the service rows. total = count_a + count_b - overlap on every row.
std::vector<SummaryRow> dedup_and_overlap(std::span<const DetectedCredential> a,
                                          std::span<const DetectedCredential> b);

struct AppCount {
    std::string package_id;
    std::uint64_t credentials = 0;
    std::vector<std::string> services;
};

// Distinct value-level credentials per app, count descending then package.
std::vector<AppCount> per_app_counts(std::span<const DetectedCredential> detections);

struct SharedCredential {
    DedupKey key;
    std::vector<std::string> apps;
};

// Keys found in at least `min_apps` distinct packages. Sorted by app count
// descending, then service order, then key.
std::vector<SharedCredential> shared_credentials(std::span<const DetectedCredential> detections,
                                                 std::size_t min_apps = 2);

struct MultiSecretFile {
    std::string package_id;
    std::string rel_path;
    std::uint64_t secrets = 0;
};

// Files holding two or more distinct secret values, from candidates and
// detection factors together. Count descending, then package and path.
std::vector<MultiSecretFile> multi_secret_files(std::span<const SecretCandidate> candidates,
                                                std::span<const DetectedCredential> detections);

struct LifespanRecord {
    ValueKey key;
    std::string package_id;
    std::vector<std::string> years_present; // in tag order
    std::uint32_t span = 0;
    bool removed_but_valid = false;
};

struct LifespanReport {
    std::vector<LifespanRecord> records;
    // histogram[s - 1] = records with span s, for s in 1..tag count.
    std::vector<std::uint64_t> histogram;
    std::vector<double> percentages;
    std::uint64_t removed_but_valid = 0;
};

// Span counts distinct tags present, gaps included. `valid_keys` holds the
// keys whose latest validation was `valid`. Throws Error{MissingTagOrder}
// when the order is empty or misses a detection's tag, and
// Error{InvalidArgument} when it lists fewer than two tags.
LifespanReport lifespan(std::span<const DetectedCredential> detections, std::span<const std::string> tag_order,
                        const std::set<ValueKey>& valid_keys = {});

} // namespace apkleak
